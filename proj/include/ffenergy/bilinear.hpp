#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include "ffenergy/residue_field.hpp"

namespace ffenergy {

struct BilinearOptions {
  /// Double sums with more terms than this are refused.
  double term_limit = 1e9;
  /// 0 means one per hardware thread. Results do not depend on this.
  unsigned workers = 1;
};

struct BilinearResult {
  std::complex<double> value;
  double abs = 0;
  double trivial_bound = 0;
  /// Main term with the q^{o(.)} factor dropped; 0 when none applies.
  double main_term = 0;
  /// abs / main_term, or 0 when main_term is 0.
  double ratio = 0;
  std::uint64_t terms = 0;
  /// Pairs with f = 0 or g = 0 left out of the reciprocal sum.
  std::uint64_t skipped_terms = 0;
  /// Exact inequality (Vinogradov) when one applies.
  std::optional<double> hard_bound;
  bool hard_bound_holds = true;
};

/// W^sqrt = sum_{f ~ m} sum_{g ~ n} alpha_f beta_g sum_{h^2 = fg} psi_c(h).
/// trivial_bound is 2 ||alpha||_1 ||beta||_1 (at most two roots per pair).
BilinearResult bilinear_sqrt(const ResidueField& K, const Weight& alpha, const Weight& beta, Elem c,
                             const BilinearOptions& opt = {});
/// W^inv = sum alpha_f beta_g psi_c(f^{-1} g^{-1}) over f, g != 0.
BilinearResult bilinear_inv(const ResidueField& K, const Weight& alpha, const Weight& beta, Elem c,
                            const BilinearOptions& opt = {});
/// S = sum_{f, g ~ r} alpha_f beta_g psi_c(fg) with the exact bound q^{r/2} ||alpha||_2 ||beta||_2.
BilinearResult vinogradov_sum(const ResidueField& K, const Weight& alpha, const Weight& beta, Elem c,
                              const BilinearOptions& opt = {}, double slack = 1e-9);

/// 3n/2 + r/8 for n < r/3, 15n/8 for r/3 <= n < r.
double b_exponent(int r, int n);
/// Both branches of b_exponent agree at n = r/3 (as real numbers).
bool b_exponent_branches_agree(int r);

/// sum_{l1, l2 in P_n} psi_c(l1^{-1} l2^{-1}) with main term q^{B(r, n)}. Requires 1 <= n < r.
BilinearResult irreducible_reciprocal_sum(const ResidueField& K, int n, Elem c, const BilinearOptions& opt = {});

enum class MonicSet { irreducible, squarefree, monic };
std::string to_string(MonicSet s);
MonicSet parse_monic_set(const std::string& text);

struct CharSumResult {
  std::complex<double> value;
  double abs = 0;
  std::uint64_t terms = 0;
  bool principal = false;
  /// q^{n/2} for P_n and M_n, n q^{n/2} for S_n.
  double main_term = 0;
  /// r * main_term: a desk-scale stand-in for the q^{o(r)} factor.
  double envelope = 0;
  double ratio = 0;
};

/// sum_{f in set_n} chi_index(f), polynomials embedded as residues. Requires 1 <= n < r.
CharSumResult charsum(const ResidueField& K, MonicSet set, int n, std::uint64_t chi_index);
std::complex<double> charsum_irreducibles(const ResidueField& K, int n, std::uint64_t chi_index);
std::complex<double> charsum_squarefree(const ResidueField& K, int n, std::uint64_t chi_index);

/// ||alpha||_2 ||beta||_1^{3/4} ||beta||_inf^{1/4} q^{r/8 + 5m/16 + n/16} (q^{m/8 - r/16} + 1)(q^{n/8 - r/16} + 1)
double bilinear_sqrt_main_term(std::uint32_t q, int r, int m, int n, const Weight& alpha, const Weight& beta);
/// ||alpha||_inf ||beta||_inf q^{r/8 + 3m/4 + 3n/4} (q^{3m/16 - r/16} + 1)(q^{3n/16 - r/16} + 1)
double bilinear_inv_main_term(std::uint32_t q, int r, int m, int n, const Weight& alpha, const Weight& beta);

}  // namespace ffenergy
