#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ffenergy/bigint.hpp"
#include "ffenergy/enumerate.hpp"
#include "ffenergy/poly.hpp"
#include "ffenergy/residue_field.hpp"

namespace ffenergy {

struct ClassOptions {
  /// Upper limit on enumerated candidates (polynomials, pairs or triples).
  std::uint64_t enumeration_budget = std::uint64_t{1} << 28;
  unsigned workers = 1;
};

struct ClassCountResult {
  BigInt count;
  double main_term = 0;
  /// Exponent of the error term where one is known (B(r, n)).
  std::optional<double> error_exponent;
  /// "direct" or "triple_enumeration".
  std::string method;
  /// Free-form metadata, e.g. an unmet hypothesis.
  std::string note;
};

/// #{(l1, l2, u) : l1 l2 u = a, l1, l2 in P_n, u ~ h}; main term w_n^2 q^{h-r}.
ClassCountResult count_N(const ResidueField& K, Elem a, int n, int h, const ClassOptions& opt = {});
/// As count_N with u square-free as a polynomial of degree < h (nonzero constants count);
/// main term w_n^2 q^{h-r} (q-1)/q^2.
ClassCountResult count_N_squarefree(const ResidueField& K, Elem a, int n, int h, const ClassOptions& opt = {});
/// #{(l1, l2, v) : l1 l2^2 v = a, l1, l2 in P_n, v ~ h}; main term q^n (q^{n+h-r} + 1).
ClassCountResult count_Q(const ResidueField& K, Elem a, int n, int h, const ClassOptions& opt = {});

/// Visits every nonzero g = a + tF with deg g < k, t in encoding order.
/// Requires deg a < r. Throws BudgetExceeded when q^{k-r} passes the budget.
void for_each_class_member(const ResidueField& K, const Poly& a, int k, const PolyVisitor& visit,
                           const ClassOptions& opt = {});
/// Psi(k, m; F, a): m-smooth g = a (mod F), deg g < k.
BigInt psi_smooth(const ResidueField& K, const Poly& a, int k, int m, const ClassOptions& opt = {});
/// Psi^#(k, m; F, a): as psi_smooth with g square-free.
BigInt psi_smooth_squarefree(const ResidueField& K, const Poly& a, int k, int m, const ClassOptions& opt = {});

/// Two independent counts of square-free products l1 l2 u = g = a (mod F),
/// l1, l2 in P_n, u nonzero of degree < h, for n <= h <= m and 2n + h <= k.
struct TripleCrosscheck {
  BigInt psi_sf;              // Psi^#(k, m; F, a)
  BigInt weighted_members;    // sum over Psi^# members g of rep(g)
  BigInt triples;             // triples counted directly
  std::uint64_t members_represented = 0;  // members with rep(g) > 0
  std::uint64_t max_rep = 0;
  bool sets_agree = false;    // products of triples == members with rep(g) > 0
  /// Every represented member has exactly two (ordered) triples.
  bool unique_representation = false;
  bool pass = false;
};
TripleCrosscheck psi_triple_crosscheck(const ResidueField& K, const Poly& a, int k, int m, int n, int h,
                                       const ClassOptions& opt = {});

struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  /// "3", "3/2" or a terminating decimal like "0.75".
  static Rational parse(std::string_view text);
  std::string to_string() const;
  /// floor(num * x / den)
  std::int64_t floor_times(std::int64_t x) const;
  double to_double() const { return double(num) / double(den); }
};

struct MAlphaOptions {
  bool monic_only = false;
  /// 0 means 4r.
  int degree_ceiling = 0;
  std::uint64_t coverage_budget = std::uint64_t{1} << 20;
  std::uint64_t enumeration_budget = std::uint64_t{1} << 30;
  unsigned workers = 1;
};

struct MAlphaResult {
  /// nullopt is the infinity sentinel (ceiling reached).
  std::optional<int> M;
  int smooth_bound = 0;
  int degree_ceiling = 0;
  bool monic_only = false;
  /// witness[c] for each nonzero class encoding c; the smallest (degree, encoding) representative.
  std::vector<Poly> witness;
  std::uint64_t covered = 0;
  std::uint64_t enumerated = 0;
};

/// Least M such that every nonzero class has a floor(alpha r)-smooth square-free
/// representative of degree <= M.
MAlphaResult find_M_alpha(const ResidueField& K, Rational alpha, const MAlphaOptions& opt = {});
/// Re-checks every witness with the gf-core predicates; returns an empty string when all hold.
std::string validate_witnesses(const ResidueField& K, const MAlphaResult& res);

struct SuvResult {
  BigInt count;
  std::uint64_t s_size = 0;
  std::uint64_t u_size = 0;
  /// q^{T + 2W - r}
  double main_term = 0;
  /// |S| |U|^2 / (q^r - 1), the principal-character term.
  double principal_term = 0;
};

/// #{(s, u, v) in S x U^2 : suv = a (mod F)} with S the monic square-free polynomials
/// of degree T and U the products of kfac distinct monic irreducibles of degree floor(W / kfac).
SuvResult count_suv(const ResidueField& K, Elem a, int T, int W, int kfac, const ClassOptions& opt = {});

}  // namespace ffenergy
