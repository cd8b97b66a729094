#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ffenergy/bigint.hpp"
#include "ffenergy/residue_field.hpp"

namespace ffenergy {

struct EnergyOptions {
  /// Histogram paths refuse more than this many pairs.
  double pair_limit = 1e9;
  /// Brute-force oracles refuse more than this many triples.
  double oracle_limit = 1e9;
  /// 0 means one per hardware thread.
  unsigned workers = 1;
};

struct EnergyResult {
  /// Exact value on integer paths; round(value.real()) otherwise.
  BigInt exact;
  /// Equal to exact on integer paths.
  std::complex<double> value;
  bool integral = true;
  /// "histogram", "weighted_histogram" or "brute_force".
  std::string method;
  std::uint32_t q = 0;
  int r = 0;
  int m = 0;
  double elapsed_ms = 0;
};

/// {u : u^2 ~ m}, sorted by encoding. Closed under negation.
std::vector<Elem> root_set(const ResidueField& K, int m);

/// r(s) = #{(u, v) in R^2 : u + v = s} for R = root_set(m).
Histogram sum_histogram(const ResidueField& K, int m, const EnergyOptions& opt = {});
/// Q_lambda(1_m) = #{(u, v) in R^2 : u - v = lambda}.
Histogram difference_histogram(const ResidueField& K, int m, const EnergyOptions& opt = {});

/// E^sqrt(1_m) = sum_s r(s)^2, exact.
EnergyResult energy_sqrt(const ResidueField& K, int m, const EnergyOptions& opt = {});
/// E^sqrt(beta) = sum_s G(s)^2 with G(s) = sum_{u+v=s} beta_{u^2} conj(beta_{v^2}).
/// Indicator weights take the exact path.
EnergyResult energy_sqrt(const ResidueField& K, const Weight& beta, const EnergyOptions& opt = {});
/// Literal count of (u, v, x, y) with u + v = x + y and all squares ~ m.
/// Throws std::length_error("oracle too large") past opt.oracle_limit.
BigInt energy_sqrt_bruteforce(const ResidueField& K, int m, const EnergyOptions& opt = {});

/// Q_lambda(beta) = sum_{u - v = lambda} beta_{u^2} conj(beta_{v^2}).
std::complex<double> q_lambda(const ResidueField& K, const Weight& beta, Elem lambda);
/// Q_lambda(beta) for every lambda, indexed by encoding.
std::vector<std::complex<double>> q_lambda_all(const ResidueField& K, const Weight& beta,
                                               const EnergyOptions& opt = {});

/// I_F(a, m) = #{(u, v) : u^{-1} + v^{-1} = a, u, v ~ m, u, v != 0}.
BigInt inv_rep_count(const ResidueField& K, Elem a, int m);
/// I_F(a, m) for every a.
Histogram inv_histogram(const ResidueField& K, int m, const EnergyOptions& opt = {});
/// E^inv(m) = sum_a I_F(a, m)^2, exact.
EnergyResult energy_inv(const ResidueField& K, int m, const EnergyOptions& opt = {});

/// A_lambda = sum_{t in root_set(m)} psi_c(t lambda), indexed by encoding of lambda.
std::vector<std::complex<double>> a_lambda_spectrum(const ResidueField& K, int m, Elem c,
                                                    const EnergyOptions& opt = {});

struct FourthMomentCheck {
  double lhs = 0;  // sum_lambda |A_lambda|^4
  BigInt rhs;      // q^r E^sqrt(1_m)
  double rel_err = 0;
  bool pass = false;
};
FourthMomentCheck fourth_moment_check(const ResidueField& K, int m, Elem c, const EnergyOptions& opt = {},
                                      double tolerance = 1e-6);

/// #{(u, v) : P(u) = v, u ~ m, v ~ m} for P = p[0] + p[1] X + p[2] X^2 with p[2] != 0.
BigInt count_quadratic_image(const ResidueField& K, const std::array<Elem, 3>& p, int m);
/// #{(u, v) : uv = a, u, v ~ m}; a must be nonzero.
BigInt count_hyperbola(const ResidueField& K, Elem a, int m);

/// ||beta||_1^2 ||beta||_inf^2 q^{m/2} (q^{m - r/2} + 1)
double energy_sqrt_main_term(std::uint32_t q, int r, int m, double norm1, double norm_inf);
/// q^{(7m - r)/2} + q^{2m}
double energy_inv_main_term(std::uint32_t q, int r, int m);

}  // namespace ffenergy
