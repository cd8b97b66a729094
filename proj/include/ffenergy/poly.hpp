#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ffenergy/bigint.hpp"
#include "ffenergy/fq.hpp"

namespace ffenergy {

/// A polynomial over F_q: coefficients lowest degree first, no trailing zeros.
/// The zero polynomial has an empty coefficient vector and degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<std::uint32_t> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

  static Poly constant(std::uint32_t c) { return Poly(std::vector<std::uint32_t>{c}); }
  /// c * X^n
  static Poly monomial(std::uint32_t c, int n);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  std::uint32_t leading() const { return coeffs_.empty() ? 0 : coeffs_.back(); }
  std::uint32_t coeff(int i) const {
    return i >= 0 && i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : 0;
  }
  const std::vector<std::uint32_t>& coeffs() const { return coeffs_; }

  bool operator==(const Poly&) const = default;

 private:
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }
  std::vector<std::uint32_t> coeffs_;
};

/// Canonical factorization: unit * prod factors[i].first ^ factors[i].second,
/// factors monic irreducible, pairwise distinct, sorted by (degree, encoding).
struct Factorization {
  std::uint32_t unit = 1;
  std::vector<std::pair<Poly, int>> factors;
};

/// Arithmetic in F_q[X]. Stateless apart from the field it is bound to.
class PolyRing {
 public:
  explicit PolyRing(Fq field) : fq_(std::move(field)) {}

  const Fq& field() const { return fq_; }
  std::uint32_t q() const { return fq_.q(); }

  Poly x() const { return Poly::monomial(1, 1); }
  Poly one() const { return Poly::constant(1); }

  Poly add(const Poly& f, const Poly& g) const;
  Poly sub(const Poly& f, const Poly& g) const;
  Poly neg(const Poly& f) const;
  Poly scale(const Poly& f, std::uint32_t c) const;
  Poly mul(const Poly& f, const Poly& g) const;
  /// Quotient and remainder; throws std::domain_error("zero divisor") for g = 0.
  std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g) const;
  Poly rem(const Poly& f, const Poly& g) const;
  Poly quo(const Poly& f, const Poly& g) const;
  /// Monic gcd; gcd(0, 0) = 0.
  Poly gcd(const Poly& f, const Poly& g) const;
  Poly monic(const Poly& f) const;
  Poly derivative(const Poly& f) const;
  std::uint32_t eval(const Poly& f, std::uint32_t x) const;
  Poly mul_mod(const Poly& f, const Poly& g, const Poly& m) const;
  Poly pow_mod(const Poly& f, const BigInt& exponent, const Poly& m) const;
  Poly pow(const Poly& f, unsigned exponent) const;

  bool is_irreducible(const Poly& f) const;
  bool is_squarefree(const Poly& f) const;
  /// Largest degree of an irreducible factor; 0 for nonzero constants.
  int smoothness_degree(const Poly& f) const;
  int mobius(const Poly& g) const;
  Factorization factor(const Poly& f) const;
  Poly expand(const Factorization& fac) const;

  /// Square-free decomposition of a nonzero polynomial: monic pairwise coprime
  /// square-free parts with their multiplicities (constant parts omitted).
  std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& f) const;
  /// Splits a monic square-free polynomial into (product of all irreducible
  /// factors of degree d, d) pairs.
  std::vector<std::pair<Poly, int>> distinct_degree(const Poly& g) const;
  /// Splits a monic square-free g whose irreducible factors all have degree d.
  std::vector<Poly> equal_degree(const Poly& g, int d) const;

  /// Mixed-radix encoding sum c_i q^i. Throws std::overflow_error if the
  /// value does not fit in 64 bits.
  std::uint64_t encode(const Poly& f) const;
  Poly decode(std::uint64_t code) const;

 private:
  Poly frobenius_mod(const Poly& h, const Poly& m) const;

  Fq fq_;
};

/// Parses "c0,c1,...": F_q encodings, ascending degree. Empty text or "0" is the
/// zero polynomial.
Poly parse_poly(std::string_view text, const Fq& field);
std::string format_poly(const Poly& f);
/// Human-readable form like "X^2 + 2X + 1" (coefficients as encodings).
std::string pretty_poly(const Poly& f);

}  // namespace ffenergy
