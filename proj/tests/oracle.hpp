#pragma once

// Brute-force reference computations for the test suites. Everything here
// works from the definitions with plain polynomial arithmetic mod F and never
// touches the log/exp tables or the histogram kernels under test.

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "ffenergy/poly.hpp"
#include "ffenergy/residue_field.hpp"

namespace oracle {

using ffenergy::Poly;
using ffenergy::PolyRing;

/// Every polynomial of degree < n (q^n of them), in encoding order.
inline std::vector<Poly> all_below(const PolyRing& ring, int n) {
  std::vector<Poly> out;
  std::uint64_t count = 1;
  for (int i = 0; i < n; ++i) count *= ring.q();
  for (std::uint64_t c = 0; c < count; ++c) out.push_back(ring.decode(c));
  return out;
}

/// Irreducible iff no monic divisor of degree 1..deg/2.
inline bool irreducible_by_trial_division(const PolyRing& ring, const Poly& f) {
  const int n = f.degree();
  for (int d = 1; 2 * d <= n; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= ring.q();
    for (std::uint64_t low = 0; low < count; ++low) {
      Poly g = ring.add(ring.decode(low), Poly::monomial(1, d));
      if (ring.rem(f, g).is_zero()) return false;
    }
  }
  return n >= 1;
}

/// Square-free iff no monic nonconstant g with g^2 | f.
inline bool squarefree_by_trial_division(const PolyRing& ring, const Poly& f) {
  const int n = f.degree();
  for (int d = 1; 2 * d <= n; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= ring.q();
    for (std::uint64_t low = 0; low < count; ++low) {
      Poly g = ring.add(ring.decode(low), Poly::monomial(1, d));
      if (ring.rem(f, ring.mul(g, g)).is_zero()) return false;
    }
  }
  return true;
}

/// Slow model of F_q[X]/F: residues as polynomials of degree < r.
struct NaiveField {
  PolyRing ring;
  Poly F;
  int r;

  NaiveField(const ffenergy::ResidueField& ctx) : ring(ctx.ring()), F(ctx.modulus()), r(ctx.degree()) {}

  std::vector<Poly> elements() const { return all_below(ring, r); }
  Poly mul(const Poly& a, const Poly& b) const { return ring.mul_mod(a, b, F); }
  Poly add(const Poly& a, const Poly& b) const { return ring.add(a, b); }
  Poly sub(const Poly& a, const Poly& b) const { return ring.sub(a, b); }
  bool in_window(const Poly& a, int m) const { return a.degree() < m; }

  Poly inv(const Poly& a) const {
    for (const auto& b : elements())
      if (mul(a, b) == ring.one()) return b;
    return Poly();
  }

  /// All u with u^2 ~ m, found by squaring every element.
  std::vector<Poly> root_set(int m) const {
    std::vector<Poly> out;
    for (const auto& u : elements())
      if (in_window(mul(u, u), m)) out.push_back(u);
    return out;
  }

  /// Tr_{F_{q^r}/F_p} computed as the sum of Frobenius conjugates x^{p^j}.
  std::uint32_t absolute_trace(const Poly& x) const {
    const auto& fq = ring.field();
    const int total = static_cast<int>(fq.e()) * r;
    Poly acc;
    Poly y = x;
    for (int j = 0; j < total; ++j) {
      acc = ring.add(acc, y);
      y = ring.pow_mod(y, ffenergy::BigInt(fq.p()), F);
    }
    // the conjugate sum already lies in F_p, whose encodings are 0..p-1
    return acc.coeff(0);
  }

  std::complex<double> psi(const Poly& c, const Poly& x) const {
    const auto t = absolute_trace(mul(c, x));
    const double p = static_cast<double>(ring.field().p());
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) / p);
  }
};

}  // namespace oracle
