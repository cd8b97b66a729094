#include "ffenergy/enumerate.hpp"

#include <stdexcept>

namespace ffenergy {

namespace {

void require_degree(int n) {
  if (n <= 0) throw std::invalid_argument("degree must be >= 1");
}

}  // namespace

void for_each_monic(const PolyRing& ring, int n, const PolyVisitor& visit) {
  require_degree(n);
  const std::uint32_t q = ring.q();
  std::vector<std::uint32_t> coeffs(static_cast<std::size_t>(n) + 1, 0);
  coeffs[n] = 1;
  for (;;) {
    if (!visit(Poly(coeffs))) return;
    // Odometer increment over the n low coefficients, low digit first.
    int i = 0;
    while (i < n && ++coeffs[i] == q) coeffs[i++] = 0;
    if (i == n) return;
  }
}

std::vector<Poly> enumerate_monic(const PolyRing& ring, int n) {
  std::vector<Poly> out;
  for_each_monic(ring, n, [&](const Poly& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

void for_each_irreducible(const PolyRing& ring, int n, const PolyVisitor& visit) {
  for_each_monic(ring, n, [&](const Poly& f) { return ring.is_irreducible(f) ? visit(f) : true; });
}

std::vector<Poly> enumerate_irreducibles(const PolyRing& ring, int n) {
  std::vector<Poly> out;
  for_each_irreducible(ring, n, [&](const Poly& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

void for_each_squarefree_monic(const PolyRing& ring, int n, const PolyVisitor& visit) {
  for_each_monic(ring, n, [&](const Poly& f) { return ring.is_squarefree(f) ? visit(f) : true; });
}

std::vector<Poly> enumerate_squarefree_monic(const PolyRing& ring, int n) {
  std::vector<Poly> out;
  for_each_squarefree_monic(ring, n, [&](const Poly& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

BigInt count_irreducibles(std::uint64_t q, int n) {
  require_degree(n);
  BigInt sum = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const int mu = mobius(static_cast<std::uint64_t>(d));
    if (mu == 0) continue;
    const BigInt term = big_pow(q, static_cast<unsigned>(n / d));
    sum += mu > 0 ? term : BigInt(-term);
  }
  return sum / n;
}

Poly smallest_irreducible(const PolyRing& ring, int n) {
  Poly found;
  for_each_irreducible(ring, n, [&](const Poly& f) {
    found = f;
    return false;
  });
  return found;
}

}  // namespace ffenergy
