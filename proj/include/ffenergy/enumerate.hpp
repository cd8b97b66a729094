#pragma once

#include <functional>
#include <vector>

#include "ffenergy/bigint.hpp"
#include "ffenergy/poly.hpp"

namespace ffenergy {

// Enumerators walk polynomials in encoding order. The callback form streams;
// returning false from the callback stops the walk early.
using PolyVisitor = std::function<bool(const Poly&)>;

/// All monic polynomials of degree exactly n (the set M_n).
void for_each_monic(const PolyRing& ring, int n, const PolyVisitor& visit);
std::vector<Poly> enumerate_monic(const PolyRing& ring, int n);

/// Monic irreducibles of degree exactly n (the set P_n).
void for_each_irreducible(const PolyRing& ring, int n, const PolyVisitor& visit);
std::vector<Poly> enumerate_irreducibles(const PolyRing& ring, int n);

/// Monic square-free polynomials of degree exactly n (the set S_n).
void for_each_squarefree_monic(const PolyRing& ring, int n, const PolyVisitor& visit);
std::vector<Poly> enumerate_squarefree_monic(const PolyRing& ring, int n);

/// Number of monic irreducibles of degree n: (1/n) sum_{d | n} mu(d) q^{n/d}.
BigInt count_irreducibles(std::uint64_t q, int n);

/// Smallest-encoding monic irreducible of degree n.
Poly smallest_irreducible(const PolyRing& ring, int n);

}  // namespace ffenergy
