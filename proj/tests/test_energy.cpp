#include <cmath>

#include "doctest.h"
#include "ffenergy/energy.hpp"
#include "oracle.hpp"

using namespace ffenergy;

namespace {

ResidueField field(std::uint32_t p, int r, std::uint32_t e = 1) {
  BuildOptions opt;
  opt.auto_modulus = true;
  return ResidueField::build(FieldSpec{p, e, r, std::nullopt}, opt);
}

/// Quadruples (u, v, x, y) over the whole field with u + v = x + y, squares in the window,
/// computed with reduction mod F only.
std::uint64_t naive_energy_sqrt(const oracle::NaiveField& N, int m) {
  const auto elems = N.elements();
  std::vector<char> ok(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) ok[i] = N.in_window(N.mul(elems[i], elems[i]), m);
  std::uint64_t count = 0;
  for (std::size_t u = 0; u < elems.size(); ++u) {
    if (!ok[u]) continue;
    for (std::size_t v = 0; v < elems.size(); ++v) {
      if (!ok[v]) continue;
      for (std::size_t x = 0; x < elems.size(); ++x) {
        if (!ok[x]) continue;
        const Poly y = N.sub(N.add(elems[u], elems[v]), elems[x]);
        if (N.in_window(N.mul(y, y), m)) ++count;
      }
    }
  }
  return count;
}

std::complex<double> naive_weighted_energy(const ResidueField& K, const Weight& beta) {
  std::complex<double> E = 0;
  auto b = [&](Elem t) { return beta.at(K.mul_reference(t, t)); };
  for (std::uint32_t u = 0; u < K.size(); ++u)
    for (std::uint32_t v = 0; v < K.size(); ++v)
      for (std::uint32_t x = 0; x < K.size(); ++x) {
        const Elem y = K.sub(K.add(Elem(u), Elem(v)), Elem(x));
        E += b(Elem(u)) * std::conj(b(Elem(v))) * b(Elem(x)) * std::conj(b(y));
      }
  return E;
}

std::uint64_t naive_inv_energy(const oracle::NaiveField& N, int m) {
  std::vector<Poly> inv;
  for (const auto& u : N.elements())
    if (!u.is_zero() && N.in_window(u, m)) inv.push_back(N.inv(u));
  std::uint64_t count = 0;
  for (const auto& a : inv)
    for (const auto& b : inv)
      for (const auto& c : inv)
        for (const auto& d : inv)
          if (N.add(a, b) == N.add(c, d)) ++count;
  return count;
}

}  // namespace

TEST_CASE("root sets") {
  auto K = field(3, 4);
  oracle::NaiveField N(K);
  for (int m = 1; m <= 4; ++m) {
    auto R = root_set(K, m);
    auto expect = N.root_set(m);
    REQUIRE(R.size() == expect.size());
    for (std::size_t i = 0; i < R.size(); ++i) CHECK(K.to_poly(R[i]) == expect[i]);
    for (Elem u : R) CHECK(std::binary_search(R.begin(), R.end(), K.neg(u)));
  }
}

TEST_CASE("energy_sqrt against brute force") {
  for (int r = 1; r <= 4; ++r) {
    auto K = field(3, r);
    oracle::NaiveField N(K);
    for (int m = 1; m <= r; ++m) {
      const auto E = energy_sqrt(K, m);
      CHECK(E.method == "histogram");
      CHECK(E.exact == BigInt(naive_energy_sqrt(N, m)));
      CHECK(E.exact == energy_sqrt_bruteforce(K, m));
      const BigInt R(root_set(K, m).size());
      CHECK(E.exact >= R * R);
      CHECK(E.exact <= R * R * R);
    }
    CHECK(energy_sqrt(K, r).exact == big_pow(3, 3 * r));
  }
  CHECK(energy_sqrt_bruteforce(field(3, 2), 2) == 729);
  EnergyOptions tight;
  tight.oracle_limit = 100;
  CHECK_THROWS_WITH(energy_sqrt_bruteforce(field(3, 3), 3, tight), "oracle too large");
  tight.pair_limit = 100;
  CHECK_THROWS_AS(energy_sqrt(field(3, 3), 3, tight), BudgetExceeded);
}

TEST_CASE("energy_sqrt in other fields") {
  for (auto [p, e, r] : {std::tuple{5u, 1u, 2}, {5u, 1u, 3}, {3u, 2u, 2}, {7u, 1u, 2}}) {
    auto K = field(p, r, e);
    oracle::NaiveField N(K);
    for (int m = 1; m <= r; ++m) CHECK(energy_sqrt(K, m).exact == BigInt(naive_energy_sqrt(N, m)));
  }
}

TEST_CASE("Q_lambda and the weighted energy") {
  auto K = field(3, 3);
  for (int m = 1; m <= 2; ++m) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      auto beta = Weight::random(m, K.q(), seed);
      const auto E = energy_sqrt(K, beta);
      CHECK_FALSE(E.integral);
      const auto direct = naive_weighted_energy(K, beta);
      CHECK(std::abs(E.value - direct) <= 1e-8 * std::abs(direct));

      const auto Q = q_lambda_all(K, beta);
      std::complex<double> from_diff = 0;
      for (std::uint32_t l = 0; l < K.size(); ++l) {
        CHECK(std::abs(Q[l].imag()) <= 1e-9 * (beta.norm1() * beta.norm1() + 1));
        CHECK(std::abs(Q[l] - q_lambda(K, beta, Elem(l))) < 1e-9);
        from_diff += Q[l] * Q[l];
      }
      CHECK(std::abs(from_diff - E.value) <= 1e-8 * std::abs(E.value));
      CHECK(E.value.real() >= 0);
      CHECK(std::abs(E.value.imag()) <= 1e-9 * std::abs(E.value));
    }
  }
}

TEST_CASE("Q_lambda of indicators") {
  auto K = field(3, 4);
  auto full = Weight::indicator(4, 3);
  for (std::uint32_t l = 0; l < K.size(); l += 7) CHECK(std::abs(q_lambda(K, full, Elem(l)) - 81.0) < 1e-9);
  for (int m = 1; m <= 4; ++m) {
    const auto R = root_set(K, m);
    const auto D = difference_histogram(K, m);
    CHECK(D[Elem()] == R.size());
    CHECK(D.total() == BigInt(R.size()) * R.size());
    CHECK(D.sum_of_squares() == energy_sqrt(K, m).exact);
    auto ind = Weight::indicator(m, 3);
    CHECK(std::abs(q_lambda(K, ind, Elem()) - double(R.size())) < 1e-9);
  }
}

TEST_CASE("reciprocal representations and E^inv") {
  auto K = field(3, 3);
  CHECK(inv_rep_count(K, Elem(0), 1) == 2);
  CHECK(inv_rep_count(K, Elem(1), 1) == 1);
  for (int r = 2; r <= 5; ++r) CHECK(energy_inv(field(3, r), 1).exact == 6);

  for (int r = 1; r <= 3; ++r) {
    auto L = field(3, r);
    oracle::NaiveField N(L);
    for (int m = 1; m <= r; ++m) {
      const auto I = inv_histogram(L, m);
      const BigInt w = BigInt(L.window_size(m) - 1);
      CHECK(I.total() == w * w);
      for (std::uint32_t a = 0; a < L.size(); ++a) CHECK(I.count(Elem(a)) == inv_rep_count(L, Elem(a), m));
      const auto E = energy_inv(L, m).exact;
      CHECK(E == BigInt(naive_inv_energy(N, m)));
      CHECK(E >= w * w);
      CHECK(E <= w * w * w);
    }
  }
}

TEST_CASE("A_lambda spectrum and the fourth moment") {
  for (int r = 1; r <= 4; ++r) {
    auto K = field(3, r);
    for (int m = 1; m <= r; ++m) {
      for (std::uint32_t c : {1u, 2u, K.size() - 1}) {
        const auto A = a_lambda_spectrum(K, m, Elem(c));
        CHECK(std::abs(A[0] - double(root_set(K, m).size())) < 1e-9);
        const auto chk = fourth_moment_check(K, m, Elem(c));
        CHECK(chk.pass);
        CHECK(chk.rel_err < 1e-9);
      }
    }
    const auto A = a_lambda_spectrum(K, r, Elem(1));
    for (std::uint32_t l = 1; l < K.size(); ++l) CHECK(std::abs(A[l]) < 1e-9);
  }
  auto K = field(3, 4);
  EnergyOptions par;
  par.workers = 4;
  const auto a = a_lambda_spectrum(K, 2, Elem(5));
  const auto b = a_lambda_spectrum(K, 2, Elem(5), par);
  CHECK(a == b);
  CHECK(energy_sqrt(K, 3, par).exact == energy_sqrt(K, 3).exact);
  CHECK_THROWS(a_lambda_spectrum(K, 2, Elem()));
}

TEST_CASE("twist independence") {
  auto K = field(3, 4);
  const auto base = energy_sqrt(K, 2).exact;
  for (std::uint32_t c : {1u, 2u, 17u}) {
    CHECK(fourth_moment_check(K, 2, Elem(c)).rhs == BigInt(81) * base);
  }
}

TEST_CASE("quadratic images and hyperbolas") {
  auto K = field(3, 3);
  oracle::NaiveField N(K);
  CHECK(count_quadratic_image(K, {Elem(), Elem(), Elem(1)}, 3) == 27);
  for (int m = 1; m <= 3; ++m) {
    std::uint64_t expect = 0;
    for (const auto& u : N.elements())
      if (N.in_window(u, m) && N.in_window(N.mul(u, u), m)) ++expect;
    CHECK(count_quadratic_image(K, {Elem(), Elem(), Elem(1)}, m) == expect);
    CHECK(count_quadratic_image(K, {Elem(4), Elem(7), Elem(11)}, m) <= K.window_size(m));
  }
  CHECK_THROWS(count_quadratic_image(K, {Elem(1), Elem(1), Elem()}, 2));

  CHECK(count_hyperbola(K, Elem(1), 1) == 2);
  CHECK(count_hyperbola(K, Elem(5), 3) == 26);
  CHECK_THROWS(count_hyperbola(K, Elem(), 1));
  auto L = field(3, 2);
  oracle::NaiveField M(L);
  std::uint64_t expect = 0;
  const Poly g = L.to_poly(L.generator());
  for (const auto& u : M.elements())
    for (const auto& v : M.elements())
      if (M.in_window(u, 1) && M.in_window(v, 1) && M.mul(u, v) == g) ++expect;
  CHECK(count_hyperbola(L, L.generator(), 1) == expect);
}

TEST_CASE("main terms") {
  CHECK(energy_inv_main_term(3, 5, 1) == doctest::Approx(std::pow(3.0, 1) + 9));
  CHECK(energy_sqrt_main_term(3, 4, 2, 9, 1) == doctest::Approx(81 * 3 * 2));
}
