#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "doctest.h"
#include "ffenergy/residue_field.hpp"
#include "oracle.hpp"

using namespace ffenergy;

namespace {

ResidueField field(std::uint32_t p, std::uint32_t e, int r) {
  BuildOptions opt;
  opt.auto_modulus = true;
  return ResidueField::build(FieldSpec{p, e, r, std::nullopt}, opt);
}

std::filesystem::path scratch_dir(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("field spec parsing") {
  auto s = FieldSpec::parse("3^1^3:1,2,0,1");
  CHECK(s.p == 3);
  CHECK(s.e == 1);
  CHECK(s.r == 3);
  REQUIRE(s.modulus);
  CHECK(*s.modulus == std::vector<std::uint32_t>{1, 2, 0, 1});
  CHECK(s.to_string() == "3^1^3:1,2,0,1");
  CHECK_FALSE(FieldSpec::parse("5^1^4").modulus);
  CHECK_THROWS(FieldSpec::parse("3^1"));
  CHECK_THROWS(FieldSpec::parse("3^x^2"));
  CHECK_THROWS_WITH(ResidueField::build("3^1^3"), doctest::Contains("--auto-modulus"));
  CHECK_THROWS_WITH(ResidueField::build("3^1^3:1,0,1"), doctest::Contains("does not match r"));
}

TEST_CASE("build_context") {
  ResidueField K(Fq(3), Poly({1, 0, 1}));
  CHECK(K.size() == 9);
  CHECK(K.spec_string() == "3^1^2:1,0,1");
  std::uint32_t order = 1;
  for (Elem x = K.generator(); x != Elem(1); x = K.mul_reference(x, K.generator())) ++order;
  CHECK(order == 8);

  CHECK_THROWS_WITH(ResidueField(Fq(3), Poly({2, 0, 1})), "modulus not irreducible");
  CHECK_THROWS_WITH(ResidueField(Fq(3), Poly({2, 0, 2})), "modulus must be monic");
  CHECK_THROWS_WITH(ResidueField(Fq(3), Poly({1, 2, 0, 1}), 20), "field too large for table mode");
  CHECK(field(3, 1, 3).trace(Elem(1)) == 0);
}

TEST_CASE("table arithmetic matches reduction mod F") {
  for (auto [p, e, r] : {std::tuple{3u, 1u, 4}, {5u, 1u, 3}, {2u, 1u, 6}, {3u, 2u, 2}, {7u, 1u, 2}}) {
    auto K = field(p, e, r);
    oracle::NaiveField N(K);
    const auto elems = N.elements();
    CHECK(elems.size() == K.size());
    std::mt19937_64 rng(p * 100 + r);
    std::uniform_int_distribution<std::uint32_t> pick(0, K.size() - 1);
    for (int t = 0; t < 2000; ++t) {
      Elem a(pick(rng)), b(pick(rng));
      CHECK(K.to_poly(K.mul(a, b)) == N.mul(K.to_poly(a), K.to_poly(b)));
      CHECK(K.to_poly(K.add(a, b)) == N.add(K.to_poly(a), K.to_poly(b)));
      CHECK(K.sub(K.add(a, b), b) == a);
    }
    for (std::uint32_t v = 1; v < K.size(); ++v) {
      Elem x(v);
      CHECK(K.exp(K.log(x)) == x);
      CHECK(K.mul(x, K.inv(x)) == Elem(1));
      CHECK(K.from_poly(K.to_poly(x)) == x);
    }
    CHECK_THROWS_WITH(K.inv(Elem()), "zero divisor");
    CHECK_THROWS(K.log(Elem()));
  }
}

TEST_CASE("generator has full order and is the smallest such element") {
  for (int r = 1; r <= 6; ++r) {
    auto K = field(3, 1, r);
    const std::uint32_t n = K.size() - 1;
    for (std::uint64_t d : prime_divisors(n)) CHECK(K.pow(K.generator(), n / d) != Elem(1));
    CHECK(K.pow(K.generator(), n) == Elem(1));
    for (std::uint32_t c = 1; c < K.generator().value; ++c) {
      bool full = true;
      for (std::uint64_t d : prime_divisors(n)) full = full && K.pow(Elem(c), n / d) != Elem(1);
      CHECK_FALSE(full);
    }
  }
}

TEST_CASE("windows") {
  auto K = field(3, 1, 2);
  CHECK(K.window(1) == std::vector{Elem(0), Elem(1), Elem(2)});
  CHECK(K.window(2).size() == 9);
  CHECK(K.in_window(Elem(), 1));
  CHECK_THROWS_AS(K.window(0), std::out_of_range);
  CHECK_THROWS_AS(K.in_window(Elem(1), 3), std::out_of_range);
  auto L = field(3, 1, 4);
  oracle::NaiveField N(L);
  for (int m = 1; m <= 4; ++m) {
    auto w = L.window(m);
    CHECK(w.size() == L.window_size(m));
    for (Elem x : w) CHECK(L.in_window(x, m));
    for (std::uint32_t v = 0; v < L.size(); ++v)
      CHECK(L.in_window(Elem(v), m) == N.in_window(L.to_poly(Elem(v)), m));
  }
}

TEST_CASE("traces and the dual basis") {
  for (auto [p, e, r] : {std::tuple{3u, 1u, 1}, {3u, 1u, 3}, {3u, 1u, 6}, {5u, 1u, 3}, {3u, 2u, 3}, {2u, 2u, 4}}) {
    auto K = field(p, e, r);
    oracle::NaiveField N(K);
    for (std::uint32_t v = 0; v < K.size(); v += 1 + K.size() / 300)
      CHECK(K.absolute_trace(Elem(v)) == N.absolute_trace(K.to_poly(Elem(v))));
    const auto& w = K.dual_basis();
    REQUIRE(w.size() == static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) CHECK(K.trace(K.mul(K.rho_power(i), w[j])) == (i == j ? 1u : 0u));
  }
}

TEST_CASE("dual basis window indicator") {
  for (int r = 1; r <= 4; ++r) {
    auto K = field(3, 1, r);
    for (int h = 1; h <= r; ++h) {
      const BigInt full = big_pow(3, static_cast<unsigned>(r - h));
      for (std::uint32_t v = 0; v < K.size(); ++v) {
        const Elem u(v);
        CHECK(K.dual_basis_indicator(u, h) == (K.in_window(u, h) ? full : BigInt(0)));
      }
    }
    CHECK_THROWS(K.dual_basis_indicator(Elem(), r + 1));
  }
}

TEST_CASE("additive characters") {
  auto K = field(3, 1, 4);
  oracle::NaiveField N(K);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint32_t> pick(0, K.size() - 1);
  for (std::uint32_t c : {1u, 2u, 7u, 40u}) {
    const Elem cc(c);
    std::complex<double> total = 0;
    for (std::uint32_t v = 0; v < K.size(); ++v) {
      const Elem x(v);
      total += K.additive_char(cc, x);
      CHECK(std::abs(K.additive_char(cc, x) * K.additive_char(cc, K.neg(x)) - 1.0) < 1e-12);
      CHECK(std::abs(K.additive_char(cc, x) - N.psi(K.to_poly(cc), K.to_poly(x))) < 1e-12);
    }
    CHECK(std::abs(total) < 1e-9);
    CHECK(K.additive_char(cc, Elem()) == std::complex<double>(1.0));
  }
  for (int t = 0; t < 10000; ++t) {
    Elem c(1 + pick(rng) % (K.size() - 1)), x(pick(rng)), y(pick(rng));
    CHECK(std::abs(K.additive_char(c, K.add(x, y)) - K.additive_char(c, x) * K.additive_char(c, y)) < 1e-12);
  }
}

TEST_CASE("multiplicative characters") {
  auto K = field(3, 1, 3);
  const std::uint32_t n = K.size() - 1;
  for (std::uint64_t idx : {0ull, 1ull, 5ull, 13ull}) {
    std::complex<double> total = 0;
    for (std::uint32_t v = 1; v < K.size(); ++v) {
      total += K.mult_char(idx, Elem(v));
      for (std::uint32_t w = 1; w < K.size(); w += 5)
        CHECK(std::abs(K.mult_char(idx, K.mul(Elem(v), Elem(w))) -
                       K.mult_char(idx, Elem(v)) * K.mult_char(idx, Elem(w))) < 1e-9);
    }
    if (idx == 0) CHECK(std::abs(total - double(n)) < 1e-9);
    else CHECK(std::abs(total) < 1e-8);
    CHECK(K.mult_char(idx, Elem()) == std::complex<double>(0.0));
  }
  CHECK_THROWS_WITH(K.mult_char(n, Elem(1)), "character index out of range");

  for (std::uint32_t v = 0; v < K.size(); ++v) {
    const Elem x(v);
    const int expect = v == 0 ? 0 : (K.pow(x, n / 2) == Elem(1) ? 1 : -1);
    CHECK(K.quadratic_char(x) == expect);
    if (v) CHECK(K.quadratic_char(K.mul(x, x)) == 1);
  }
  CHECK(K.quadratic_char(K.generator()) == -1);
  CHECK_THROWS(field(2, 1, 3).quadratic_char(Elem(1)));
}

TEST_CASE("square roots") {
  for (auto [p, e, r] : {std::tuple{3u, 1u, 4}, {5u, 1u, 3}, {3u, 2u, 2}, {2u, 1u, 5}}) {
    auto K = field(p, e, r);
    std::vector<int> expected(K.size(), 0);
    for (std::uint32_t v = 0; v < K.size(); ++v) ++expected[K.mul(Elem(v), Elem(v)).value];
    for (std::uint32_t v = 0; v < K.size(); ++v) {
      const auto rs = K.square_roots(Elem(v));
      CHECK(rs.count == expected[v]);
      for (Elem h : rs.view()) CHECK(K.mul(h, h) == Elem(v));
      CHECK(K.square_roots(K.mul(Elem(v), Elem(v))).contains(Elem(v)));
    }
    CHECK(K.square_roots(Elem()).count == 1);
    if (p != 2) {
      CHECK(K.square_roots(K.generator()).count == 0);
      const auto one = K.square_roots(Elem(1));
      CHECK(one.count == 2);
      CHECK(one.contains(Elem(1)));
      CHECK(one.contains(K.neg(Elem(1))));
    }
  }
}

TEST_CASE("weights") {
  auto w = Weight::random(2, 3, 42);
  CHECK(w.size() == 9);
  CHECK(w.norm_inf() <= std::sqrt(2.0));
  CHECK(w.norm2() <= w.norm1());
  CHECK(w.at(Elem(9)) == std::complex<double>(0.0));
  auto w2 = Weight::random(2, 3, 42);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(w.values()[i] == w2.values()[i]);

  auto ind = Weight::indicator(3, 3);
  CHECK(ind.is_indicator());
  CHECK(ind.norm1() == 27.0);
  CHECK_FALSE(w.is_indicator());
  auto d = Weight::delta(2, 3, Elem(4), {0.0, 2.0});
  CHECK(d.norm1() == 2.0);
  CHECK_THROWS(d.set(Elem(9), 1.0));

  auto dir = scratch_dir("ffenergy_weight_test");
  {
    std::ofstream out(dir / "w.txt");
    out << "# weights\n0,1.5\n4,0.25,-1\n\n";
  }
  auto lw = Weight::load(dir / "w.txt", 2, 3);
  CHECK(lw.at(Elem(0)) == std::complex<double>(1.5, 0));
  CHECK(lw.at(Elem(4)) == std::complex<double>(0.25, -1));
  {
    std::ofstream out(dir / "bad.txt");
    out << "12,1\n";
  }
  CHECK_THROWS(Weight::load(dir / "bad.txt", 2, 3));
}

TEST_CASE("histograms") {
  Histogram h(5), g(5);
  h.add(Elem(1), 3);
  h.add(Elem(4));
  g.add(Elem(1), 2);
  h.merge(g);
  CHECK(h[Elem(1)] == 5);
  CHECK(h.total() == 6);
  CHECK(h.sum_of_squares() == 26);
  CHECK_THROWS(h.merge(Histogram(3)));
}

TEST_CASE("table cache round trip and corruption") {
  auto dir = scratch_dir("ffenergy_cache_test");
  BuildOptions opt;
  opt.auto_modulus = true;
  opt.cache_dir = dir;
  auto a = ResidueField::build("3^1^5", opt);
  CHECK_FALSE(a.loaded_from_cache());
  const auto file = a.cache_file(dir);
  REQUIRE(std::filesystem::exists(file));
  auto b = ResidueField::build("3^1^5", opt);
  CHECK(b.loaded_from_cache());
  CHECK(b.generator() == a.generator());
  for (std::uint32_t v = 1; v < a.size(); v += 7) CHECK(b.log(Elem(v)) == a.log(Elem(v)));

  {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(40);
    f.put('\x7f');
  }
  auto c = ResidueField::build("3^1^5", opt);
  CHECK_FALSE(c.loaded_from_cache());
  CHECK(c.generator() == a.generator());
  auto d = ResidueField::build("3^1^5", opt);
  CHECK(d.loaded_from_cache());

  std::filesystem::resize_file(file, 12);
  CHECK_FALSE(ResidueField::build("3^1^5", opt).loaded_from_cache());
}
