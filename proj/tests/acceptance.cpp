// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include "ffenergy/bilinear.hpp"
#include "ffenergy/energy.hpp"
#include "ffenergy/enumerate.hpp"
#include "ffenergy/harness.hpp"
#include "ffenergy/residue_classes.hpp"

#ifndef FFENERGY_CONFIG_DIR
#define FFENERGY_CONFIG_DIR "configs"
#endif

using namespace ffenergy;

namespace {

ResidueField field(std::uint32_t p, int r) {
  BuildOptions bo;
  bo.auto_modulus = true;
  return ResidueField::build(FieldSpec{p, 1, r, std::nullopt}, bo);
}

BigInt ipow(std::uint64_t q, int e) {
  BigInt out = 1;
  for (int i = 0; i < e; ++i) out *= q;
  return out;
}

std::string str(std::uint64_t x) { return std::to_string(x); }

struct Gate {
  int failed = 0;

  void run(int id, const std::string& name, double limit_s, const std::function<std::string()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string why;
    try {
      why = body();
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (why.empty() && limit_s > 0 && secs > limit_s) why = "took " + std::to_string(secs) + " s";
    char head[128];
    std::snprintf(head, sizeof head, "%s [%2d] %-40s %8.2fs", why.empty() ? "PASS" : "FAIL", id, name.c_str(), secs);
    std::cout << head << (why.empty() ? "" : "  " + why) << std::endl;
    if (!why.empty()) ++failed;
  }
};

SweepSpec standard_sweep() { return SweepSpec::load(std::string(FFENERGY_CONFIG_DIR) + "/standard_sweep.json"); }

}  // namespace

int main() {
  Gate gate;

  gate.run(1, "fourth-moment identity", 120, []() -> std::string {
    for (int r : {3, 4, 5}) {
      const auto K = field(3, r);
      for (Elem c : {Elem(1), K.generator(), Elem(K.size() - 1)})
        for (int m = 1; m <= r; ++m) {
          const auto chk = fourth_moment_check(K, m, c);
          if (!chk.pass || chk.rel_err > 1e-6)
            return "r=" + str(r) + " m=" + str(m) + " c=" + str(c.value) + " rel_err=" + std::to_string(chk.rel_err);
        }
    }
    return {};
  });

  gate.run(2, "energy oracle equivalence", 60, []() -> std::string {
    for (int r = 1; r <= 4; ++r) {
      const auto K = field(3, r);
      for (int m = 1; m <= r; ++m)
        if (energy_sqrt(K, m).exact != energy_sqrt_bruteforce(K, m)) return "E^sqrt r=" + str(r) + " m=" + str(m);
    }
    for (int r = 2; r <= 5; ++r)
      if (energy_inv(field(3, r), 1).exact != 6) return "E^inv(1) r=" + str(r);
    return {};
  });

  gate.run(3, "full-window closed forms", 0, []() -> std::string {
    for (int r = 1; r <= 6; ++r)
      if (energy_sqrt(field(3, r), r).exact != ipow(3, 3 * r)) return "E^sqrt(1_r) r=" + str(r);
    for (int r : {3, 4}) {
      const auto K = field(3, r);
      for (int n = 1; n < r; ++n) {
        const BigInt w = count_irreducibles(3, n);
        for (std::uint32_t a = 1; a < K.size(); ++a)
          if (count_N(K, Elem(a), n, r).count != w * w) return "N r=" + str(r) + " n=" + str(n) + " a=" + str(a);
      }
    }
    return {};
  });

  gate.run(4, "mass identities", 0, []() -> std::string {
    for (int r = 2; r <= 6; ++r) {
      const auto K = field(3, r);
      for (int m = 1; m <= r; ++m) {
        const BigInt R = root_set(K, m).size();
        if (difference_histogram(K, m).total() != R * R) return "sum Q r=" + str(r) + " m=" + str(m);
        const BigInt u = BigInt(K.window_size(m)) - 1;
        if (inv_histogram(K, m).total() != u * u) return "sum I_F r=" + str(r) + " m=" + str(m);
      }
    }
    const auto rep = run_sweep(standard_sweep());
    for (const auto& row : rep.rows) {
      if (row.quantity != "energy_sqrt" && row.quantity != "energy_inv") continue;
      if (row.checks.find("mass=pass") == std::string::npos) return "sweep " + row.field + " " + row.params;
    }
    return {};
  });

  gate.run(5, "Vinogradov inequality", 0, []() -> std::string {
    for (auto [p, r] : {std::pair{3u, 4}, {5u, 3}}) {
      const auto K = field(p, r);
      for (std::uint64_t s = 0; s < 100; ++s) {
        const auto res = vinogradov_sum(K, Weight::random(r, p, 1000 + 2 * s), Weight::random(r, p, 1001 + 2 * s),
                                        Elem(1 + s % (K.size() - 1)));
        if (!res.hard_bound_holds) return "q=" + str(p) + " seed " + str(s);
      }
    }
    return {};
  });

  gate.run(6, "Gauss formula", 0, []() -> std::string {
    for (std::uint32_t q : {3u, 5u}) {
      const PolyRing R{Fq(q)};
      for (int n = 1; n <= 6; ++n)
        if (count_irreducibles(q, n) != enumerate_irreducibles(R, n).size()) return "q=" + str(q) + " n=" + str(n);
    }
    return {};
  });

  gate.run(7, "dual basis and window indicator", 0, []() -> std::string {
    for (int r = 1; r <= 4; ++r) {
      const auto K = field(3, r);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
          if (K.trace(K.mul(K.rho_power(i), K.dual_basis()[j])) != (i == j ? 1u : 0u))
            return "Tr r=" + str(r) + " i=" + str(i) + " j=" + str(j);
      for (int h = 1; h <= r; ++h)
        for (std::uint32_t u = 0; u < K.size(); ++u) {
          const BigInt expect = K.in_window(Elem(u), h) ? ipow(3, r - h) : BigInt(0);
          if (K.dual_basis_indicator(Elem(u), h) != expect) return "indicator r=" + str(r) + " u=" + str(u);
        }
    }
    return {};
  });

  gate.run(8, "two-path residue-class counting", 0, []() -> std::string {
    const auto K = field(3, 3);
    for (std::uint32_t a = 1; a <= 10; ++a) {
      const Poly ap = K.to_poly(Elem(a));
      const auto res = psi_triple_crosscheck(K, ap, 5, 2, 1, 1);
      if (!res.unique_representation) return "a=" + str(a) + " not in the unique regime";
      if (!res.pass) return "a=" + str(a) + " paths disagree";
      if (res.psi_sf != psi_smooth_squarefree(K, ap, 5, 2)) return "a=" + str(a) + " Psi# mismatch";
    }
    return {};
  });

  gate.run(9, "standard sweep ratio sanity", 900, []() -> std::string {
    const auto spec = standard_sweep();
    const auto rep = run_sweep(spec);
    if (rep.rows.empty()) return "empty report";
    for (const auto& row : rep.rows) {
      if (row.status != "ok") return row.params + " " + row.status;
      if (!row.ratio || !std::isfinite(*row.ratio) || *row.ratio <= 0 || *row.ratio >= spec.soft_threshold)
        return row.field + " " + row.quantity + " " + row.params + " ratio out of range";
    }
    return rep.exit_code() == 0 ? "" : "hard check failed";
  });

  gate.run(10, "M_alpha desk-scale probe", 0, []() -> std::string {
    const int baseline[] = {1, 3, 4};
    for (int r = 2; r <= 4; ++r) {
      const auto K = field(3, r);
      const auto res = find_M_alpha(K, Rational{1, 1});
      if (!res.M) return "r=" + str(r) + " hit the ceiling";
      if (auto why = validate_witnesses(K, res); !why.empty()) return "r=" + str(r) + " " + why;
      if (*res.M != baseline[r - 2]) return "r=" + str(r) + " M=" + str(*res.M) + " baseline " + str(baseline[r - 2]);
    }
    return {};
  });

  gate.run(11, "determinism", 0, []() -> std::string {
    auto spec = standard_sweep();
    spec.workers = 1;
    const auto a = to_csv(run_sweep(spec));
    const auto b = to_csv(run_sweep(spec));
    spec.workers = 4;
    const auto c = to_csv(run_sweep(spec));
    if (a != b) return "two runs differ";
    if (a != c) return "1 vs 4 workers differ";
    return {};
  });

  std::cout << (gate.failed == 0 ? "all criteria passed" : std::to_string(gate.failed) + " criteria failed") << '\n';
  return gate.failed == 0 ? 0 : 1;
}
