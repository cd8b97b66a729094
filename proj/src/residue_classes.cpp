#include "ffenergy/residue_classes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "ffenergy/bilinear.hpp"
#include "parallel.hpp"

namespace ffenergy {

namespace {

void check_class_args(const ResidueField& K, Elem a, int n, int h) {
  if (a.is_zero()) throw std::invalid_argument("a must be nonzero");
  if (n < 1 || n >= K.degree())
    throw std::invalid_argument("n must satisfy 1 <= n < r (n=" + std::to_string(n) + ")");
  K.check_window(h);
}

std::vector<Elem> irreducible_residues(const ResidueField& K, int n) {
  std::vector<Elem> out;
  for_each_irreducible(K.ring(), n, [&](const Poly& l) {
    out.push_back(K.from_poly(l));
    return true;
  });
  return out;
}

void check_budget(double needed, std::uint64_t budget, const char* what) {
  if (needed > static_cast<double>(budget)) throw BudgetExceeded(what, needed, static_cast<double>(budget));
}

/// Counts pairs (l1, l2) of P_n for which solve(l1, l2) lands in the window h and passes accept.
template <class Solve, class Accept>
BigInt count_pairs(const ResidueField& K, const std::vector<Elem>& P, int h, unsigned workers, Solve solve,
                   Accept accept) {
  std::vector<std::uint64_t> partial(detail::kBlocks, 0);
  detail::for_blocks(P.size(), workers, [&](std::size_t b, std::size_t lo, std::size_t hi, unsigned) {
    std::uint64_t c = 0;
    for (std::size_t i = lo; i < hi; ++i)
      for (Elem l2 : P) {
        const Elem u = solve(P[i], l2);
        if (K.in_window(u, h) && accept(u)) ++c;
      }
    partial[b] = c;
  });
  BigInt total = 0;
  for (auto c : partial) total += c;
  return total;
}

double wn(const ResidueField& K, int n) { return to_double(count_irreducibles(K.q(), n)); }

bool smooth_squarefree(const PolyRing& R, const Poly& g, int m) {
  return R.is_squarefree(g) && (g.degree() <= m || R.smoothness_degree(g) <= m);
}

}  // namespace

ClassCountResult count_N(const ResidueField& K, Elem a, int n, int h, const ClassOptions& opt) {
  check_class_args(K, a, n, h);
  const auto P = irreducible_residues(K, n);
  check_budget(double(P.size()) * double(P.size()), opt.enumeration_budget, "N_F pair enumeration");
  ClassCountResult res;
  res.count = count_pairs(
      K, P, h, opt.workers, [&](Elem x, Elem y) { return K.mul(a, K.inv(K.mul(x, y))); },
      [](Elem) { return true; });
  const double w = wn(K, n);
  res.main_term = w * w * std::pow(double(K.q()), h - K.degree());
  res.error_exponent = b_exponent(K.degree(), n);
  res.method = "direct";
  return res;
}

ClassCountResult count_N_squarefree(const ResidueField& K, Elem a, int n, int h, const ClassOptions& opt) {
  check_class_args(K, a, n, h);
  const auto P = irreducible_residues(K, n);
  check_budget(double(P.size()) * double(P.size()), opt.enumeration_budget, "N_F^# pair enumeration");
  // window elements are encoded below q^h, so the flags fit a dense table
  std::vector<char> sf(K.window_size(h));
  for (std::uint32_t v = 1; v < sf.size(); ++v) sf[v] = K.ring().is_squarefree(K.to_poly(Elem(v)));
  ClassCountResult res;
  res.count = count_pairs(
      K, P, h, opt.workers, [&](Elem x, Elem y) { return K.mul(a, K.inv(K.mul(x, y))); },
      [&](Elem u) { return sf[u.value] != 0; });
  const double q = K.q();
  const double w = wn(K, n);
  res.main_term = w * w * std::pow(q, h - K.degree()) * (q - 1) / (q * q);
  res.error_exponent = b_exponent(K.degree(), n);
  res.method = "direct";
  return res;
}

ClassCountResult count_Q(const ResidueField& K, Elem a, int n, int h, const ClassOptions& opt) {
  check_class_args(K, a, n, h);
  const auto P = irreducible_residues(K, n);
  check_budget(double(P.size()) * double(P.size()), opt.enumeration_budget, "Q_F pair enumeration");
  ClassCountResult res;
  res.count = count_pairs(
      K, P, h, opt.workers, [&](Elem x, Elem y) { return K.mul(a, K.inv(K.mul(x, K.mul(y, y)))); },
      [](Elem) { return true; });
  const double q = K.q();
  res.main_term = std::pow(q, n) * (std::pow(q, n + h - K.degree()) + 1);
  res.method = "direct";
  if (n + h > K.degree()) res.note = "hypothesis n + h <= r not met";
  return res;
}

void for_each_class_member(const ResidueField& K, const Poly& a, int k, const PolyVisitor& visit,
                           const ClassOptions& opt) {
  const int r = K.degree();
  if (a.degree() >= r) throw std::invalid_argument("class representative must have degree < r");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k <= r) {
    if (!a.is_zero() && a.degree() < k) visit(a);
    return;
  }
  const double count = std::pow(double(K.q()), k - r);
  check_budget(count, opt.enumeration_budget, "class member enumeration");
  const auto& R = K.ring();
  const auto n = static_cast<std::uint64_t>(count);
  for (std::uint64_t code = 0; code < n; ++code) {
    Poly g = R.add(a, R.mul(R.decode(code), K.modulus()));
    if (g.is_zero()) continue;
    if (!visit(g)) return;
  }
}

BigInt psi_smooth(const ResidueField& K, const Poly& a, int k, int m, const ClassOptions& opt) {
  std::uint64_t count = 0;
  for_each_class_member(
      K, a, k,
      [&](const Poly& g) {
        if (g.degree() <= m || K.ring().smoothness_degree(g) <= m) ++count;
        return true;
      },
      opt);
  return BigInt(count);
}

BigInt psi_smooth_squarefree(const ResidueField& K, const Poly& a, int k, int m, const ClassOptions& opt) {
  std::uint64_t count = 0;
  for_each_class_member(
      K, a, k,
      [&](const Poly& g) {
        if (smooth_squarefree(K.ring(), g, m)) ++count;
        return true;
      },
      opt);
  return BigInt(count);
}

TripleCrosscheck psi_triple_crosscheck(const ResidueField& K, const Poly& a, int k, int m, int n, int h,
                                       const ClassOptions& opt) {
  if (!(1 <= n && n <= h && h <= m && 2 * n + h <= k))
    throw std::invalid_argument("cross-check requires 1 <= n <= h <= m and 2n + h <= k");
  if (h > K.degree()) throw std::invalid_argument("cross-check requires h <= r");
  const Elem ae = K.from_poly(a);
  if (ae.is_zero()) throw std::invalid_argument("a must be nonzero");
  const auto& R = K.ring();
  TripleCrosscheck out;

  // Path A: members of Psi^#, each weighted by its number of ordered triples.
  std::vector<std::uint64_t> represented;
  std::uint64_t psi = 0;
  BigInt weighted = 0;
  for_each_class_member(
      K, a, k,
      [&](const Poly& g) {
        const auto fac = R.factor(g);
        int top = 0;
        bool sf = true;
        std::uint64_t d = 0;
        for (const auto& [l, e] : fac.factors) {
          top = std::max(top, l.degree());
          sf = sf && e == 1;
          if (l.degree() == n) ++d;
        }
        if (!sf || top > m) return true;
        ++psi;
        const int rest = g.degree() - 2 * n;
        const std::uint64_t rep = (rest >= 0 && rest < h && d >= 2) ? d * (d - 1) : 0;
        if (rep) {
          weighted += rep;
          represented.push_back(R.encode(g));
          out.max_rep = std::max(out.max_rep, rep);
        }
        return true;
      },
      opt);

  // Path B: every (l1, l2) in P_n^2, u solved mod F, product checked for square-freeness.
  const auto P = enumerate_irreducibles(R, n);
  check_budget(double(P.size()) * double(P.size()), opt.enumeration_budget, "triple enumeration");
  std::vector<std::uint64_t> products;
  std::uint64_t triples = 0;
  for (const auto& l1 : P)
    for (const auto& l2 : P) {
      const Poly l12 = R.mul(l1, l2);
      const Elem u = K.mul(ae, K.inv(K.from_poly(l12)));
      if (!K.in_window(u, h)) continue;
      const Poly g = R.mul(l12, K.to_poly(u));
      if (!R.is_squarefree(g)) continue;
      ++triples;
      products.push_back(R.encode(g));
    }

  std::sort(represented.begin(), represented.end());
  std::sort(products.begin(), products.end());
  products.erase(std::unique(products.begin(), products.end()), products.end());

  out.psi_sf = psi;
  out.weighted_members = weighted;
  out.triples = triples;
  out.members_represented = represented.size();
  out.sets_agree = represented == products;
  out.unique_representation = out.max_rep <= 2;
  out.pass = out.sets_agree && out.weighted_members == out.triples;
  return out;
}

Rational Rational::parse(std::string_view text) {
  auto bad = [&] { return std::invalid_argument("bad rational '" + std::string(text) + "'"); };
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size()) throw bad();
    return v;
  };
  Rational out;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    out.num = parse_int(text.substr(0, slash));
    out.den = parse_int(text.substr(slash + 1));
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto frac = text.substr(dot + 1);
    if (frac.size() > 12 || frac.empty() || frac.front() == '-' || frac.front() == '+') throw bad();
    out.den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) out.den *= 10;
    const std::int64_t whole = dot == 0 ? 0 : parse_int(text.substr(0, dot));
    const std::int64_t part = parse_int(frac);
    const bool neg = !text.empty() && text.front() == '-';
    out.num = whole * out.den + (neg ? -part : part);
  } else {
    out.num = parse_int(text);
  }
  if (out.den == 0) throw bad();
  if (out.den < 0) {
    out.num = -out.num;
    out.den = -out.den;
  }
  const auto g = std::gcd(out.num, out.den);
  if (g > 1) {
    out.num /= g;
    out.den /= g;
  }
  return out;
}

std::string Rational::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::int64_t Rational::floor_times(std::int64_t x) const {
  const std::int64_t p = num * x;
  return p >= 0 ? p / den : -((-p + den - 1) / den);
}

MAlphaResult find_M_alpha(const ResidueField& K, Rational alpha, const MAlphaOptions& opt) {
  if (alpha.num <= 0) throw std::invalid_argument("alpha must be positive");
  if (K.size() > opt.coverage_budget)
    throw BudgetExceeded("residue class coverage", double(K.size()), double(opt.coverage_budget));
  const int r = K.degree();
  const auto& R = K.ring();
  const std::uint32_t q = K.q();

  MAlphaResult res;
  res.smooth_bound = static_cast<int>(alpha.floor_times(r));
  res.degree_ceiling = opt.degree_ceiling > 0 ? opt.degree_ceiling : 4 * r;
  res.monic_only = opt.monic_only;
  res.witness.assign(K.size(), Poly());
  const std::uint64_t classes = K.size() - 1;
  std::vector<char> covered(K.size(), 0);
  const std::uint32_t leads = opt.monic_only ? 1 : q - 1;

  // no square-free s-smooth polynomial is longer than the product of all monic irreducibles of degree <= s
  BigInt longest = 0;
  for (int d = 1; d <= res.smooth_bound; ++d) longest += count_irreducibles(q, d) * d;
  const int last = longest < res.degree_ceiling ? static_cast<int>(longest) : res.degree_ceiling;

  for (int d = 0; d <= last; ++d) {
    const double per_lead = std::pow(double(q), d);
    check_budget(double(res.enumerated) + per_lead * leads, opt.enumeration_budget, "M_alpha enumeration");
    const auto low_count = static_cast<std::uint64_t>(per_lead);
    const std::uint64_t total = low_count * leads;

    std::vector<std::vector<std::pair<std::uint32_t, Poly>>> hits(detail::kBlocks);
    detail::for_blocks(total, opt.workers, [&](std::size_t b, std::size_t lo, std::size_t hi, unsigned) {
      std::unordered_set<std::uint32_t> local;
      for (std::size_t idx = lo; idx < hi; ++idx) {
        const std::uint64_t lead = 1 + idx / low_count;
        const Poly g = R.add(R.decode(idx % low_count), Poly::monomial(static_cast<std::uint32_t>(lead), d));
        const Elem cls = K.from_poly(R.rem(g, K.modulus()));
        if (cls.is_zero() || covered[cls.value] || local.count(cls.value)) continue;
        if (d > res.smooth_bound && R.smoothness_degree(g) > res.smooth_bound) continue;
        if (!R.is_squarefree(g)) continue;
        local.insert(cls.value);
        hits[b].emplace_back(cls.value, g);
      }
    });
    res.enumerated += total;
    for (auto& block : hits)
      for (auto& [cls, g] : block)
        if (!covered[cls]) {
          covered[cls] = 1;
          res.witness[cls] = std::move(g);
          ++res.covered;
        }
    if (res.covered == classes) {
      res.M = d;
      return res;
    }
  }
  return res;
}

std::string validate_witnesses(const ResidueField& K, const MAlphaResult& res) {
  const auto& R = K.ring();
  for (std::uint32_t c = 1; c < res.witness.size(); ++c) {
    const Poly& w = res.witness[c];
    const std::string where = "class " + std::to_string(c) + ": ";
    if (w.is_zero()) {
      if (res.M) return where + "missing witness";
      continue;
    }
    if (K.from_poly(R.rem(w, K.modulus())) != Elem(c)) return where + "witness in the wrong class";
    if (!R.is_squarefree(w)) return where + "witness not square-free";
    if (R.smoothness_degree(w) > res.smooth_bound) return where + "witness not smooth";
    if (res.M && w.degree() > *res.M) return where + "witness degree exceeds M";
    if (res.monic_only && w.leading() != 1) return where + "witness not monic";
  }
  return {};
}

SuvResult count_suv(const ResidueField& K, Elem a, int T, int W, int kfac, const ClassOptions& opt) {
  if (a.is_zero()) throw std::invalid_argument("a must be nonzero");
  if (T < 0 || W < 0 || kfac < 1) throw std::invalid_argument("count_suv requires T, W >= 0 and kfac >= 1");
  const auto& R = K.ring();
  SuvResult res;
  const double q = K.q();
  res.main_term = std::pow(q, T + 2 * W - K.degree());

  std::vector<Elem> S;
  if (T == 0) {
    S.push_back(Elem(1));
  } else {
    check_budget(std::pow(q, T), opt.enumeration_budget, "S_T enumeration");
    for_each_squarefree_monic(R, T, [&](const Poly& s) {
      S.push_back(K.from_poly(R.rem(s, K.modulus())));
      return true;
    });
  }
  res.s_size = S.size();

  Histogram U(K.size());
  const int d = W / kfac;
  if (d >= 1) {
    std::vector<Elem> P;
    for_each_irreducible(R, d, [&](const Poly& l) {
      P.push_back(K.from_poly(R.rem(l, K.modulus())));
      return true;
    });
    if (P.size() >= static_cast<std::size_t>(kfac)) {
      double combos = 1;
      for (int i = 0; i < kfac; ++i) combos = combos * double(P.size() - i) / double(i + 1);
      check_budget(combos * double(S.size()), opt.enumeration_budget, "S x U enumeration");
      std::vector<std::size_t> idx(kfac);
      std::iota(idx.begin(), idx.end(), 0);
      for (;;) {
        Elem u(1);
        for (auto i : idx) u = K.mul(u, P[i]);
        U.add(u);
        ++res.u_size;
        int j = kfac - 1;
        while (j >= 0 && idx[j] == P.size() - kfac + j) --j;
        if (j < 0) break;
        ++idx[j];
        for (int t = j + 1; t < kfac; ++t) idx[t] = idx[t - 1] + 1;
      }
    }
  }
  res.principal_term = double(res.s_size) * double(res.u_size) * double(res.u_size) / (double(K.size()) - 1);

  std::vector<std::pair<Elem, std::uint64_t>> ulist;
  for (std::uint32_t v = 1; v < K.size(); ++v)
    if (U[Elem(v)]) ulist.emplace_back(Elem(v), U[Elem(v)]);
  BigInt total = 0;
  for (Elem s : S) {
    if (s.is_zero()) continue;
    const Elem as = K.mul(a, K.inv(s));
    std::uint64_t c = 0;
    for (const auto& [u, mult] : ulist) c += mult * U[K.mul(as, K.inv(u))];
    total += c;
  }
  res.count = total;
  return res;
}

}  // namespace ffenergy
