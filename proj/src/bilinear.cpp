#include "ffenergy/bilinear.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ffenergy/enumerate.hpp"
#include "parallel.hpp"

namespace ffenergy {

namespace {

/// sum_{i < n} term(i), reduced block by block in a fixed order.
template <class Term>
std::complex<double> block_sum(std::size_t n, unsigned workers, Term term) {
  std::vector<std::complex<double>> partial(detail::kBlocks);
  detail::for_blocks(n, workers, [&](std::size_t b, std::size_t lo, std::size_t hi, unsigned) {
    std::complex<double> s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[b] = s;
  });
  std::complex<double> total = 0;
  for (const auto& s : partial) total += s;
  return total;
}

void check_weights(const ResidueField& K, const Weight& w, const char* name) {
  K.check_window(w.window());
  if (w.size() != K.window_size(w.window()))
    throw std::invalid_argument(std::string("weight ") + name + " does not match the field");
}

void check_terms(const Weight& a, const Weight& b, const BilinearOptions& opt) {
  const double terms = double(a.size()) * double(b.size());
  if (terms > opt.term_limit) throw BudgetExceeded("bilinear sum exceeds the term limit", terms, opt.term_limit);
}

void check_twist(Elem c) {
  if (c.is_zero()) throw std::invalid_argument("twist c must be nonzero");
}

void check_degree_below_r(const ResidueField& K, int n) {
  if (n < 1 || n >= K.degree())
    throw std::invalid_argument("n must satisfy 1 <= n < r (n=" + std::to_string(n) + ", r=" +
                                std::to_string(K.degree()) + ")");
}

void finish(BilinearResult& res) {
  res.abs = std::abs(res.value);
  res.ratio = res.main_term > 0 ? res.abs / res.main_term : 0.0;
}

}  // namespace

BilinearResult bilinear_sqrt(const ResidueField& K, const Weight& alpha, const Weight& beta, Elem c,
                             const BilinearOptions& opt) {
  check_twist(c);
  check_weights(K, alpha, "alpha");
  check_weights(K, beta, "beta");
  check_terms(alpha, beta, opt);
  const auto a = alpha.values();
  const auto b = beta.values();
  BilinearResult res;
  res.value = block_sum(a.size(), opt.workers, [&](std::size_t f) {
    std::complex<double> row = 0;
    if (a[f] == 0.0) return row;
    const Elem ef(static_cast<std::uint32_t>(f));
    for (std::size_t g = 0; g < b.size(); ++g) {
      if (b[g] == 0.0) continue;
      std::complex<double> roots = 0;
      for (Elem h : K.square_roots(K.mul(ef, Elem(static_cast<std::uint32_t>(g)))).view())
        roots += K.additive_char(c, h);
      row += b[g] * roots;
    }
    return a[f] * row;
  });
  res.terms = a.size() * b.size();
  res.trivial_bound = 2.0 * alpha.norm1() * beta.norm1();
  res.main_term = bilinear_sqrt_main_term(K.q(), K.degree(), alpha.window(), beta.window(), alpha, beta);
  finish(res);
  return res;
}

BilinearResult bilinear_inv(const ResidueField& K, const Weight& alpha, const Weight& beta, Elem c,
                            const BilinearOptions& opt) {
  check_twist(c);
  check_weights(K, alpha, "alpha");
  check_weights(K, beta, "beta");
  check_terms(alpha, beta, opt);
  const auto a = alpha.values();
  const auto b = beta.values();
  std::vector<Elem> binv(b.size());
  for (std::size_t g = 1; g < b.size(); ++g) binv[g] = K.inv(Elem(static_cast<std::uint32_t>(g)));
  BilinearResult res;
  res.value = block_sum(a.size(), opt.workers, [&](std::size_t f) {
    std::complex<double> row = 0;
    if (f == 0 || a[f] == 0.0) return row;
    const Elem finv = K.inv(Elem(static_cast<std::uint32_t>(f)));
    for (std::size_t g = 1; g < b.size(); ++g) row += b[g] * K.additive_char(c, K.mul(finv, binv[g]));
    return a[f] * row;
  });
  res.terms = (a.size() - 1) * (b.size() - 1);
  res.skipped_terms = a.size() + b.size() - 1;
  res.trivial_bound = alpha.norm1() * beta.norm1();
  res.main_term = bilinear_inv_main_term(K.q(), K.degree(), alpha.window(), beta.window(), alpha, beta);
  finish(res);
  return res;
}

BilinearResult vinogradov_sum(const ResidueField& K, const Weight& alpha, const Weight& beta, Elem c,
                              const BilinearOptions& opt, double slack) {
  check_twist(c);
  if (alpha.window() != K.degree() || beta.window() != K.degree())
    throw std::invalid_argument("Vinogradov sum requires full-window weights (m = n = r)");
  check_weights(K, alpha, "alpha");
  check_weights(K, beta, "beta");
  check_terms(alpha, beta, opt);
  const auto a = alpha.values();
  const auto b = beta.values();
  BilinearResult res;
  res.value = block_sum(a.size(), opt.workers, [&](std::size_t f) {
    std::complex<double> row = 0;
    if (a[f] == 0.0) return row;
    const Elem cf = K.mul(c, Elem(static_cast<std::uint32_t>(f)));
    for (std::size_t g = 0; g < b.size(); ++g)
      row += b[g] * K.prime_root_of_unity(K.absolute_trace(K.mul(cf, Elem(static_cast<std::uint32_t>(g)))));
    return a[f] * row;
  });
  res.terms = a.size() * b.size();
  res.trivial_bound = alpha.norm1() * beta.norm1();
  const double bound = std::pow(double(K.q()), K.degree() / 2.0) * alpha.norm2() * beta.norm2();
  res.main_term = bound;
  finish(res);
  res.hard_bound = bound;
  res.hard_bound_holds = res.abs <= bound * (1.0 + slack);
  return res;
}

double b_exponent(int r, int n) {
  if (n < 1 || n >= r) throw std::invalid_argument("B(r, n) requires 1 <= n < r");
  return 3 * n < r ? 1.5 * n + r / 8.0 : 15.0 * n / 8.0;
}

bool b_exponent_branches_agree(int r) {
  const double n = r / 3.0;
  return std::abs((1.5 * n + r / 8.0) - 15.0 * n / 8.0) <= 1e-12 * std::max(1.0, double(r));
}

BilinearResult irreducible_reciprocal_sum(const ResidueField& K, int n, Elem c, const BilinearOptions& opt) {
  check_twist(c);
  check_degree_below_r(K, n);
  std::vector<Elem> inv;
  for_each_irreducible(K.ring(), n, [&](const Poly& l) {
    inv.push_back(K.inv(K.from_poly(l)));
    return true;
  });
  const double terms = double(inv.size()) * double(inv.size());
  if (terms > opt.term_limit) throw BudgetExceeded("irreducible double sum exceeds the term limit", terms, opt.term_limit);
  BilinearResult res;
  res.value = block_sum(inv.size(), opt.workers, [&](std::size_t i) {
    std::complex<double> row = 0;
    for (Elem y : inv) row += K.additive_char(c, K.mul(inv[i], y));
    return row;
  });
  res.terms = inv.size() * inv.size();
  res.trivial_bound = terms;
  res.main_term = std::pow(double(K.q()), b_exponent(K.degree(), n));
  finish(res);
  return res;
}

std::string to_string(MonicSet s) {
  switch (s) {
    case MonicSet::irreducible: return "irreducible";
    case MonicSet::squarefree: return "squarefree";
    case MonicSet::monic: return "monic";
  }
  return "?";
}

MonicSet parse_monic_set(const std::string& text) {
  if (text == "irreducible") return MonicSet::irreducible;
  if (text == "squarefree") return MonicSet::squarefree;
  if (text == "monic") return MonicSet::monic;
  throw std::invalid_argument("unknown set '" + text + "' (expected irreducible, squarefree or monic)");
}

CharSumResult charsum(const ResidueField& K, MonicSet set, int n, std::uint64_t chi_index) {
  check_degree_below_r(K, n);
  if (chi_index >= K.size() - 1u) throw std::out_of_range("character index out of range");
  CharSumResult res;
  auto visit = [&](const Poly& f) {
    res.value += K.mult_char(chi_index, K.from_poly(f));
    ++res.terms;
    return true;
  };
  switch (set) {
    case MonicSet::irreducible: for_each_irreducible(K.ring(), n, visit); break;
    case MonicSet::squarefree: for_each_squarefree_monic(K.ring(), n, visit); break;
    case MonicSet::monic: for_each_monic(K.ring(), n, visit); break;
  }
  res.abs = std::abs(res.value);
  res.principal = chi_index == 0;
  const double half = std::pow(double(K.q()), n / 2.0);
  res.main_term = set == MonicSet::squarefree ? n * half : half;
  res.envelope = K.degree() * res.main_term;
  res.ratio = res.abs / res.main_term;
  return res;
}

std::complex<double> charsum_irreducibles(const ResidueField& K, int n, std::uint64_t chi_index) {
  return charsum(K, MonicSet::irreducible, n, chi_index).value;
}

std::complex<double> charsum_squarefree(const ResidueField& K, int n, std::uint64_t chi_index) {
  return charsum(K, MonicSet::squarefree, n, chi_index).value;
}

double bilinear_sqrt_main_term(std::uint32_t q, int r, int m, int n, const Weight& alpha, const Weight& beta) {
  const double Q = q;
  return alpha.norm2() * std::pow(beta.norm1(), 0.75) * std::pow(beta.norm_inf(), 0.25) *
         std::pow(Q, r / 8.0 + 5.0 * m / 16.0 + n / 16.0) * (std::pow(Q, m / 8.0 - r / 16.0) + 1.0) *
         (std::pow(Q, n / 8.0 - r / 16.0) + 1.0);
}

double bilinear_inv_main_term(std::uint32_t q, int r, int m, int n, const Weight& alpha, const Weight& beta) {
  const double Q = q;
  return alpha.norm_inf() * beta.norm_inf() * std::pow(Q, r / 8.0 + 0.75 * m + 0.75 * n) *
         (std::pow(Q, 3.0 * m / 16.0 - r / 16.0) + 1.0) * (std::pow(Q, 3.0 * n / 16.0 - r / 16.0) + 1.0);
}

}  // namespace ffenergy
