#include "ffenergy/energy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace ffenergy {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void check_pairs(double pairs, double limit, const char* what) {
  if (pairs > limit) throw BudgetExceeded(std::string(what) + " exceeds the pair limit", pairs, limit);
}

/// Histogram of combine(xs[i], xs[j]) over all ordered pairs, built with
/// per-worker tables merged in worker order.
template <class Combine>
Histogram pair_histogram(const ResidueField& K, const std::vector<Elem>& xs, unsigned workers, Combine combine) {
  const std::size_t n = xs.size();
  const unsigned w = detail::effective_workers(n, workers);
  std::vector<Histogram> parts(w, Histogram(K.size()));
  detail::for_blocks(n, workers, [&](std::size_t, std::size_t lo, std::size_t hi, unsigned worker) {
    Histogram& h = parts[worker];
    for (std::size_t i = lo; i < hi; ++i)
      for (Elem y : xs) h.add(combine(xs[i], y));
  });
  for (unsigned i = 1; i < w; ++i) parts[0].merge(parts[i]);
  return parts.empty() ? Histogram(K.size()) : std::move(parts[0]);
}

EnergyResult make_result(const ResidueField& K, int m, BigInt exact, const char* method, Clock::time_point t0) {
  EnergyResult res;
  res.value = to_double(exact);
  res.exact = std::move(exact);
  res.method = method;
  res.q = K.q();
  res.r = K.degree();
  res.m = m;
  res.elapsed_ms = ms_since(t0);
  return res;
}

std::vector<Elem> nonzero_window(const ResidueField& K, int m) {
  auto w = K.window(m);
  w.erase(w.begin());
  return w;
}

}  // namespace

std::vector<Elem> root_set(const ResidueField& K, int m) {
  K.check_window(m);
  std::vector<Elem> out;
  for (Elem f : K.window(m))
    for (Elem t : K.square_roots(f).view()) out.push_back(t);
  std::sort(out.begin(), out.end());
  return out;
}

Histogram sum_histogram(const ResidueField& K, int m, const EnergyOptions& opt) {
  const auto R = root_set(K, m);
  check_pairs(double(R.size()) * double(R.size()), opt.pair_limit, "sum histogram");
  return pair_histogram(K, R, opt.workers, [&](Elem u, Elem v) { return K.add(u, v); });
}

Histogram difference_histogram(const ResidueField& K, int m, const EnergyOptions& opt) {
  const auto R = root_set(K, m);
  check_pairs(double(R.size()) * double(R.size()), opt.pair_limit, "difference histogram");
  return pair_histogram(K, R, opt.workers, [&](Elem u, Elem v) { return K.sub(u, v); });
}

EnergyResult energy_sqrt(const ResidueField& K, int m, const EnergyOptions& opt) {
  const auto t0 = Clock::now();
  return make_result(K, m, sum_histogram(K, m, opt).sum_of_squares(), "histogram", t0);
}

EnergyResult energy_sqrt(const ResidueField& K, const Weight& beta, const EnergyOptions& opt) {
  const int m = beta.window();
  K.check_window(m);
  if (beta.size() != K.window_size(m)) throw std::invalid_argument("weight does not match the field");
  if (beta.is_indicator()) return energy_sqrt(K, m, opt);

  const auto t0 = Clock::now();
  const auto R = root_set(K, m);
  check_pairs(double(R.size()) * double(R.size()), opt.pair_limit, "weighted sum histogram");
  std::vector<std::complex<double>> w(R.size());
  for (std::size_t i = 0; i < R.size(); ++i) w[i] = beta.at(K.mul(R[i], R[i]));

  std::vector<std::complex<double>> G(K.size());
  for (std::size_t i = 0; i < R.size(); ++i)
    for (std::size_t j = 0; j < R.size(); ++j) G[K.add(R[i], R[j]).value] += w[i] * std::conj(w[j]);

  std::complex<double> E = 0;
  for (const auto& g : G) E += g * g;

  EnergyResult res;
  res.value = E;
  res.exact = BigInt(static_cast<long long>(std::llround(E.real())));
  res.integral = false;
  res.method = "weighted_histogram";
  res.q = K.q();
  res.r = K.degree();
  res.m = m;
  res.elapsed_ms = ms_since(t0);
  return res;
}

BigInt energy_sqrt_bruteforce(const ResidueField& K, int m, const EnergyOptions& opt) {
  const auto R = root_set(K, m);
  const double n = static_cast<double>(R.size());
  if (n * n * n > opt.oracle_limit) throw std::length_error("oracle too large");
  std::uint64_t count = 0;
  for (Elem u : R)
    for (Elem v : R) {
      const Elem s = K.add(u, v);
      for (Elem x : R) {
        const Elem y = K.sub(s, x);
        if (K.in_window(K.mul(y, y), m)) ++count;
      }
    }
  return BigInt(count);
}

std::complex<double> q_lambda(const ResidueField& K, const Weight& beta, Elem lambda) {
  const int m = beta.window();
  std::complex<double> sum = 0;
  for (Elem u : root_set(K, m)) {
    const Elem v = K.sub(u, lambda);
    const Elem v2 = K.mul(v, v);
    if (K.in_window(v2, m)) sum += beta.at(K.mul(u, u)) * std::conj(beta.at(v2));
  }
  return sum;
}

std::vector<std::complex<double>> q_lambda_all(const ResidueField& K, const Weight& beta, const EnergyOptions& opt) {
  const auto R = root_set(K, beta.window());
  check_pairs(double(R.size()) * double(R.size()), opt.pair_limit, "difference spectrum");
  std::vector<std::complex<double>> w(R.size());
  for (std::size_t i = 0; i < R.size(); ++i) w[i] = beta.at(K.mul(R[i], R[i]));
  std::vector<std::complex<double>> Q(K.size());
  for (std::size_t i = 0; i < R.size(); ++i)
    for (std::size_t j = 0; j < R.size(); ++j) Q[K.sub(R[i], R[j]).value] += w[i] * std::conj(w[j]);
  return Q;
}

BigInt inv_rep_count(const ResidueField& K, Elem a, int m) {
  std::uint64_t count = 0;
  for (Elem u : nonzero_window(K, m)) {
    const Elem t = K.sub(a, K.inv(u));
    if (t.is_zero()) continue;
    if (K.in_window(K.inv(t), m)) ++count;
  }
  return BigInt(count);
}

Histogram inv_histogram(const ResidueField& K, int m, const EnergyOptions& opt) {
  auto inverses = nonzero_window(K, m);
  for (auto& u : inverses) u = K.inv(u);
  check_pairs(double(inverses.size()) * double(inverses.size()), opt.pair_limit, "reciprocal histogram");
  return pair_histogram(K, inverses, opt.workers, [&](Elem x, Elem y) { return K.add(x, y); });
}

EnergyResult energy_inv(const ResidueField& K, int m, const EnergyOptions& opt) {
  const auto t0 = Clock::now();
  return make_result(K, m, inv_histogram(K, m, opt).sum_of_squares(), "histogram", t0);
}

std::vector<std::complex<double>> a_lambda_spectrum(const ResidueField& K, int m, Elem c, const EnergyOptions& opt) {
  if (c.is_zero()) throw std::invalid_argument("twist c must be nonzero");
  const auto R = root_set(K, m);
  check_pairs(double(R.size()) * double(K.size()), opt.pair_limit, "A_lambda spectrum");
  std::vector<std::complex<double>> A(K.size());
  const std::uint32_t p = K.p();
  detail::for_blocks(K.size(), opt.workers, [&](std::size_t, std::size_t lo, std::size_t hi, unsigned) {
    std::vector<std::uint64_t> counts(p);
    for (std::size_t l = lo; l < hi; ++l) {
      std::fill(counts.begin(), counts.end(), 0);
      const Elem cl = K.mul(c, Elem(static_cast<std::uint32_t>(l)));
      for (Elem t : R) ++counts[K.absolute_trace(K.mul(cl, t))];
      std::complex<double> s = 0;
      for (std::uint32_t j = 0; j < p; ++j)
        if (counts[j]) s += static_cast<double>(counts[j]) * K.prime_root_of_unity(j);
      A[l] = s;
    }
  });
  return A;
}

FourthMomentCheck fourth_moment_check(const ResidueField& K, int m, Elem c, const EnergyOptions& opt,
                                      double tolerance) {
  FourthMomentCheck out;
  for (const auto& a : a_lambda_spectrum(K, m, c, opt)) {
    const double n2 = std::norm(a);
    out.lhs += n2 * n2;
  }
  out.rhs = BigInt(K.size()) * energy_sqrt(K, m, opt).exact;
  const double rhs = to_double(out.rhs);
  out.rel_err = std::abs(out.lhs - rhs) / std::max(rhs, 1.0);
  out.pass = out.rel_err <= tolerance;
  return out;
}

BigInt count_quadratic_image(const ResidueField& K, const std::array<Elem, 3>& p, int m) {
  if (p[2].is_zero()) throw std::invalid_argument("polynomial must have degree 2");
  std::uint64_t count = 0;
  for (Elem u : K.window(m)) {
    const Elem v = K.add(p[0], K.mul(u, K.add(p[1], K.mul(p[2], u))));
    if (K.in_window(v, m)) ++count;
  }
  return BigInt(count);
}

BigInt count_hyperbola(const ResidueField& K, Elem a, int m) {
  if (a.is_zero()) throw std::invalid_argument("a must be nonzero");
  std::uint64_t count = 0;
  for (Elem u : nonzero_window(K, m))
    if (K.in_window(K.mul(a, K.inv(u)), m)) ++count;
  return BigInt(count);
}

double energy_sqrt_main_term(std::uint32_t q, int r, int m, double norm1, double norm_inf) {
  const double Q = q;
  return norm1 * norm1 * norm_inf * norm_inf * std::pow(Q, m / 2.0) * (std::pow(Q, m - r / 2.0) + 1.0);
}

double energy_inv_main_term(std::uint32_t q, int r, int m) {
  const double Q = q;
  return std::pow(Q, (7.0 * m - r) / 2.0) + std::pow(Q, 2.0 * m);
}

}  // namespace ffenergy
