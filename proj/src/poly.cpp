#include "ffenergy/poly.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <stdexcept>

namespace ffenergy {

Poly Poly::monomial(std::uint32_t c, int n) {
  if (c == 0) return Poly();
  std::vector<std::uint32_t> v(static_cast<std::size_t>(n) + 1, 0);
  v.back() = c;
  return Poly(std::move(v));
}

Poly PolyRing::add(const Poly& f, const Poly& g) const {
  const auto& a = f.coeffs();
  const auto& b = g.coeffs();
  std::vector<std::uint32_t> out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = fq_.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  }
  return Poly(std::move(out));
}

Poly PolyRing::neg(const Poly& f) const {
  std::vector<std::uint32_t> out(f.coeffs());
  for (auto& c : out) c = fq_.neg(c);
  return Poly(std::move(out));
}

Poly PolyRing::sub(const Poly& f, const Poly& g) const { return add(f, neg(g)); }

Poly PolyRing::scale(const Poly& f, std::uint32_t c) const {
  std::vector<std::uint32_t> out(f.coeffs());
  for (auto& x : out) x = fq_.mul(x, c);
  return Poly(std::move(out));
}

Poly PolyRing::mul(const Poly& f, const Poly& g) const {
  if (f.is_zero() || g.is_zero()) return Poly();
  const auto& a = f.coeffs();
  const auto& b = g.coeffs();
  std::vector<std::uint32_t> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = fq_.add(out[i + j], fq_.mul(a[i], b[j]));
    }
  }
  return Poly(std::move(out));
}

std::pair<Poly, Poly> PolyRing::divmod(const Poly& f, const Poly& g) const {
  if (g.is_zero()) throw std::domain_error("zero divisor");
  if (f.degree() < g.degree()) return {Poly(), f};
  std::vector<std::uint32_t> r(f.coeffs());
  const auto& d = g.coeffs();
  const int dg = g.degree();
  const std::uint32_t lc_inv = fq_.inv(g.leading());
  std::vector<std::uint32_t> quot(static_cast<std::size_t>(f.degree() - dg) + 1, 0);
  for (int k = f.degree(); k >= dg; --k) {
    const std::uint32_t c = r[k];
    if (c == 0) continue;
    const std::uint32_t t = fq_.mul(c, lc_inv);
    quot[k - dg] = t;
    for (int i = 0; i <= dg; ++i) {
      r[k - dg + i] = fq_.sub(r[k - dg + i], fq_.mul(t, d[i]));
    }
  }
  r.resize(static_cast<std::size_t>(dg));
  return {Poly(std::move(quot)), Poly(std::move(r))};
}

Poly PolyRing::rem(const Poly& f, const Poly& g) const { return divmod(f, g).second; }
Poly PolyRing::quo(const Poly& f, const Poly& g) const { return divmod(f, g).first; }

Poly PolyRing::monic(const Poly& f) const {
  if (f.is_zero() || f.leading() == 1) return f;
  return scale(f, fq_.inv(f.leading()));
}

Poly PolyRing::gcd(const Poly& f, const Poly& g) const {
  Poly a = f;
  Poly b = g;
  while (!b.is_zero()) {
    Poly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

Poly PolyRing::derivative(const Poly& f) const {
  if (f.degree() < 1) return Poly();
  std::vector<std::uint32_t> out(static_cast<std::size_t>(f.degree()), 0);
  for (int i = 1; i <= f.degree(); ++i) {
    // i * c_i with i taken mod p, as a repeated sum in F_q.
    std::uint32_t k = static_cast<std::uint32_t>(i) % fq_.p();
    std::uint32_t s = 0;
    for (std::uint32_t j = 0; j < k; ++j) s = fq_.add(s, f.coeff(i));
    out[i - 1] = s;
  }
  return Poly(std::move(out));
}

std::uint32_t PolyRing::eval(const Poly& f, std::uint32_t x) const {
  std::uint32_t acc = 0;
  for (int i = f.degree(); i >= 0; --i) acc = fq_.add(fq_.mul(acc, x), f.coeff(i));
  return acc;
}

Poly PolyRing::mul_mod(const Poly& f, const Poly& g, const Poly& m) const { return rem(mul(f, g), m); }

Poly PolyRing::pow_mod(const Poly& f, const BigInt& exponent, const Poly& m) const {
  if (m.is_zero()) throw std::domain_error("zero divisor");
  if (exponent < 0) throw std::invalid_argument("negative exponent");
  Poly result = rem(one(), m);
  if (exponent == 0) return result;
  const Poly base = rem(f, m);
  const auto top = boost::multiprecision::msb(exponent);
  for (auto bit = static_cast<long long>(top); bit >= 0; --bit) {
    result = mul_mod(result, result, m);
    if (boost::multiprecision::bit_test(exponent, static_cast<unsigned>(bit))) result = mul_mod(result, base, m);
  }
  return result;
}

Poly PolyRing::pow(const Poly& f, unsigned exponent) const {
  Poly result = one();
  Poly base = f;
  while (exponent > 0) {
    if (exponent & 1U) result = mul(result, base);
    exponent >>= 1U;
    if (exponent > 0) base = mul(base, base);
  }
  return result;
}

Poly PolyRing::frobenius_mod(const Poly& h, const Poly& m) const { return pow_mod(h, BigInt(fq_.q()), m); }

bool PolyRing::is_irreducible(const Poly& f) const {
  if (f.degree() < 1) throw std::invalid_argument("degree too small");
  const int n = f.degree();
  if (n == 1) return true;
  const Poly g = monic(f);
  const Poly xm = rem(x(), g);
  std::vector<int> checkpoints;
  for (auto l : prime_divisors(static_cast<std::uint64_t>(n))) checkpoints.push_back(n / static_cast<int>(l));

  Poly h = xm;
  for (int i = 1; i <= n; ++i) {
    h = frobenius_mod(h, g);
    if (std::find(checkpoints.begin(), checkpoints.end(), i) != checkpoints.end()) {
      if (gcd(g, sub(h, xm)).degree() != 0) return false;
    }
  }
  return h == xm;
}

bool PolyRing::is_squarefree(const Poly& f) const {
  if (f.is_zero()) throw std::invalid_argument("zero polynomial");
  if (f.degree() <= 0) return true;
  // f' = 0 makes the gcd equal to f itself, so p-th powers are rejected too.
  return gcd(f, derivative(f)).degree() == 0;
}

namespace {

Poly pth_root_poly(const Poly& c, const Fq& fq) {
  const int p = static_cast<int>(fq.p());
  std::vector<std::uint32_t> out(static_cast<std::size_t>(c.degree() / p) + 1, 0);
  for (int i = 0; i <= c.degree(); i += p) out[i / p] = fq.pth_root(c.coeff(i));
  return Poly(std::move(out));
}

bool encoding_less(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
  }
  return false;
}

}  // namespace

std::vector<std::pair<Poly, int>> PolyRing::squarefree_decomposition(const Poly& f) const {
  if (f.is_zero()) throw std::invalid_argument("zero polynomial");
  std::vector<std::pair<Poly, int>> out;
  const Poly g = monic(f);
  if (g.degree() <= 0) return out;

  const Poly d = derivative(g);
  Poly c = gcd(g, d);
  Poly w = quo(g, c);
  int i = 1;
  while (w.degree() > 0) {
    Poly y = gcd(w, c);
    Poly z = quo(w, y);
    if (z.degree() > 0) out.emplace_back(z, i);
    ++i;
    w = std::move(y);
    c = quo(c, w);
  }
  if (c.degree() > 0) {
    const int p = static_cast<int>(fq_.p());
    for (auto& [part, mult] : squarefree_decomposition(pth_root_poly(c, fq_))) out.emplace_back(part, mult * p);
  }
  return out;
}

std::vector<std::pair<Poly, int>> PolyRing::distinct_degree(const Poly& g) const {
  std::vector<std::pair<Poly, int>> out;
  Poly rest = monic(g);
  if (rest.degree() <= 0) return out;
  Poly h = rem(x(), rest);
  int d = 0;
  while (rest.degree() >= 2 * (d + 1)) {
    ++d;
    h = frobenius_mod(h, rest);
    Poly fac = gcd(rest, sub(h, x()));
    if (fac.degree() > 0) {
      out.emplace_back(fac, d);
      rest = quo(rest, fac);
      h = rem(h, rest);
    }
  }
  if (rest.degree() > 0) out.emplace_back(rest, rest.degree());
  return out;
}

std::vector<Poly> PolyRing::equal_degree(const Poly& g, int d) const {
  const Poly m = monic(g);
  if (m.degree() == d) return {m};
  if (m.degree() % d != 0) throw std::invalid_argument("degree not a multiple of the factor degree");

  // Fixed seed: the splitting is randomised but each call is reproducible.
  std::mt19937_64 rng(0x5eedf00dULL + static_cast<std::uint64_t>(m.degree()) * 131 + static_cast<std::uint64_t>(d));
  const BigInt half = (boost::multiprecision::pow(BigInt(fq_.q()), static_cast<unsigned>(d)) - 1) / 2;
  const int trace_terms = static_cast<int>(fq_.e()) * d;

  for (;;) {
    std::vector<std::uint32_t> coeffs(static_cast<std::size_t>(m.degree()));
    for (auto& c : coeffs) c = static_cast<std::uint32_t>(rng() % fq_.q());
    Poly a(std::move(coeffs));
    if (a.degree() < 1) continue;
    Poly b;
    if (fq_.odd()) {
      b = sub(pow_mod(a, half, m), one());
    } else {
      Poly term = a;
      b = a;
      for (int i = 1; i < trace_terms; ++i) {
        term = mul_mod(term, term, m);
        b = add(b, term);
      }
    }
    Poly u = gcd(m, b);
    if (u.degree() > 0 && u.degree() < m.degree()) {
      auto left = equal_degree(u, d);
      auto right = equal_degree(quo(m, u), d);
      left.insert(left.end(), right.begin(), right.end());
      return left;
    }
  }
}

Factorization PolyRing::factor(const Poly& f) const {
  if (f.is_zero()) throw std::invalid_argument("cannot factor zero");
  Factorization fac;
  fac.unit = f.leading();
  for (const auto& [part, mult] : squarefree_decomposition(f)) {
    for (const auto& [block, d] : distinct_degree(part)) {
      for (auto& irr : equal_degree(block, d)) fac.factors.emplace_back(std::move(irr), mult);
    }
  }
  std::sort(fac.factors.begin(), fac.factors.end(),
            [](const auto& a, const auto& b) { return encoding_less(a.first, b.first); });
  return fac;
}

Poly PolyRing::expand(const Factorization& fac) const {
  Poly out = Poly::constant(fac.unit);
  for (const auto& [irr, mult] : fac.factors) out = mul(out, pow(irr, static_cast<unsigned>(mult)));
  return out;
}

int PolyRing::smoothness_degree(const Poly& f) const {
  if (f.is_zero()) throw std::invalid_argument("zero polynomial");
  int best = 0;
  for (const auto& [part, mult] : squarefree_decomposition(f)) {
    for (const auto& [block, d] : distinct_degree(part)) best = std::max(best, d);
  }
  return best;
}

int PolyRing::mobius(const Poly& g) const {
  if (g.is_zero()) throw std::invalid_argument("zero polynomial");
  if (g.degree() <= 0) return 1;
  if (!is_squarefree(g)) return 0;
  int k = 0;
  for (const auto& [block, d] : distinct_degree(g)) k += block.degree() / d;
  return k % 2 == 0 ? 1 : -1;
}

std::uint64_t PolyRing::encode(const Poly& f) const {
  std::uint64_t acc = 0;
  const std::uint64_t q = fq_.q();
  for (int i = f.degree(); i >= 0; --i) {
    if (acc > (UINT64_MAX - f.coeff(i)) / q) throw std::overflow_error("polynomial encoding exceeds 64 bits");
    acc = acc * q + f.coeff(i);
  }
  return acc;
}

Poly PolyRing::decode(std::uint64_t code) const {
  std::vector<std::uint32_t> out;
  const std::uint64_t q = fq_.q();
  while (code > 0) {
    out.push_back(static_cast<std::uint32_t>(code % q));
    code /= q;
  }
  return Poly(std::move(out));
}

Poly parse_poly(std::string_view text, const Fq& field) {
  std::vector<std::uint32_t> out;
  std::size_t pos = 0;
  auto trimmed = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  if (trimmed(text).empty()) return Poly();
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    const auto token = trimmed(text.substr(pos, end - pos));
    std::uint32_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      throw std::invalid_argument("bad polynomial coefficient '" + std::string(token) + "'");
    }
    if (value >= field.q()) {
      throw std::invalid_argument("coefficient " + std::to_string(value) + " out of range for q=" +
                                  std::to_string(field.q()));
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Poly(std::move(out));
}

std::string format_poly(const Poly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    if (i) out += ',';
    out += std::to_string(f.coeffs()[i]);
  }
  return out;
}

std::string pretty_poly(const Poly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (int i = f.degree(); i >= 0; --i) {
    const auto c = f.coeff(i);
    if (c == 0) continue;
    if (!out.empty()) out += " + ";
    if (i == 0) {
      out += std::to_string(c);
      continue;
    }
    if (c != 1) out += std::to_string(c);
    out += "X";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

}  // namespace ffenergy
