#include "ffenergy/fq.hpp"

#include <stdexcept>

#include "ffenergy/poly.hpp"

namespace ffenergy {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

int mobius(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("mobius(0) undefined");
  int sign = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      sign = -sign;
    }
  }
  if (n > 1) sign = -sign;
  return sign;
}

namespace {

std::uint32_t checked_size(std::uint32_t p, std::uint32_t e) {
  if (!is_prime(p)) throw std::invalid_argument("characteristic " + std::to_string(p) + " is not prime");
  if (e < 1) throw std::invalid_argument("extension exponent must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    q *= p;
    if (q > Fq::kMaxFieldSize) throw std::invalid_argument("field size too large (q > 1024)");
  }
  return static_cast<std::uint32_t>(q);
}

std::vector<std::uint32_t> smallest_irreducible_over_prime(std::uint32_t p, std::uint32_t e) {
  std::vector<std::uint32_t> identity{0, 1};
  if (e == 1) return identity;
  PolyRing ring{Fq(p, 1)};
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < e; ++i) count *= p;
  for (std::uint64_t low = 0; low < count; ++low) {
    std::vector<std::uint32_t> c(e + 1, 0);
    std::uint64_t v = low;
    for (std::uint32_t i = 0; i < e; ++i) {
      c[i] = static_cast<std::uint32_t>(v % p);
      v /= p;
    }
    c[e] = 1;
    if (ring.is_irreducible(Poly(c))) return c;
  }
  throw std::logic_error("no irreducible polynomial found");
}

}  // namespace

Fq::Fq(std::uint32_t p, std::uint32_t e) : p_(p), e_(e), q_(checked_size(p, e)) {
  base_modulus_ = smallest_irreducible_over_prime(p, e);
  build_tables();
}

Fq::Fq(std::uint32_t p, std::uint32_t e, std::vector<std::uint32_t> base_modulus)
    : p_(p), e_(e), q_(checked_size(p, e)), base_modulus_(std::move(base_modulus)) {
  Poly m(base_modulus_);
  if (m.degree() != static_cast<int>(e) || m.leading() != 1) {
    throw std::invalid_argument("base modulus must be monic of degree e");
  }
  for (auto c : base_modulus_) {
    if (c >= p) throw std::invalid_argument("base modulus coefficient out of range");
  }
  if (e > 1) {
    PolyRing ring{Fq(p, 1)};
    if (!ring.is_irreducible(m)) throw std::invalid_argument("base modulus not irreducible");
  }
  build_tables();
}

void Fq::build_tables() {
  auto t = std::make_shared<Tables>();
  const std::size_t qq = static_cast<std::size_t>(q_) * q_;
  t->add.resize(qq);
  t->mul.resize(qq);
  t->neg.resize(q_);
  t->inv.resize(q_);
  t->trace.resize(q_);
  t->pth_root.resize(q_);

  auto digits = [&](std::uint32_t a) {
    std::vector<std::uint32_t> d(e_);
    for (std::uint32_t i = 0; i < e_; ++i) {
      d[i] = a % p_;
      a /= p_;
    }
    return d;
  };
  auto undigits = [&](const std::vector<std::uint32_t>& d) {
    std::uint32_t a = 0;
    for (std::uint32_t i = e_; i-- > 0;) a = a * p_ + d[i];
    return a;
  };

  std::vector<std::vector<std::uint32_t>> dig(q_);
  for (std::uint32_t a = 0; a < q_; ++a) dig[a] = digits(a);

  for (std::uint32_t a = 0; a < q_; ++a) {
    std::vector<std::uint32_t> n(e_);
    for (std::uint32_t i = 0; i < e_; ++i) n[i] = (p_ - dig[a][i]) % p_;
    t->neg[a] = static_cast<std::uint16_t>(undigits(n));
    for (std::uint32_t b = 0; b < q_; ++b) {
      std::vector<std::uint32_t> s(e_);
      for (std::uint32_t i = 0; i < e_; ++i) s[i] = (dig[a][i] + dig[b][i]) % p_;
      t->add[a * q_ + b] = static_cast<std::uint16_t>(undigits(s));

      // Schoolbook product of coordinate polynomials, reduced by the monic base modulus.
      std::vector<std::uint64_t> prod(2 * e_ - 1, 0);
      for (std::uint32_t i = 0; i < e_; ++i)
        for (std::uint32_t j = 0; j < e_; ++j) prod[i + j] += std::uint64_t{dig[a][i]} * dig[b][j];
      for (auto& c : prod) c %= p_;
      for (std::size_t k = prod.size(); k-- > e_;) {
        const std::uint64_t c = prod[k];
        if (c == 0) continue;
        prod[k] = 0;
        for (std::uint32_t i = 0; i < e_; ++i) {
          prod[k - e_ + i] = (prod[k - e_ + i] + (p_ - c) * base_modulus_[i]) % p_;
        }
      }
      std::vector<std::uint32_t> r(e_);
      for (std::uint32_t i = 0; i < e_; ++i) r[i] = static_cast<std::uint32_t>(prod[i]);
      t->mul[a * q_ + b] = static_cast<std::uint16_t>(undigits(r));
    }
  }
  for (std::uint32_t a = 1; a < q_; ++a) {
    for (std::uint32_t b = 1; b < q_; ++b) {
      if (t->mul[a * q_ + b] == 1) {
        t->inv[a] = static_cast<std::uint16_t>(b);
        break;
      }
    }
  }
  tables_ = t;

  for (std::uint32_t a = 0; a < q_; ++a) {
    // Tr(a) = a + a^p + ... + a^{p^{e-1}} lies in the prime field, i.e. encodes as < p.
    std::uint32_t acc = 0;
    std::uint32_t conj = a;
    for (std::uint32_t i = 0; i < e_; ++i) {
      acc = add(acc, conj);
      conj = pow(conj, p_);
    }
    if (acc >= p_) throw std::logic_error("trace left the prime field");
    t->trace[a] = static_cast<std::uint16_t>(acc);
    // Frobenius is a bijection; invert it for p-th roots.
    t->pth_root[pow(a, p_)] = static_cast<std::uint16_t>(a);
  }
}

Fq::Element Fq::inv(Element a) const {
  if (a == 0) throw std::domain_error("zero divisor");
  return tables_->inv[a];
}

Fq::Element Fq::pow(Element a, std::uint64_t exponent) const {
  Element result = 1;
  Element base = a;
  while (exponent > 0) {
    if (exponent & 1) result = mul(result, base);
    base = mul(base, base);
    exponent >>= 1;
  }
  return result;
}

std::string Fq::to_string() const { return std::to_string(p_) + "^" + std::to_string(e_); }

}  // namespace ffenergy
