#include "ffenergy/residue_field.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ffenergy/enumerate.hpp"

namespace ffenergy {

namespace {

constexpr std::uint32_t kNoLog = UINT32_MAX;

std::uint32_t parse_u32(std::string_view token, const char* what) {
  std::uint32_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw std::invalid_argument(std::string("bad field spec: ") + what + " '" + std::string(token) + "'");
  }
  return v;
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ULL) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// FieldSpec

FieldSpec FieldSpec::parse(std::string_view text) {
  FieldSpec spec;
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto caret = head.find('^', pos);
    parts.push_back(head.substr(pos, caret == std::string_view::npos ? std::string_view::npos : caret - pos));
    if (caret == std::string_view::npos) break;
    pos = caret + 1;
  }
  if (parts.size() != 3) throw std::invalid_argument("bad field spec '" + std::string(text) + "': expected p^e^r");
  spec.p = parse_u32(parts[0], "p");
  spec.e = parse_u32(parts[1], "e");
  spec.r = static_cast<int>(parse_u32(parts[2], "r"));
  if (spec.r < 1) throw std::invalid_argument("bad field spec: r must be >= 1");
  if (colon != std::string_view::npos) {
    std::vector<std::uint32_t> coeffs;
    std::string_view rest = text.substr(colon + 1);
    while (true) {
      const auto comma = rest.find(',');
      coeffs.push_back(parse_u32(rest.substr(0, comma), "modulus coefficient"));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    spec.modulus = std::move(coeffs);
  }
  return spec;
}

std::string FieldSpec::to_string() const {
  std::string out = std::to_string(p) + "^" + std::to_string(e) + "^" + std::to_string(r);
  if (modulus) {
    out += ':';
    for (std::size_t i = 0; i < modulus->size(); ++i) {
      if (i) out += ',';
      out += std::to_string((*modulus)[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table cache: "FFETBL01", version, key, generator, exp table, FNV-1a checksum.

class TableCache {
 public:
  static constexpr char kMagic[8] = {'F', 'F', 'E', 'T', 'B', 'L', '0', '1'};
  static constexpr std::uint32_t kVersion = 1;

  static std::filesystem::path path_for(const std::filesystem::path& dir, const std::string& key) {
    char name[40];
    std::snprintf(name, sizeof name, "ffenergy-%016llx.tbl",
                  static_cast<unsigned long long>(fnv1a(key.data(), key.size())));
    return dir / name;
  }

  static std::optional<ResidueField::Prebuilt> read(const std::filesystem::path& file, const std::string& key,
                                                    std::uint32_t expected_count) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return std::nullopt;
    char magic[8];
    std::uint32_t version = 0, key_len = 0, generator = 0, count = 0;
    std::uint64_t checksum = 0;
    if (!in.read(magic, 8) || std::string_view(magic, 8) != std::string_view(kMagic, 8)) return std::nullopt;
    if (!in.read(reinterpret_cast<char*>(&version), 4) || version != kVersion) return std::nullopt;
    if (!in.read(reinterpret_cast<char*>(&key_len), 4) || key_len != key.size()) return std::nullopt;
    std::string stored(key_len, '\0');
    if (!in.read(stored.data(), key_len) || stored != key) return std::nullopt;
    if (!in.read(reinterpret_cast<char*>(&generator), 4)) return std::nullopt;
    if (!in.read(reinterpret_cast<char*>(&count), 4) || count != expected_count) return std::nullopt;
    std::vector<std::uint32_t> exp(count);
    if (!in.read(reinterpret_cast<char*>(exp.data()), static_cast<std::streamsize>(count) * 4)) return std::nullopt;
    if (!in.read(reinterpret_cast<char*>(&checksum), 8)) return std::nullopt;
    if (checksum != digest(key, generator, exp)) return std::nullopt;
    return ResidueField::Prebuilt{Elem(generator), std::move(exp)};
  }

  static void write(const std::filesystem::path& file, const std::string& key, const ResidueField& field) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    const auto tmp = file.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) return;  // the cache is optional
      const std::uint32_t key_len = static_cast<std::uint32_t>(key.size());
      const std::uint32_t generator = field.generator_.value;
      const std::uint32_t count = static_cast<std::uint32_t>(field.exp_.size());
      const std::uint64_t checksum = digest(key, generator, field.exp_);
      out.write(kMagic, 8);
      out.write(reinterpret_cast<const char*>(&kVersion), 4);
      out.write(reinterpret_cast<const char*>(&key_len), 4);
      out.write(key.data(), key_len);
      out.write(reinterpret_cast<const char*>(&generator), 4);
      out.write(reinterpret_cast<const char*>(&count), 4);
      out.write(reinterpret_cast<const char*>(field.exp_.data()), static_cast<std::streamsize>(count) * 4);
      out.write(reinterpret_cast<const char*>(&checksum), 8);
      if (!out) return;
    }
    std::filesystem::rename(tmp, file, ec);
  }

 private:
  static std::uint64_t digest(const std::string& key, std::uint32_t generator, const std::vector<std::uint32_t>& exp) {
    std::uint64_t h = fnv1a(key.data(), key.size());
    h = fnv1a(&generator, sizeof generator, h);
    return fnv1a(exp.data(), exp.size() * sizeof(std::uint32_t), h);
  }
};

// ---------------------------------------------------------------------------
// ResidueField

ResidueField::ResidueField(Fq field, Poly modulus, std::uint64_t table_budget)
    : ResidueField(std::move(field), std::move(modulus), table_budget, std::nullopt) {}

ResidueField::ResidueField(Fq field, Poly modulus, std::uint64_t table_budget, std::optional<Prebuilt> prebuilt)
    : ring_(std::move(field)), modulus_(std::move(modulus)), r_(modulus_.degree()) {
  if (r_ < 1) throw std::invalid_argument("modulus degree must be >= 1");
  if (modulus_.leading() != 1) throw std::invalid_argument("modulus must be monic");
  if (!ring_.is_irreducible(modulus_)) throw std::invalid_argument("modulus not irreducible");

  std::uint64_t n = 1;
  qpow_.push_back(1);
  for (int i = 0; i < r_; ++i) {
    n *= q();
    if (n > table_budget || n > UINT32_MAX) throw std::length_error("field too large for table mode");
    qpow_.push_back(static_cast<std::uint32_t>(n));
  }
  size_ = static_cast<std::uint32_t>(n);
  order_ = size_ - 1;

  // rho^i by repeated multiplication by X.
  rho_pow_.push_back(Elem(1));
  const Poly x = ring_.x();
  for (int i = 1; i < 2 * r_ - 1; ++i) {
    rho_pow_.push_back(from_poly(ring_.mul(to_poly(rho_pow_.back()), x)));
  }

  if (!prebuilt || !adopt_exp_table(std::move(prebuilt->exp), prebuilt->generator)) {
    build_exp_table();
  } else {
    loaded_from_cache_ = true;
  }
  build_traces();
  build_dual_basis();

  zeta_.resize(p());
  for (std::uint32_t k = 0; k < p(); ++k) {
    zeta_[k] = k == 0 ? std::complex<double>(1.0, 0.0)
                      : std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p()));
  }
}

ResidueField ResidueField::build(const FieldSpec& spec, const BuildOptions& options) {
  Fq fq(spec.p, spec.e);
  PolyRing ring(fq);
  Poly modulus;
  if (spec.modulus) {
    for (auto c : *spec.modulus) {
      if (c >= fq.q()) throw std::invalid_argument("modulus coefficient out of range for q=" + std::to_string(fq.q()));
    }
    modulus = Poly(*spec.modulus);
    if (modulus.degree() != spec.r) {
      throw std::invalid_argument("modulus degree " + std::to_string(modulus.degree()) + " does not match r=" +
                                  std::to_string(spec.r));
    }
  } else if (options.auto_modulus) {
    modulus = smallest_irreducible(ring, spec.r);
  } else {
    throw std::invalid_argument("field spec '" + spec.to_string() + "' has no modulus (use --auto-modulus)");
  }

  if (!options.cache_dir) return ResidueField(std::move(fq), std::move(modulus), options.table_budget);

  FieldSpec resolved = spec;
  resolved.modulus = modulus.coeffs();
  const std::string key = resolved.to_string();
  const auto file = TableCache::path_for(*options.cache_dir, key);

  std::uint64_t n = 1;
  for (int i = 0; i < spec.r && n <= options.table_budget; ++i) n *= fq.q();
  std::optional<Prebuilt> pre;
  if (n <= options.table_budget && n <= UINT32_MAX) pre = TableCache::read(file, key, static_cast<std::uint32_t>(n - 1));

  ResidueField field(std::move(fq), std::move(modulus), options.table_budget, std::move(pre));
  if (!field.loaded_from_cache_) TableCache::write(file, key, field);
  return field;
}

ResidueField ResidueField::build(std::string_view spec, const BuildOptions& options) {
  return build(FieldSpec::parse(spec), options);
}

std::filesystem::path ResidueField::cache_file(const std::filesystem::path& dir) const {
  return TableCache::path_for(dir, spec_string());
}

std::string ResidueField::spec_string() const {
  FieldSpec spec;
  spec.p = p();
  spec.e = base().e();
  spec.r = r_;
  spec.modulus = modulus_.coeffs();
  return spec.to_string();
}

Elem ResidueField::from_poly(const Poly& f) const {
  const Poly red = f.degree() >= r_ ? ring_.rem(f, modulus_) : f;
  std::uint32_t code = 0;
  for (int i = red.degree(); i >= 0; --i) code = code * q() + red.coeff(i);
  return Elem(code);
}

Poly ResidueField::to_poly(Elem x) const {
  std::vector<std::uint32_t> digits;
  std::uint32_t v = x.value;
  while (v > 0) {
    digits.push_back(v % q());
    v /= q();
  }
  return Poly(std::move(digits));
}

Elem ResidueField::add(Elem a, Elem b) const {
  const auto& fq = base();
  const std::uint32_t qq = q();
  std::uint32_t x = a.value;
  std::uint32_t y = b.value;
  std::uint32_t out = 0;
  for (int i = 0; (x | y) != 0; ++i) {
    out += fq.add(x % qq, y % qq) * qpow_[i];
    x /= qq;
    y /= qq;
  }
  return Elem(out);
}

Elem ResidueField::neg(Elem a) const {
  const auto& fq = base();
  const std::uint32_t qq = q();
  std::uint32_t x = a.value;
  std::uint32_t out = 0;
  for (int i = 0; x != 0; ++i) {
    out += fq.neg(x % qq) * qpow_[i];
    x /= qq;
  }
  return Elem(out);
}

Elem ResidueField::inv(Elem a) const {
  if (a.is_zero()) throw std::domain_error("zero divisor");
  const std::uint32_t l = log_[a.value];
  return Elem(exp_[l == 0 ? 0 : order_ - l]);
}

Elem ResidueField::pow(Elem a, std::uint64_t exponent) const {
  if (exponent == 0) return Elem(1);
  if (a.is_zero()) return Elem();
  // Both factors are below 2^32, so the product fits in 64 bits.
  const std::uint64_t k = std::uint64_t{log_[a.value]} * (exponent % order_);
  return Elem(exp_[k % order_]);
}

std::uint32_t ResidueField::log(Elem a) const {
  if (a.is_zero()) throw std::domain_error("log of zero");
  return log_[a.value];
}

void ResidueField::check_window(int m) const {
  if (m < 1 || m > r_) {
    throw std::out_of_range("window " + std::to_string(m) + " out of range [1, " + std::to_string(r_) + "]");
  }
}

bool ResidueField::in_window(Elem x, int m) const {
  check_window(m);
  return x.value < qpow_[m];
}

std::vector<Elem> ResidueField::window(int m) const {
  check_window(m);
  std::vector<Elem> out(qpow_[m]);
  for (std::uint32_t i = 0; i < qpow_[m]; ++i) out[i] = Elem(i);
  return out;
}

std::complex<double> ResidueField::mult_char(std::uint64_t index, Elem x) const {
  if (index >= order_ && !(order_ == 0 && index == 0)) throw std::out_of_range("character index out of range");
  if (x.is_zero()) return {};
  if (index == 0) return {1.0, 0.0};
  const std::uint64_t k = (index * log_[x.value]) % order_;
  if (k == 0) return {1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(order_));
}

int ResidueField::quadratic_char(Elem x) const {
  if (!base().odd()) throw std::domain_error("quadratic character requires odd q");
  if (x.is_zero()) return 0;
  return log_[x.value] % 2 == 0 ? 1 : -1;
}

RootSet ResidueField::square_roots(Elem a) const {
  RootSet out;
  if (a.is_zero()) {
    out.roots[0] = Elem();
    out.count = 1;
    return out;
  }
  const std::uint32_t l = log_[a.value];
  if (!base().odd()) {
    // Squaring is a bijection in characteristic 2: the root is a^{q^r / 2}.
    out.roots[0] = pow(a, size_ / 2);
    out.count = 1;
    return out;
  }
  if (l % 2 != 0) return out;
  const Elem h(exp_[l / 2]);
  const Elem minus_h = neg(h);
  out.roots[0] = std::min(h, minus_h);
  out.roots[1] = std::max(h, minus_h);
  out.count = 2;
  return out;
}

BigInt ResidueField::dual_basis_indicator(Elem u, int h) const {
  check_window(h);
  const int free = r_ - h;
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(free), 0);
  std::complex<double> sum = 0.0;
  const Elem one(1);
  for (;;) {
    Elem b;
    for (int j = 0; j < free; ++j) {
      if (digits[j] != 0) b = add(b, mul(Elem(digits[j]), dual_[h + j]));
    }
    sum += additive_char(one, mul(b, u));
    int i = 0;
    while (i < free && ++digits[i] == q()) digits[i++] = 0;
    if (i == free) break;
  }
  const double rounded = std::round(sum.real());
  if (std::abs(sum.imag()) > 1e-6 || std::abs(sum.real() - rounded) > 1e-6) {
    throw std::logic_error("window indicator character sum is not an integer");
  }
  return BigInt(static_cast<long long>(rounded));
}

Elem ResidueField::mul_reference(Elem a, Elem b) const {
  return from_poly(ring_.mul_mod(to_poly(a), to_poly(b), modulus_));
}

void ResidueField::build_exp_table() {
  // Smallest encoding whose order is exactly q^r - 1.
  const auto primes = prime_divisors(order_);
  generator_ = Elem(1);
  for (std::uint32_t c = 1; c < size_; ++c) {
    const Poly g = to_poly(Elem(c));
    bool ok = true;
    for (auto l : primes) {
      if (ring_.pow_mod(g, BigInt(order_ / l), modulus_) == ring_.one()) {
        ok = false;
        break;
      }
    }
    if (ok) {
      generator_ = Elem(c);
      break;
    }
  }

  // Walk the powers with a digit-level multiply by the (low-degree) generator.
  const auto& fq = base();
  const Poly gp = to_poly(generator_);
  const int dg = std::max(gp.degree(), 0);
  const auto& fc = modulus_.coeffs();
  std::vector<std::uint32_t> cur(static_cast<std::size_t>(r_), 0);
  std::vector<std::uint32_t> tmp(static_cast<std::size_t>(r_ + dg), 0);
  cur[0] = 1;
  exp_.assign(order_ == 0 ? 1 : order_, 0);
  log_.assign(size_, kNoLog);
  for (std::uint32_t k = 0; k < exp_.size(); ++k) {
    std::uint32_t code = 0;
    for (int i = r_; i-- > 0;) code = code * q() + cur[i];
    exp_[k] = code;
    if (log_[code] != kNoLog) throw std::logic_error("generator order check failed");
    log_[code] = k;

    std::fill(tmp.begin(), tmp.end(), 0);
    for (int i = 0; i < r_; ++i) {
      if (cur[i] == 0) continue;
      for (int j = 0; j <= dg; ++j) tmp[i + j] = fq.add(tmp[i + j], fq.mul(cur[i], gp.coeff(j)));
    }
    for (int t = r_ + dg - 1; t >= r_; --t) {
      const std::uint32_t c = tmp[t];
      if (c == 0) continue;
      tmp[t] = 0;
      for (int i = 0; i < r_; ++i) tmp[t - r_ + i] = fq.sub(tmp[t - r_ + i], fq.mul(c, fc[i]));
    }
    std::copy(tmp.begin(), tmp.begin() + r_, cur.begin());
  }
  if (order_ == 0) exp_.clear();
}

bool ResidueField::adopt_exp_table(std::vector<std::uint32_t> exp_table, Elem generator) {
  if (exp_table.size() != order_ || order_ == 0) return false;
  if (exp_table[0] != 1) return false;
  if (order_ > 1 && exp_table[1] != generator.value) return false;
  std::vector<std::uint32_t> logs(size_, kNoLog);
  for (std::uint32_t k = 0; k < order_; ++k) {
    const std::uint32_t v = exp_table[k];
    if (v == 0 || v >= size_ || logs[v] != kNoLog) return false;
    logs[v] = k;
  }
  // Spot-check the recurrence exp[k+1] = exp[k] * g against reference arithmetic.
  const std::uint32_t stride = std::max<std::uint32_t>(1, order_ / 64);
  for (std::uint32_t k = 0; k + 1 < order_; k += stride) {
    if (mul_reference(Elem(exp_table[k]), generator) != Elem(exp_table[k + 1])) return false;
  }
  if (mul_reference(Elem(exp_table[order_ - 1]), generator) != Elem(1)) return false;
  generator_ = generator;
  exp_ = std::move(exp_table);
  log_ = std::move(logs);
  return true;
}

void ResidueField::build_traces() {
  const auto& fq = base();
  // Tr(rho^i) = sum of the r conjugates rho^{i q^j}.
  std::vector<std::uint32_t> basis_trace(static_cast<std::size_t>(r_));
  for (int i = 0; i < r_; ++i) {
    Elem acc;
    Elem y = rho_pow_[i];
    for (int j = 0; j < r_; ++j) {
      acc = add(acc, y);
      y = pow(y, q());
    }
    if (acc.value >= q()) throw std::logic_error("trace left the ground field");
    basis_trace[i] = acc.value;
  }
  trace_.assign(size_, 0);
  for (std::uint32_t x = 0; x < size_; ++x) {
    std::uint32_t v = x;
    std::uint32_t t = 0;
    for (int i = 0; v != 0; ++i) {
      t = fq.add(t, fq.mul(v % q(), basis_trace[i]));
      v /= q();
    }
    trace_[x] = static_cast<std::uint16_t>(t);
  }
}

void ResidueField::build_dual_basis() {
  const auto& fq = base();
  const auto n = static_cast<std::size_t>(r_);
  // Gauss-Jordan on [T | I] with T_ij = Tr(rho^{i+j}); the dual basis
  // coordinates are the rows of T^{-1} (T is symmetric).
  std::vector<std::vector<std::uint32_t>> a(n, std::vector<std::uint32_t>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = trace(rho_pow_[i + j]);
    a[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw std::logic_error("trace form is degenerate");
    std::swap(a[piv], a[col]);
    const std::uint32_t s = fq.inv(a[col][col]);
    for (auto& v : a[col]) v = fq.mul(v, s);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const std::uint32_t f = a[row][col];
      for (std::size_t k = 0; k < 2 * n; ++k) a[row][k] = fq.sub(a[row][k], fq.mul(f, a[col][k]));
    }
  }
  dual_.clear();
  for (std::size_t j = 0; j < n; ++j) {
    std::uint32_t code = 0;
    for (std::size_t k = n; k-- > 0;) code = code * q() + a[j][n + k];
    dual_.push_back(Elem(code));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (trace(mul(rho_pow_[i], dual_[j])) != (i == j ? 1U : 0U)) {
        throw std::logic_error("dual basis relation failed");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Weight

namespace {

std::size_t window_elements(int window, std::uint32_t q) {
  if (window < 0) throw std::invalid_argument("negative window");
  std::uint64_t n = 1;
  for (int i = 0; i < window; ++i) {
    n *= q;
    if (n > (std::uint64_t{1} << 32)) throw std::length_error("weight window too large");
  }
  return static_cast<std::size_t>(n);
}

double unit_interval(std::mt19937_64& rng) {
  // 53 random bits -> [0, 1), then affine map to [-1, 1); platform independent.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

}  // namespace

Weight::Weight(int window, std::uint32_t q) : window_(window), values_(window_elements(window, q)) {}

Weight::Weight(int window, std::uint32_t q, std::vector<std::complex<double>> values)
    : window_(window), values_(std::move(values)) {
  if (values_.size() != window_elements(window, q)) throw std::invalid_argument("weight size does not match window");
}

Weight Weight::indicator(int window, std::uint32_t q) {
  Weight w(window, q);
  for (auto& v : w.values_) v = 1.0;
  return w;
}

Weight Weight::random(int window, std::uint32_t q, std::uint64_t seed) {
  Weight w(window, q);
  std::mt19937_64 rng(seed);
  for (auto& v : w.values_) {
    const double re = unit_interval(rng);
    const double im = unit_interval(rng);
    v = {re, im};
  }
  return w;
}

Weight Weight::delta(int window, std::uint32_t q, Elem at, std::complex<double> value) {
  Weight w(window, q);
  w.set(at, value);
  return w;
}

Weight Weight::load(const std::filesystem::path& path, int window, std::uint32_t q) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weight file " + path.string());
  Weight w(window, q);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string key, re, im;
    std::getline(fields, key, ',');
    std::getline(fields, re, ',');
    std::getline(fields, im, ',');
    try {
      const auto k = std::stoul(key);
      const double vr = std::stod(re);
      const double vi = im.empty() ? 0.0 : std::stod(im);
      if (k >= w.size()) throw std::out_of_range("key outside window");
      w.values_[k] = {vr, vi};
    } catch (const std::exception& ex) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return w;
}

void Weight::set(Elem x, std::complex<double> v) {
  if (x.value >= values_.size()) throw std::out_of_range("weight key outside window");
  values_[x.value] = v;
}

double Weight::norm1() const {
  double s = 0;
  for (const auto& v : values_) s += std::abs(v);
  return s;
}

double Weight::norm2() const {
  double s = 0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s);
}

double Weight::norm_inf() const {
  double s = 0;
  for (const auto& v : values_) s = std::max(s, std::abs(v));
  return s;
}

bool Weight::is_indicator() const {
  for (const auto& v : values_)
    if (v != std::complex<double>(1.0, 0.0)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Histogram

BigInt Histogram::total() const {
  BigInt out = 0;
  for (auto c : counts_) {
    if (c != 0) out += c;
  }
  return out;
}

BigInt Histogram::sum_of_squares() const {
  BigInt out = 0;
  for (auto c : counts_) {
    if (c != 0) out += BigInt(c) * c;
  }
  return out;
}

void Histogram::merge(const Histogram& other) {
  if (other.size() != size()) throw std::invalid_argument("histogram size mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::string BudgetExceeded::format_count(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f", v);
  return buf;
}

}  // namespace ffenergy
