#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ffenergy/bigint.hpp"
#include "ffenergy/fq.hpp"
#include "ffenergy/poly.hpp"

namespace ffenergy {

/// An element of F_q[X]/F(X). The encoding is sum u_i q^i over the
/// coordinates u_i of u_0 + u_1 rho + ... + u_{r-1} rho^{r-1}, so the degree
/// window {f : deg f < m} is exactly the encodings below q^m.
struct Elem {
  std::uint32_t value = 0;

  constexpr Elem() = default;
  constexpr explicit Elem(std::uint32_t v) : value(v) {}
  constexpr bool is_zero() const { return value == 0; }
  constexpr auto operator<=>(const Elem&) const = default;
};

/// The (at most two) square roots of an element.
struct RootSet {
  std::array<Elem, 2> roots{};
  int count = 0;

  std::span<const Elem> view() const { return {roots.data(), static_cast<std::size_t>(count)}; }
  bool contains(Elem x) const {
    for (int i = 0; i < count; ++i)
      if (roots[i] == x) return true;
    return false;
  }
};

/// Parsed field description "p^e^r:c0,c1,...,cr". The modulus is absent for
/// the short form "p^e^r", which requires automatic modulus selection.
struct FieldSpec {
  std::uint32_t p = 3;
  std::uint32_t e = 1;
  int r = 1;
  std::optional<std::vector<std::uint32_t>> modulus;

  static FieldSpec parse(std::string_view text);
  std::string to_string() const;
};

struct BuildOptions {
  static constexpr std::uint64_t kDefaultTableBudget = std::uint64_t{1} << 24;

  std::uint64_t table_budget = kDefaultTableBudget;
  /// Pick the smallest-encoding monic irreducible when the spec has no modulus.
  bool auto_modulus = false;
  /// When set, log tables are read from / written to this directory.
  std::optional<std::filesystem::path> cache_dir;
};

/// Immutable context for F_q[X]/F(X) = F_{q^r}: element arithmetic through
/// discrete-log tables, traces, the dual basis of 1, rho, ..., rho^{r-1},
/// additive and multiplicative characters, square roots and degree windows.
///
/// All member functions are const and safe to call concurrently.
class ResidueField {
 public:
  ResidueField(Fq field, Poly modulus, std::uint64_t table_budget = BuildOptions::kDefaultTableBudget);

  /// Builds from a spec string; honours the table cache when configured.
  static ResidueField build(const FieldSpec& spec, const BuildOptions& options = {});
  static ResidueField build(std::string_view spec, const BuildOptions& options = {});

  const Fq& base() const { return ring_.field(); }
  const PolyRing& ring() const { return ring_; }
  const Poly& modulus() const { return modulus_; }
  int degree() const { return r_; }
  std::uint32_t q() const { return base().q(); }
  std::uint32_t p() const { return base().p(); }
  /// q^r
  std::uint32_t size() const { return size_; }
  /// q^m for 0 <= m <= r
  std::uint32_t window_size(int m) const { return qpow_.at(static_cast<std::size_t>(m)); }
  Elem generator() const { return generator_; }
  std::string spec_string() const;
  /// True when the log tables came from a valid cache file.
  bool loaded_from_cache() const { return loaded_from_cache_; }
  /// Location of this field's table blob inside a cache directory.
  std::filesystem::path cache_file(const std::filesystem::path& dir) const;

  Elem from_poly(const Poly& f) const;
  Poly to_poly(Elem x) const;
  /// Embeds an F_q element as a constant.
  Elem constant(std::uint32_t c) const { return Elem(c); }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const {
    if (a.is_zero() || b.is_zero()) return Elem();
    std::uint64_t k = std::uint64_t{log_[a.value]} + log_[b.value];
    if (k >= order_) k -= order_;
    return Elem(exp_[k]);
  }
  /// Throws std::domain_error("zero divisor") for 0.
  Elem inv(Elem a) const;
  Elem pow(Elem a, std::uint64_t exponent) const;
  /// Discrete log base generator(); throws for 0.
  std::uint32_t log(Elem a) const;
  Elem exp(std::uint64_t k) const { return Elem(exp_[k % order_]); }

  /// f ~ m: the canonical representative has degree < m. Requires 1 <= m <= r.
  bool in_window(Elem x, int m) const;
  std::vector<Elem> window(int m) const;
  void check_window(int m) const;

  /// Tr_{F_{q^r}/F_q}(x) as an F_q element.
  std::uint32_t trace(Elem x) const { return trace_[x.value]; }
  /// Tr_{F_{q^r}/F_p}(x) as an integer in [0, p).
  std::uint32_t absolute_trace(Elem x) const { return base().trace_to_prime(trace_[x.value]); }

  /// psi_c(x) = exp(2 pi i Tr_{F_{q^r}/F_p}(c x) / p).
  std::complex<double> additive_char(Elem c, Elem x) const { return zeta_[absolute_trace(mul(c, x))]; }
  /// Unit root exp(2 pi i k / p).
  std::complex<double> prime_root_of_unity(std::uint32_t k) const { return zeta_[k % p()]; }

  /// chi_index(x) = exp(2 pi i index log(x) / (q^r - 1)); 0 at x = 0.
  std::complex<double> mult_char(std::uint64_t index, Elem x) const;
  /// Legendre symbol of F_{q^r}: 0 at 0, otherwise +-1. Requires odd q.
  int quadratic_char(Elem x) const;

  RootSet square_roots(Elem a) const;

  /// rho^i for 0 <= i < 2r - 1.
  Elem rho_power(int i) const { return rho_pow_.at(static_cast<std::size_t>(i)); }
  /// omega_0, ..., omega_{r-1} with Tr(rho^i omega_j) = delta_ij.
  const std::vector<Elem>& dual_basis() const { return dual_; }

  /// sum_{b in span(omega_h..omega_{r-1})} psi(b u), psi = canonical character,
  /// rounded to an integer: q^{r-h} if u ~ h and 0 otherwise.
  BigInt dual_basis_indicator(Elem u, int h) const;

  /// Digit-level multiply without tables (used while building them, and by tests).
  Elem mul_reference(Elem a, Elem b) const;

 private:
  friend class TableCache;
  struct Prebuilt {
    Elem generator;
    std::vector<std::uint32_t> exp;
  };
  ResidueField(Fq field, Poly modulus, std::uint64_t table_budget, std::optional<Prebuilt> prebuilt);

  void build_exp_table();
  bool adopt_exp_table(std::vector<std::uint32_t> exp_table, Elem generator);
  void build_traces();
  void build_dual_basis();

  PolyRing ring_;
  Poly modulus_;
  int r_;
  std::uint32_t size_;
  std::uint32_t order_;  // q^r - 1
  std::vector<std::uint32_t> qpow_;
  Elem generator_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint16_t> trace_;
  std::vector<Elem> rho_pow_;
  std::vector<Elem> dual_;
  std::vector<std::complex<double>> zeta_;
  bool loaded_from_cache_ = false;
};

/// Complex weights on a degree window: values[k] is the weight of the element
/// with encoding k, for every k < q^m.
class Weight {
 public:
  Weight(int window, std::uint32_t q);
  Weight(int window, std::uint32_t q, std::vector<std::complex<double>> values);

  /// Characteristic function 1_m of the window.
  static Weight indicator(int window, std::uint32_t q);
  /// Re and Im independent, uniform on [-1, 1], drawn from mt19937_64(seed).
  static Weight random(int window, std::uint32_t q, std::uint64_t seed);
  /// Point mass at one window element.
  static Weight delta(int window, std::uint32_t q, Elem at, std::complex<double> value = 1.0);
  /// Lines "encoding,re[,im]"; blank lines and '#' comments ignored.
  static Weight load(const std::filesystem::path& path, int window, std::uint32_t q);

  int window() const { return window_; }
  std::size_t size() const { return values_.size(); }
  /// Zero outside the window.
  std::complex<double> at(Elem x) const {
    return x.value < values_.size() ? values_[x.value] : std::complex<double>{};
  }
  void set(Elem x, std::complex<double> v);
  std::span<const std::complex<double>> values() const { return values_; }

  double norm1() const;
  double norm2() const;
  double norm_inf() const;
  bool is_indicator() const;

 private:
  int window_;
  std::vector<std::complex<double>> values_;
};

/// Exact counting table keyed by element encoding.
class Histogram {
 public:
  explicit Histogram(std::uint32_t size) : counts_(size, 0) {}

  void add(Elem key, std::uint64_t n = 1) { counts_[key.value] += n; }
  std::uint64_t operator[](Elem key) const { return counts_[key.value]; }
  BigInt count(Elem key) const { return BigInt(counts_[key.value]); }
  std::size_t size() const { return counts_.size(); }
  BigInt total() const;
  BigInt sum_of_squares() const;
  void merge(const Histogram& other);

 private:
  std::vector<std::uint64_t> counts_;
};

/// Thrown when a computation would exceed a configured enumeration budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double required, double budget)
      : std::runtime_error(what + " (required " + format_count(required) + ", budget " + format_count(budget) + ")"),
        required_(required) {}
  double required() const { return required_; }

 private:
  static std::string format_count(double v);
  double required_;
};

}  // namespace ffenergy
