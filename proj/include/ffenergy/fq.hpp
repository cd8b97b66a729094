#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ffenergy {

/// The ground field F_q, q = p^e, realised as F_p[Y]/(base_modulus).
///
/// Elements are integers in [0, q): the base-p digits of an element are its
/// coordinates on 1, Y, ..., Y^{e-1}, lowest digit first. For e = 1 this is
/// the usual representation {0, ..., p-1}. All arithmetic goes through
/// q x q lookup tables, so q is capped at kMaxFieldSize.
///
/// Copies are cheap: the tables are shared and immutable.
class Fq {
 public:
  using Element = std::uint32_t;

  static constexpr std::uint32_t kMaxFieldSize = 1024;

  /// Builds F_{p^e} with the smallest-encoding monic irreducible of degree e
  /// over F_p as base modulus.
  Fq(std::uint32_t p, std::uint32_t e = 1);

  /// Builds F_{p^e} from an explicit base modulus (coefficients over F_p,
  /// lowest degree first, monic of degree e). The modulus is checked for
  /// irreducibility.
  Fq(std::uint32_t p, std::uint32_t e, std::vector<std::uint32_t> base_modulus);

  std::uint32_t p() const { return p_; }
  std::uint32_t e() const { return e_; }
  std::uint32_t q() const { return q_; }
  const std::vector<std::uint32_t>& base_modulus() const { return base_modulus_; }
  bool odd() const { return p_ != 2; }

  Element add(Element a, Element b) const { return tables_->add[a * q_ + b]; }
  Element sub(Element a, Element b) const { return add(a, tables_->neg[b]); }
  Element neg(Element a) const { return tables_->neg[a]; }
  Element mul(Element a, Element b) const { return tables_->mul[a * q_ + b]; }
  /// Throws std::domain_error("zero divisor") for a = 0.
  Element inv(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  Element pow(Element a, std::uint64_t exponent) const;

  /// Tr_{F_q/F_p}(a) as an integer in [0, p).
  std::uint32_t trace_to_prime(Element a) const { return tables_->trace[a]; }

  /// The unique b with b^p = a.
  Element pth_root(Element a) const { return tables_->pth_root[a]; }

  bool operator==(const Fq& other) const {
    return p_ == other.p_ && e_ == other.e_ && base_modulus_ == other.base_modulus_;
  }

  /// "p^e", e.g. "3^1".
  std::string to_string() const;

 private:
  struct Tables {
    std::vector<std::uint16_t> add;
    std::vector<std::uint16_t> mul;
    std::vector<std::uint16_t> neg;
    std::vector<std::uint16_t> inv;
    std::vector<std::uint16_t> trace;
    std::vector<std::uint16_t> pth_root;
  };

  void build_tables();

  std::uint32_t p_;
  std::uint32_t e_;
  std::uint32_t q_;
  std::vector<std::uint32_t> base_modulus_;
  std::shared_ptr<const Tables> tables_;
};

bool is_prime(std::uint64_t n);

/// Distinct prime divisors of n in increasing order.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

/// Classical Moebius function.
int mobius(std::uint64_t n);

}  // namespace ffenergy
