// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ddm {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Parses "p/q", "p" or a finite decimal such as "0.25" into an exact rational.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" for integers).
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Shortest decimal text that reads back to the same double ("0.1", not "0.10000000000000001").
inline std::string shortest_text(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// A real value that may additionally be known exactly.
struct Scalar {
  std::optional<Rational> exact;
  double approx = 0.0;

  static Scalar from_exact(const Rational& r) { return Scalar{r, to_double(r)}; }
  static Scalar from_double(double x) { return Scalar{std::nullopt, x}; }
  bool is_exact() const { return exact.has_value(); }
};

/// Extended reals with symbolic infinities; ordering puts -inf < finite < +inf.
class ExtReal {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  constexpr ExtReal() = default;
  constexpr explicit ExtReal(double v) : kind_(Kind::Finite), value_(v) {}
  static constexpr ExtReal pos_inf() { return ExtReal(Kind::PosInf); }
  static constexpr ExtReal neg_inf() { return ExtReal(Kind::NegInf); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::Finite; }
  double value() const {
    if (kind_ != Kind::Finite) throw std::domain_error("ExtReal: value of an infinity");
    return value_;
  }
  double to_double() const {
    switch (kind_) {
      case Kind::NegInf: return -std::numeric_limits<double>::infinity();
      case Kind::PosInf: return std::numeric_limits<double>::infinity();
      default: return value_;
    }
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.kind_ != Kind::Finite && b.kind_ != Kind::Finite && a.kind_ != b.kind_)
      throw std::domain_error("ExtReal: +inf + -inf is undefined");
    if (a.kind_ != Kind::Finite) return a;
    if (b.kind_ != Kind::Finite) return b;
    return ExtReal(a.value_ + b.value_);
  }
  friend bool operator<(ExtReal a, ExtReal b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
    return a.kind_ == Kind::Finite && a.value_ < b.value_;
  }
  friend bool operator<=(ExtReal a, ExtReal b) { return !(b < a); }
  friend bool operator==(ExtReal a, ExtReal b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
  }

 private:
  constexpr explicit ExtReal(Kind k) : kind_(k) {}
  Kind kind_ = Kind::Finite;
  double value_ = 0.0;
};

/// log with log(0) := -inf.
inline ExtReal ext_log(double x) {
  if (x < 0) throw std::domain_error("ext_log: negative argument");
  if (x == 0) return ExtReal::neg_inf();
  return ExtReal(std::log(x));
}

/// exp with exp(-inf) := 0.
inline double ext_exp(ExtReal x) {
  if (x.kind() == ExtReal::Kind::NegInf) return 0.0;
  if (x.kind() == ExtReal::Kind::PosInf) return std::numeric_limits<double>::infinity();
  return std::exp(x.value());
}

}  // namespace ddm
