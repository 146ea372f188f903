#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace jpegqf {

// Exact fraction with a positive denominator, always kept in lowest terms.
// Magnitudes in this library stay below 2^24, so cross-multiplication in
// 64-bit integers cannot overflow.
class Rational {
public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
  constexpr Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  // Largest integer not greater than the value.
  constexpr std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }
  // Smallest integer not less than the value.
  constexpr std::int64_t ceil() const { return -Rational(-num_, den_).floor(); }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend constexpr bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend constexpr auto operator<=>(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    os << r.num_;
    if (r.den_ != 1) os << '/' << r.den_;
    return os;
  }

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace jpegqf
