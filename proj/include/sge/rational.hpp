#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sge {

/// Reduced fraction with a positive denominator. Arithmetic is carried out in
/// 128-bit intermediates and throws std::overflow_error if the reduced result
/// does not fit back into 64 bits.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    assign(static_cast<__int128>(num), static_cast<__int128>(den));
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }

  Rational& operator+=(const Rational& o) {
    const __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
    const __int128 d = static_cast<__int128>(den_) * o.den_;
    assign(n, d);
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    assign(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 l = static_cast<__int128>(a.num_) * b.den_;
    const __int128 r = static_cast<__int128>(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// `num/den`, or just `num` when the denominator is 1.
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const __int128 r = a % b;
      a = b;
      b = r;
    }
    return a;
  }

  void assign(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX) {
      throw std::overflow_error("rational overflow");
    }
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace sge
