#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace confpred {

// exact rational on int64, always normalized: gcd(num, den) = 1, den > 0
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
    normalize();
  }
  // NOLINTNEXTLINE: implicit from integer is intended
  Rational(std::int64_t num) : num_(num), den_(1) {}

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    std::int64_t g = std::gcd(a.den_, b.den_);
    return Rational(a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g), (a.den_ / g) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return a + Rational(-b.num_, b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    std::int64_t g1 = std::gcd(std::abs(a.num_), b.den_);
    std::int64_t g2 = std::gcd(std::abs(b.num_), a.den_);
    return Rational((a.num_ / g1) * (b.num_ / g2), (a.den_ / g2) * (b.den_ / g1));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
    return a * Rational(b.den_, b.num_);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(std::abs(num_), den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_;
  std::int64_t den_;
};

// conformal p-value kept unreduced: count of qualifying scores over bag size
struct PValue {
  long long count = 0;
  long long total = 1;

  double value() const { return static_cast<double>(count) / static_cast<double>(total); }
  std::string fraction() const { return std::to_string(count) + "/" + std::to_string(total); }
  Rational exact() const { return Rational(count, total); }
  // region membership rule: include iff p > epsilon
  bool exceeds(double epsilon) const {
    return static_cast<double>(count) > epsilon * static_cast<double>(total);
  }
};

}  // namespace confpred
