#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

#include "parity_forge/errors.hpp"

namespace pf {

// Exact rational arithmetic. Thin layer over GMP so the backend stays swappable
// and so canonical serialization ("num/den", denominator always present) lives
// in one place.
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}  // NOLINT: implicit by design, literals read naturally
  Rat(long num, long den) : v_(num, den) {
    if (den == 0) throw InputError("rational with zero denominator");
    v_.canonicalize();
  }

  // Accepts "a/b", integers, and exact decimals ("0.25"); optional sign.
  static Rat parse(const std::string& s);
  static std::optional<Rat> try_parse(const std::string& s) noexcept;

  std::string str() const {
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }
  double to_double() const { return v_.get_d(); }

  static Rat pow2(long k) {
    Rat r;
    if (k >= 0) {
      mpz_class n;
      mpz_ui_pow_ui(n.get_mpz_t(), 2, static_cast<unsigned long>(k));
      r.v_ = n;
    } else {
      mpz_class d;
      mpz_ui_pow_ui(d.get_mpz_t(), 2, static_cast<unsigned long>(-k));
      r.v_ = mpq_class(1) / mpq_class(d);
    }
    return r;
  }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(a.v_ + b.v_); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(a.v_ - b.v_); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(a.v_ * b.v_); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (sgn(b.v_) == 0) throw InputError("rational division by zero");
    return Rat(a.v_ / b.v_);
  }
  Rat operator-() const { return Rat(-v_); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  const mpq_class& raw() const { return v_; }

 private:
  explicit Rat(mpq_class v) : v_(std::move(v)) {}
  mpq_class v_;
};

inline Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }
inline Rat abs(const Rat& a) { return a.sign() < 0 ? -a : a; }

}  // namespace pf
