#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "tvk/error.hpp"

namespace tvk {

/// Arbitrary-precision rational scalar. Invariant: canonical form (denominator > 0,
/// gcd(numerator, denominator) = 1) after every construction and operation, so
/// equality is plain field-wise comparison. All arithmetic is exact.
class Rat {
public:
  Rat() : v_(0) {}
  Rat(int n) : v_(n) {}
  Rat(long n) : v_(static_cast<signed long>(n)) {}
  Rat(long long n) { v_ = make_mpz(n); }

  Rat(long long num, long long den) {
    require(den != 0, ErrorKind::input, "Rat: zero denominator");
    v_ = mpq_class(make_mpz(num), make_mpz(den));
    v_.canonicalize();
  }

  Rat(const mpz_class& num, const mpz_class& den) {
    require(den != 0, ErrorKind::input, "Rat: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "p", "-p", or "p/q" with q > 0 after canonicalization. Returns nothing
  /// on any malformed input (including "1/0").
  static std::optional<Rat> parse(std::string_view s);

  /// Parsing that throws ErrorKind::parse instead.
  static Rat parse_or_throw(std::string_view s, const std::string& where = "");

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  int sgn() const { return ::sgn(v_); }
  bool is_zero() const { return sgn() == 0; }
  Rat abs() const { return Rat(::abs(v_)); }

  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_str();
  }

  /// Nearest double; presentation only, excluded from all correctness claims.
  double to_double() const { return v_.get_d(); }

  static Rat pow2(long e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e >= 0 ? e : -e));
    return e >= 0 ? Rat(p, 1) : Rat(1, p);
  }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    require(!o.is_zero(), ErrorKind::input, "Rat: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
  friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
  friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
  friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.v_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) < 0; }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

private:
  static mpz_class make_mpz(long long n) {
    if (n >= 0) {
      mpz_class z;
      mpz_import(z.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
      return z;
    }
    unsigned long long m = static_cast<unsigned long long>(-(n + 1)) + 1ull;
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(m), 0, 0, &m);
    return -z;
  }

  mpq_class v_;
};

inline std::optional<Rat> Rat::parse(std::string_view s) {
  if (s.empty()) return std::nullopt;
  auto digits = [](std::string_view t) {
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string_view num = s, den;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
    if (!digits(den)) return std::nullopt;
  }
  bool neg = false;
  if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
    neg = num.front() == '-';
    num.remove_prefix(1);
  }
  if (!digits(num)) return std::nullopt;
  mpz_class n(std::string(num), 10);
  if (neg) n = -n;
  if (den.empty()) return Rat(n, 1);
  mpz_class d(std::string(den), 10);
  if (d == 0) return std::nullopt;
  return Rat(n, d);
}

inline Rat Rat::parse_or_throw(std::string_view s, const std::string& where) {
  auto r = parse(s);
  if (!r) fail(ErrorKind::parse, "bad rational '" + std::string(s) + "'" + (where.empty() ? "" : " at " + where));
  return *r;
}

} // namespace tvk
