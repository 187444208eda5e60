#pragma once

// Scalar types used throughout lamkit: exact rationals (GMP backed), exact
// elements of a real quadratic field Q(sqrt D), and plain doubles for
// exploratory runs.

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lamkit {

// Expression templates are disabled so that `auto` and ternaries behave like
// ordinary value types.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Comparison tolerance applied when the scalar type is double.
struct FloatTolerance {
  static inline double value = 1e-12;
};

inline Rational parse_rational(std::string_view token) {
  if (token.empty()) throw ParseError("empty rational token");
  std::size_t start = (token[0] == '-' || token[0] == '+') ? 1 : 0;
  bool slash = false;
  bool digits = false;
  for (std::size_t i = start; i < token.size(); ++i) {
    char c = token[i];
    if (c == '/') {
      if (slash || !digits) throw ParseError("malformed rational '" + std::string(token) + "'");
      slash = true;
      digits = false;
    } else if (c >= '0' && c <= '9') {
      digits = true;
    } else {
      throw ParseError("malformed rational '" + std::string(token) + "'");
    }
  }
  if (!digits) throw ParseError("malformed rational '" + std::string(token) + "'");
  if (slash && token.substr(token.find('/') + 1).find_first_not_of('0') == std::string_view::npos)
    throw ParseError("zero denominator");
  std::string s(token[0] == '+' ? token.substr(1) : token);
  Rational q;
  try {
    q = Rational(s);
  } catch (const std::exception&) {
    throw ParseError("malformed rational '" + std::string(token) + "'");
  }
  return q;
}

/// Always "p/q", including integers ("3/1"), so logs are uniform.
inline std::string format_rational(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

/// a + b*sqrt(D) with rational a, b. D must be a positive non-square.
template <int D>
class QuadraticSurd {
  static_assert(D > 1, "radicand must exceed one");

 public:
  QuadraticSurd() = default;
  QuadraticSurd(int a) : a_(a) {}  // NOLINT: implicit from integer literals
  QuadraticSurd(Rational a) : a_(std::move(a)) {}  // NOLINT
  QuadraticSurd(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

  static constexpr int radicand = D;

  const Rational& rational_part() const { return a_; }
  const Rational& surd_part() const { return b_; }

  friend QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y) {
    return {x.a_ + y.a_, x.b_ + y.b_};
  }
  friend QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y) {
    return {x.a_ - y.a_, x.b_ - y.b_};
  }
  friend QuadraticSurd operator-(const QuadraticSurd& x) { return {-x.a_, -x.b_}; }
  friend QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y) {
    return {x.a_ * y.a_ + D * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_};
  }
  QuadraticSurd conjugate() const { return {a_, -b_}; }
  Rational norm() const { return a_ * a_ - D * b_ * b_; }
  friend QuadraticSurd operator/(const QuadraticSurd& x, const QuadraticSurd& y) {
    Rational n = y.norm();
    if (n == 0) throw std::domain_error("division by zero in quadratic field");
    QuadraticSurd num = x * y.conjugate();
    return {num.a_ / n, num.b_ / n};
  }
  QuadraticSurd& operator+=(const QuadraticSurd& y) { return *this = *this + y; }
  QuadraticSurd& operator-=(const QuadraticSurd& y) { return *this = *this - y; }
  QuadraticSurd& operator*=(const QuadraticSurd& y) { return *this = *this * y; }
  QuadraticSurd& operator/=(const QuadraticSurd& y) { return *this = *this / y; }

  int sign() const {
    int sa = a_.sign();
    int sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 with D b^2.
    Rational lhs = a_ * a_;
    int cmp = lhs.compare(Rational(D) * b_ * b_);
    return cmp > 0 ? sa : (cmp < 0 ? sb : 0);
  }

  friend bool operator==(const QuadraticSurd& x, const QuadraticSurd& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend std::strong_ordering operator<=>(const QuadraticSurd& x, const QuadraticSurd& y) {
    int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  double to_double() const {
    return a_.convert_to<double>() + b_.convert_to<double>() * std::sqrt(static_cast<double>(D));
  }

  friend std::ostream& operator<<(std::ostream& os, const QuadraticSurd& x) {
    return os << format_rational(x.a_) << ":" << format_rational(x.b_) << "@" << D;
  }

 private:
  Rational a_{0};
  Rational b_{0};
};

using GoldenField = QuadraticSurd<5>;

// ---------------------------------------------------------------------------
// Uniform scalar interface.

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static int sign(const Rational& x) { return x.sign(); }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static std::string format(const Rational& x) { return format_rational(x); }
  static Rational parse(std::string_view s) { return parse_rational(s); }
};

template <int D>
struct ScalarTraits<QuadraticSurd<D>> {
  static constexpr bool exact = true;
  static int sign(const QuadraticSurd<D>& x) { return x.sign(); }
  static double to_double(const QuadraticSurd<D>& x) { return x.to_double(); }
  static std::string format(const QuadraticSurd<D>& x) {
    if (x.surd_part() == 0) return format_rational(x.rational_part());
    return format_rational(x.rational_part()) + ":" + format_rational(x.surd_part()) + "@" +
           std::to_string(D);
  }
  /// Accepts "p/q" or "p/q:r/s@D".
  static QuadraticSurd<D> parse(std::string_view s) {
    auto colon = s.find(':');
    if (colon == std::string_view::npos) return QuadraticSurd<D>(parse_rational(s));
    auto at = s.find('@', colon);
    if (at == std::string_view::npos) throw ParseError("quadratic token lacks radicand");
    if (s.substr(at + 1) != std::to_string(D)) throw ParseError("quadratic token radicand mismatch");
    return {parse_rational(s.substr(0, colon)), parse_rational(s.substr(colon + 1, at - colon - 1))};
  }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static int sign(double x) {
    if (std::abs(x) <= FloatTolerance::value) return 0;
    return x > 0 ? 1 : -1;
  }
  static double to_double(double x) { return x; }
  static std::string format(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }
  static double parse(std::string_view s) {
    std::string str(s);
    std::size_t pos = 0;
    double v = 0;
    try {
      auto slash = str.find('/');
      if (slash != std::string::npos) {
        v = parse_rational(str).convert_to<double>();
        pos = str.size();
      } else {
        v = std::stod(str, &pos);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("malformed number '" + str + "'");
    }
    if (pos != str.size()) throw ParseError("malformed number '" + str + "'");
    return v;
  }
};

template <class T>
int sign_of(const T& x) {
  return ScalarTraits<T>::sign(x);
}

template <class T>
bool is_zero(const T& x) {
  return sign_of(x) == 0;
}

template <class T>
double to_double(const T& x) {
  return ScalarTraits<T>::to_double(x);
}

template <class T>
std::string format_scalar(const T& x) {
  return ScalarTraits<T>::format(x);
}

inline Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

}  // namespace lamkit
