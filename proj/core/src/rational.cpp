#include "zakharov/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

#include "zakharov/errors.hpp"

namespace zakharov {

namespace {

__extension__ typedef __int128 i128;

Rational from_wide(i128 num, i128 den) {
  if (den == 0) throw InvalidArgument("rational: division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num, b = den;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr i128 lim = std::numeric_limits<std::int64_t>::max();
  if (num > lim || num < -lim || den > lim) throw InvalidArgument("rational: overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidArgument("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational Rational::parse(const std::string& text) {
  const auto bad = [&text]() { return InvalidArgument("not a rational number: '" + text + "'"); };
  if (text.empty()) throw bad();
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const Rational a = parse(text.substr(0, slash));
    const Rational b = parse(text.substr(slash + 1));
    if (b.num() == 0) throw bad();
    return a / b;
  }
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  i128 num = 0, den = 1;
  bool digits = false, point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !point) {
      point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
    digits = true;
    num = num * 10 + (c - '0');
    if (point) den *= 10;
    if (num > (i128(1) << 62) || den > (i128(1) << 62)) throw bad();
  }
  if (!digits) throw bad();
  return from_wide(negative ? -num : num, den);
}

Rational Rational::from_double(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("rational: non-finite value");
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  auto m = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  while (exponent < 0 && m % 2 == 0) {
    m /= 2;
    ++exponent;
  }
  if (exponent >= 0) {
    if (exponent > 9) throw InvalidArgument("rational: value too large");
    return Rational(m * (std::int64_t(1) << exponent));
  }
  if (exponent < -62) throw InvalidArgument("rational: value needs too fine a denominator");
  return Rational(m, std::int64_t(1) << (-exponent));
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return from_wide(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return from_wide(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return from_wide(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw InvalidArgument("rational: division by zero");
  return from_wide(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const i128 lhs = i128(a.num_) * b.den_, rhs = i128(b.num_) * a.den_;
  return lhs <=> rhs;
}

Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

}  // namespace zakharov
