#include "tractorkit/rational.hpp"

#include <cctype>
#include <ostream>

#include "tractorkit/error.hpp"

namespace tk {

Rational::Rational(long num, long den) {
  if (den == 0) throw EvaluationSingularity("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw ParseError("empty rational literal");

  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    pos = 1;
  }
  const std::string body = s.substr(pos);
  auto all_digits = [](const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };

  mpq_class value;
  if (const auto slash = body.find('/'); slash != std::string::npos) {
    const std::string num = body.substr(0, slash);
    const std::string den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw ParseError("malformed rational literal '" + s + "'");
    mpz_class d(den, 10);
    if (d == 0) throw EvaluationSingularity("rational literal with zero denominator '" + s + "'");
    value = mpq_class(mpz_class(num, 10), d);
  } else if (const auto dot = body.find('.'); dot != std::string::npos) {
    const std::string ip = body.substr(0, dot);
    const std::string fp = body.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty()))
      throw ParseError("malformed decimal literal '" + s + "'");
    mpz_class scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    const mpz_class digits((ip.empty() ? std::string("0") : ip) + fp, 10);
    value = mpq_class(digits, scale);
  } else {
    if (!all_digits(body)) throw ParseError("malformed rational literal '" + s + "'");
    value = mpq_class(mpz_class(body, 10));
  }
  value.canonicalize();
  if (negative) value = -value;
  return Rational(value);
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(v_))); }

Rational Rational::reciprocal() const {
  if (is_zero()) throw EvaluationSingularity("reciprocal of zero");
  return Rational(mpq_class(1 / v_));
}

std::string Rational::to_string() const {
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw EvaluationSingularity("division by zero");
  v_ /= o.v_;
  return *this;
}

void Rational::add_product(const Rational& a, const Rational& b) {
  thread_local mpq_class scratch;
  mpq_mul(scratch.get_mpq_t(), a.v_.get_mpq_t(), b.v_.get_mpq_t());
  mpq_add(v_.get_mpq_t(), v_.get_mpq_t(), scratch.get_mpq_t());
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

Rational pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  Rational b = base;
  while (exponent) {
    if (exponent & 1u) result *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return result;
}

Rational factorial(unsigned n) {
  mpz_class f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return Rational(mpq_class(f));
}

}  // namespace tk
