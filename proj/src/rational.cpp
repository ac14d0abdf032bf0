#include "hblock/rational.hpp"

#include <cctype>
#include <numeric>
#include <stdexcept>

namespace hblock {

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational r(Integer(std::to_string(num)), Integer(std::to_string(den)));
  r.canonicalize();
  return r;
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace {

bool valid_integer_text(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Integer parse_integer(std::string s) {
  if (!valid_integer_text(s)) throw std::invalid_argument("not an integer: '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = trim(text);
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(s));
  Integer num = parse_integer(trim(s.substr(0, slash)));
  Integer den = parse_integer(trim(s.substr(slash + 1)));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  std::int64_t g = std::gcd(a, b);
  std::int64_t out;
  if (__builtin_mul_overflow(std::abs(a) / g, std::abs(b), &out)) throw std::overflow_error("lcm overflow");
  return out;
}

std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits: " + z.get_str());
  return z.get_si();
}

}  // namespace hblock
