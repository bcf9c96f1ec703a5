#include "xoslab/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace xoslab {

std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace {

boost::multiprecision::cpp_int parse_integer(const std::string& s, const std::string& whole) {
  if (s.empty()) throw std::invalid_argument("malformed rational: '" + whole + "'");
  std::size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') pos = 1;
  if (pos == s.size()) throw std::invalid_argument("malformed rational: '" + whole + "'");
  for (std::size_t i = pos; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      throw std::invalid_argument("malformed rational: '" + whole + "'");
    }
  }
  return boost::multiprecision::cpp_int(s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const auto num = parse_integer(text.substr(0, slash), text);
    const auto den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("rational with zero denominator: '" + text + "'");
    return Rational(num, den);
  }
  if (const auto dot = text.find('.'); dot != std::string::npos) {
    const std::string int_part = text.substr(0, dot);
    const std::string frac_part = text.substr(dot + 1);
    const bool negative = !int_part.empty() && int_part[0] == '-';
    const std::string digits =
        (int_part.empty() || int_part == "-" || int_part == "+" ? std::string("0")
                                                                 : int_part) +
        frac_part;
    auto num = parse_integer(negative && digits[0] != '-' ? "-" + digits : digits, text);
    boost::multiprecision::cpp_int den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    return Rational(num, den);
  }
  return Rational(parse_integer(text, text));
}

}  // namespace xoslab
