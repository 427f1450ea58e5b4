#include "facmech/rational.hpp"

#include <cctype>
#include <sstream>

namespace facmech {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::optional<Rat> parse_rational(const std::string& text) {
  std::string s = text;
  if (s.empty()) return std::nullopt;

  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = (s[0] == '-');
    s.erase(0, 1);
  }
  if (s.empty()) return std::nullopt;

  Rat value;
  if (std::size_t slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    BigInt d(den);
    if (d == 0) return std::nullopt;
    value = Rat(BigInt(num), d);
  } else if (std::size_t dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || (!frac.empty() && !all_digits(frac))) return std::nullopt;
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt digits = BigInt(whole) * scale + (frac.empty() ? BigInt(0) : BigInt(frac));
    value = Rat(digits, scale);
  } else {
    if (!all_digits(s)) return std::nullopt;
    value = Rat(BigInt(s));
  }
  if (negative) value = -value;
  return value;
}

std::string to_fraction_string(const Rat& value) {
  std::ostringstream out;
  out << numerator(value) << '/' << denominator(value);
  return out.str();
}

double to_double(const Rat& value) { return value.convert_to<double>(); }

Rat abs_diff(const Rat& a, const Rat& b) { return a >= b ? a - b : b - a; }

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace facmech
