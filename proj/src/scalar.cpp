#include "bvolterra/scalar.hpp"

#include <cctype>

#include "bvolterra/errors.hpp"

namespace bvolterra {

namespace {

bool is_integer_text(std::string_view text, bool allow_sign) {
  if (text.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (text[0] == '-' || text[0] == '+')) i = 1;
  if (i == text.size()) return false;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  return true;
}

std::string strip_plus(std::string_view text) {
  if (!text.empty() && text[0] == '+') text.remove_prefix(1);
  return std::string(text);
}

}  // namespace

Scalar parse_scalar(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  if (!is_integer_text(num, true)) {
    throw ParseError("malformed rational \"" + std::string(text) + "\"");
  }
  mpz_class numerator(strip_plus(num), 10);
  mpz_class denominator = 1;
  if (slash != std::string_view::npos) {
    const std::string_view den = text.substr(slash + 1);
    if (!is_integer_text(den, false)) {
      throw ParseError("malformed rational \"" + std::string(text) + "\"");
    }
    denominator = mpz_class(std::string(den), 10);
    if (denominator == 0) {
      throw ParseError("zero denominator in \"" + std::string(text) + "\"");
    }
  }
  Scalar value(numerator, denominator);
  value.canonicalize();
  return value;
}

std::string to_string(const Scalar& value) { return value.get_str(10); }

}  // namespace bvolterra
