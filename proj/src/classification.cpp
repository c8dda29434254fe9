#include "firmscale/classification.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace firmscale {

namespace {

bool valid_code(std::string_view digits) {
  const auto len = digits.size();
  if (len != 2 && len != 4 && len != 6 && len != 8) return false;
  return std::all_of(digits.begin(), digits.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

}  // namespace

ClassificationCode::ClassificationCode(std::string digits)
    : digits_(std::move(digits)) {
  if (!valid_code(digits_)) {
    throw std::invalid_argument(
        "classification code must be 2, 4, 6 or 8 decimal digits, got '" +
        digits_ + "'");
  }
}

std::optional<ClassificationCode> ClassificationCode::parse(
    std::string_view digits) {
  if (!valid_code(digits)) return std::nullopt;
  ClassificationCode code;
  code.digits_ = std::string(digits);
  return code;
}

bool ClassificationCode::matched_by(const ClassificationCode& prefix) const {
  if (prefix.empty() || prefix.length() > length()) return false;
  return digits_.compare(0, prefix.length(), prefix.digits_) == 0;
}

}  // namespace firmscale
