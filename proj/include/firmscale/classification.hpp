#ifndef FIRMSCALE_CLASSIFICATION_HPP
#define FIRMSCALE_CLASSIFICATION_HPP

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace firmscale {

/// Hierarchical industry code: 2, 4, 6 or 8 decimal digits
/// (sector -> industry group -> industry -> sub-industry).
/// A default-constructed code is empty and means "unclassified".
class ClassificationCode {
 public:
  ClassificationCode() = default;

  // Throws std::invalid_argument unless digits has even length in {2,4,6,8}
  // and every character is a decimal digit.
  explicit ClassificationCode(std::string digits);

  // Non-throwing variant; nullopt on invalid input.
  static std::optional<ClassificationCode> parse(std::string_view digits);

  const std::string& digits() const { return digits_; }
  bool empty() const { return digits_.empty(); }
  std::size_t length() const { return digits_.size(); }

  // True when this code starts with the (shorter or equal) prefix code.
  // An empty code is matched by nothing; prefix must be non-empty.
  bool matched_by(const ClassificationCode& prefix) const;

  friend bool operator==(const ClassificationCode&,
                         const ClassificationCode&) = default;
  friend std::strong_ordering operator<=>(const ClassificationCode&,
                                          const ClassificationCode&) = default;

 private:
  std::string digits_;
};

}  // namespace firmscale

#endif
