#ifndef FIRMSCALE_ERRORS_HPP
#define FIRMSCALE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace firmscale {

// Input or filtered data is unusable (unreadable file, missing columns,
// empty filter result). Maps to CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A fit cannot be produced from otherwise valid data (too few bins,
// degenerate variance). Maps to CLI exit code 3.
class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace firmscale

#endif
