#pragma once

#include <stdexcept>
#include <string>

namespace qtrace {

/// Rejected input: malformed files, out-of-range colors, unknown edge ids.
class input_error : public std::invalid_argument {
  public:
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation produced NaN/inf or could not make progress.
class numerical_error : public std::runtime_error {
  public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qtrace
