#pragma once

#include <stdexcept>
#include <string>

namespace hbmut {

// Malformed input files (wrong column count, bad number, unknown label).
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Inputs that parse but violate a data invariant.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Bad command-line arguments or configuration values.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A sampler state produced a non-finite likelihood or an invalid draw.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace hbmut
