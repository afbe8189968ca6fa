#pragma once

#include <stdexcept>
#include <string>

namespace mdfit {

/// Bad shapes, out-of-range parameters, malformed files. Maps to CLI exit code 2.
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Series non-convergence, failed factorization, undefined scale. Exit code 3.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool cond, const std::string& msg)
{
    if (!cond) { throw InputError(msg); }
}
} // namespace detail

} // namespace mdfit
