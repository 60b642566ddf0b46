#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace npshape {

using Complex = std::complex<double>;

// Malformed or out-of-contract input (bad file, bad flag, violated precondition).
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation that started from valid input but failed numerically
// (singular system, residual over tolerance, divergent series).
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Compensated (Kahan) accumulator. The recurrence chains mix coefficient
// magnitudes across many orders; the compensation keeps the inner sums at
// machine accuracy independently of summation order length.
template <typename T>
class KahanSum {
public:
  void add(const T& x) {
    const T y = x - carry_;
    const T t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  const T& value() const { return sum_; }

private:
  T sum_{};
  T carry_{};
};

}  // namespace npshape
