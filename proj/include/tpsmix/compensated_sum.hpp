#pragma once

#include <cmath>

namespace tpsmix {

/// Neumaier's variant of Kahan summation. The correction term also captures
/// the error when an addend is larger in magnitude than the running sum.
template <typename Value = double>
class CompensatedSum {
 public:
  CompensatedSum& operator+=(Value value) {
    const Value t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  CompensatedSum& operator-=(Value value) { return *this += -value; }

  Value value() const { return sum_ + compensation_; }
  operator Value() const { return value(); }

 private:
  Value sum_{0};
  Value compensation_{0};
};

}  // namespace tpsmix
