#include "mixtest/sample.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace mixtest {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  const std::size_t n = values_.size();
  if (n < 2) {
    throw std::invalid_argument("sample needs at least two observations, got " +
                                std::to_string(n));
  }
  double sum = 0.0;
  for (double x : values_) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("sample contains a non-finite value");
    }
    sum += x;
  }
  mean_ = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double x : values_) {
    const double d = x - mean_;
    ss += d * d;
  }
  var_n_ = ss / static_cast<double>(n);
  if (!(var_n_ > 0.0)) {
    throw std::invalid_argument("sample variance is zero (all values equal)");
  }
  sd_n_ = std::sqrt(var_n_);
}

}  // namespace mixtest
