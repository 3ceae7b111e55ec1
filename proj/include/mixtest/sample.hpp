#pragma once

#include <cstddef>
#include <vector>

namespace mixtest {

// Observation vector with cached moments. var_n is the n-divisor variance;
// it anchors the variance penalty and makes the tests affine invariant.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t n() const { return values_.size(); }
  double mean() const { return mean_; }
  double var_n() const { return var_n_; }
  double sd_n() const { return sd_n_; }  // sqrt(var_n)

 private:
  std::vector<double> values_;
  double mean_ = 0.0;
  double var_n_ = 0.0;
  double sd_n_ = 0.0;
};

}  // namespace mixtest
