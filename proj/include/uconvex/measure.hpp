#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace uconvex {

/// Both flags may hold at once. Witness strings explain a false flag.
struct CaseFlags {
  bool sub_probability = false;  // sum of weights <= 1
  bool counting_like = false;    // every weight in {0} or [1, inf)
  std::string sub_probability_witness;
  std::string counting_witness;
};

/// Finite measure on {1..k} given by its point masses a_i = mu({i}).
class MeasureSpace {
 public:
  /// Throws InvalidArgument unless all a_i >= 0 (finite) and some a_i > 0.
  explicit MeasureSpace(std::vector<double> weights);
  /// "1,1" or "weights=1,1".
  static MeasureSpace parse(std::string_view text);

  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  /// Sum taken over the sorted weights, so it does not depend on their order.
  double total() const noexcept { return total_; }
  CaseFlags classify() const;
  /// Every weight is a nonnegative integer (a genuine counting measure on its support).
  bool integer_weights() const;

 private:
  std::vector<double> weights_;
  double total_ = 0.0;
};

/// Real-valued simple function on a MeasureSpace, one value per point.
using SimpleFunction = std::vector<double>;

}  // namespace uconvex
