#include "uconvex/measure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "uconvex/error.hpp"
#include "uconvex/format.hpp"

namespace uconvex {

MeasureSpace::MeasureSpace(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidArgument("measure space needs at least one weight");
  bool positive = false;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double a = weights_[i];
    if (!std::isfinite(a) || a < 0.0)
      throw InvalidArgument("weight " + std::to_string(i + 1) + " must be finite and >= 0, got " + format_double(a));
    positive = positive || a > 0.0;
  }
  if (!positive) throw InvalidArgument("at least one weight must be positive");
  std::vector<double> sorted = weights_;
  std::sort(sorted.begin(), sorted.end());
  for (double a : sorted) total_ += a;
}

MeasureSpace MeasureSpace::parse(std::string_view text) {
  if (text.starts_with("weights=")) text.remove_prefix(8);
  std::vector<double> w;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      throw InvalidArgument("invalid weight '" + std::string(item) + "'");
    w.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return MeasureSpace(std::move(w));
}

CaseFlags MeasureSpace::classify() const {
  CaseFlags f;
  f.sub_probability = total_ <= 1.0;
  if (!f.sub_probability) f.sub_probability_witness = "sum of weights = " + format_double(total_) + " > 1";
  f.counting_like = true;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double a = weights_[i];
    if (a != 0.0 && a < 1.0) {
      f.counting_like = false;
      f.counting_witness = "weight " + std::to_string(i + 1) + " = " + format_double(a) + " lies in (0, 1)";
      break;
    }
  }
  return f;
}

bool MeasureSpace::integer_weights() const {
  return std::all_of(weights_.begin(), weights_.end(), [](double a) { return std::floor(a) == a; });
}

}  // namespace uconvex
