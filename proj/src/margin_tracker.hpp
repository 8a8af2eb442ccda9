#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "uconvex/report.hpp"

namespace uconvex::detail {

// Relative slack used by every "holds" verdict.
inline constexpr double kHoldsSlack = 1e-9;

inline double magnitude(double greater, double lesser) {
  return std::max({1.0, std::fabs(greater), std::fabs(lesser)});
}

// Keeps the point with the smallest scaled margin. merge() favours the
// receiver on ties, so reducing batches in index order is deterministic.
struct MarginTracker {
  // Relative trackers scale by max(|greater|, |lesser|) instead of max(1, ...).
  bool relative = false;
  double scaled = std::numeric_limits<double>::infinity();
  double margin = std::numeric_limits<double>::infinity();
  double greater = 0.0;
  double lesser = 0.0;
  std::vector<double> witness;
  std::size_t evaluated = 0;
  std::size_t excluded = 0;

  void consider(double g, double l, const std::vector<double>& point) {
    ++evaluated;
    const double m = g - l;
    const double s = m / (relative ? std::max({std::fabs(g), std::fabs(l), std::numeric_limits<double>::min()})
                                    : magnitude(g, l));
    if (s < scaled) {
      scaled = s;
      margin = m;
      greater = g;
      lesser = l;
      witness = point;
    }
  }

  void exclude() { ++excluded; }

  void merge(const MarginTracker& other) {
    evaluated += other.evaluated;
    excluded += other.excluded;
    if (other.scaled < scaled) {
      scaled = other.scaled;
      margin = other.margin;
      greater = other.greater;
      lesser = other.lesser;
      witness = other.witness;
    }
  }

  // Fills the numeric part of a report; verdict uses the standard slack.
  void fill(ConditionReport& rep) const {
    rep.evaluated = evaluated;
    rep.excluded = excluded;
    if (evaluated == 0) {
      rep.verdict = Verdict::Fails;
      rep.worst_margin = std::numeric_limits<double>::quiet_NaN();
      rep.notes.push_back("no point could be evaluated");
      return;
    }
    rep.worst_margin = margin;
    rep.greater = greater;
    rep.lesser = lesser;
    rep.witness = witness;
    rep.verdict = scaled >= -kHoldsSlack ? Verdict::HoldsOnGrid : Verdict::Fails;
  }
};

}  // namespace uconvex::detail
