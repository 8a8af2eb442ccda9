#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace uconvex {

enum class Verdict { HoldsOnGrid, Fails };

inline const char* to_string(Verdict v) { return v == Verdict::HoldsOnGrid ? "holds-on-grid" : "fails"; }

/**
 * Outcome of checking one inequality "greater >= lesser" over sampled points.
 *
 * worst_margin is greater - lesser at the witness, the point whose margin is
 * smallest after scaling by max(1, |greater|, |lesser|). For an identity
 * check the margin is the largest absolute difference instead.
 */
struct ConditionReport {
  std::string name;
  Verdict verdict = Verdict::HoldsOnGrid;
  double worst_margin = 0.0;
  std::vector<double> witness;
  double greater = 0.0;  // value of the side that should be larger, at the witness
  double lesser = 0.0;
  std::string domain;  // description of the sampled points
  std::size_t evaluated = 0;
  std::size_t excluded = 0;
  std::vector<std::string> notes;

  bool holds() const noexcept { return verdict == Verdict::HoldsOnGrid; }
};

}  // namespace uconvex
