#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "uconvex/generator.hpp"
#include "uconvex/measure.hpp"
#include "uconvex/report.hpp"

namespace uconvex {

/// The functional x -> phi^{-1}(sum_i a_i phi(|x_i|)) on a finite weighted space.
class ParanormContext {
 public:
  ParanormContext(Generator generator, MeasureSpace space);

  const Generator& generator() const noexcept { return g_; }
  const MeasureSpace& space() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.size(); }

  /// Throws InvalidArgument on a length mismatch, OverflowError past phi(T_max).
  double pnorm(std::span<const double> x) const;
  /// sum_i a_i phi(|x_i|), summed in ascending order of the terms.
  double phi_sum(std::span<const double> x) const;
  /// s * direction with pnorm = r, by bisection in the scalar s.
  SimpleFunction radial_scale(std::span<const double> direction, double r) const;

 private:
  Generator g_;
  MeasureSpace m_;
};

struct AxiomAudit {
  ConditionReport symmetry;
  ConditionReport subadditivity;
  ConditionReport continuity;
  bool holds() const noexcept { return symmetry.holds() && subadditivity.holds() && continuity.holds(); }
};

/// Seeded random cross-check of symmetry, subadditivity and scalar continuity.
AxiomAudit audit_axioms(const ParanormContext& ctx, std::size_t samples, std::uint64_t seed);

/// n points of {pnorm = r} along angle-uniform directions (k = 2 only).
std::vector<std::array<double, 2>> ball_boundary(const ParanormContext& ctx, double r, std::size_t n);

}  // namespace uconvex
