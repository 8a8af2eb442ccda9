#include "uconvex/paranorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "margin_tracker.hpp"
#include "uconvex/error.hpp"
#include "uconvex/format.hpp"
#include "uconvex/parallel.hpp"
#include "uconvex/rng.hpp"

namespace uconvex {

ParanormContext::ParanormContext(Generator generator, MeasureSpace space)
    : g_(std::move(generator)), m_(std::move(space)) {}

double ParanormContext::phi_sum(std::span<const double> x) const {
  if (x.size() != m_.size())
    throw InvalidArgument("vector has " + std::to_string(x.size()) + " coordinates, space has " +
                          std::to_string(m_.size()));
  const auto& w = m_.weights();
  double terms[16];
  std::vector<double> heap;
  double* buf = terms;
  if (x.size() > 16) {
    heap.resize(x.size());
    buf = heap.data();
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ax = std::fabs(x[i]);
    buf[i] = (w[i] == 0.0 || ax == 0.0) ? 0.0 : w[i] * g_.value(ax);
  }
  std::sort(buf, buf + x.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += buf[i];
  if (!std::isfinite(s)) throw OverflowError("paranorm sum overflows");
  return s;
}

double ParanormContext::pnorm(std::span<const double> x) const { return g_.inverse(phi_sum(x)); }

SimpleFunction ParanormContext::radial_scale(std::span<const double> direction, double r) const {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("radial_scale needs r > 0, got " + format_double(r));
  if (direction.size() != m_.size()) throw InvalidArgument("direction length does not match the space");
  double dmax = 0.0;
  for (std::size_t i = 0; i < direction.size(); ++i)
    if (m_.weights()[i] > 0.0) dmax = std::max(dmax, std::fabs(direction[i]));
  if (dmax == 0.0) throw InvalidArgument("radial_scale needs a direction that is nonzero on the support");
  if (r > g_.t_max()) throw OverflowError("radius " + format_double(r) + " exceeds T_max");

  const double target = g_.value(r);
  std::vector<double> x(direction.size());
  auto sum_at = [&](double s) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = s * direction[i];
    return phi_sum(x);
  };

  double lo = 0.0, hi = r / dmax;
  while (sum_at(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi * dmax > g_.t_max())
      throw OverflowError("radial_scale: no point of norm " + format_double(r) + " below T_max along this direction");
  }
  for (int i = 0; i < 200 && hi - lo > std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (sum_at(mid) < target ? lo : hi) = mid;
  }
  const double s = std::fabs(sum_at(lo) - target) <= std::fabs(sum_at(hi) - target) ? lo : hi;
  sum_at(s);
  return x;
}

namespace {

constexpr std::size_t kAuditBatch = 256;
constexpr double kScales[3] = {0.1, 1.0, 10.0};

struct AuditBatch {
  detail::MarginTracker symmetry, subadditivity, continuity;
};

}  // namespace

AxiomAudit audit_axioms(const ParanormContext& ctx, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("audit needs at least one sample");
  const std::size_t k = ctx.dim();
  const std::size_t batches = (samples + kAuditBatch - 1) / kAuditBatch;
  std::vector<AuditBatch> out(batches);

  parallel_for(batches, [&](std::size_t b) {
    CounterRng rng(seed, b);
    AuditBatch& acc = out[b];
    const std::size_t end = std::min(samples, (b + 1) * kAuditBatch);
    std::vector<double> x(k), y(k), xy(k), neg(k), tiny(k);
    for (std::size_t i = b * kAuditBatch; i < end; ++i) {
      const double scale = kScales[i % 3];
      for (std::size_t j = 0; j < k; ++j) {
        x[j] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::fabs(rng.normal()) * scale;
        y[j] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::fabs(rng.normal()) * scale;
        xy[j] = x[j] + y[j];
        neg[j] = -x[j];
      }
      std::vector<double> point(x);
      point.insert(point.end(), y.begin(), y.end());
      try {
        const double px = ctx.pnorm(x), py = ctx.pnorm(y), pxy = ctx.pnorm(xy);
        acc.subadditivity.consider(px + py, pxy, point);
        const double pn = ctx.pnorm(neg);
        // Exact equality is expected: only |x_i| enters the formula.
        acc.symmetry.consider(0.0, std::fabs(pn - px), x);
        double prev = px;
        bool monotone = true;
        double last = px;
        for (int e = 1; e <= 12; ++e) {
          const double f = std::pow(10.0, -e);
          for (std::size_t j = 0; j < k; ++j) tiny[j] = f * x[j];
          last = ctx.pnorm(tiny);
          monotone = monotone && last <= prev;
          prev = last;
        }
        const double bound = 1e-6 * std::max(1.0, px);
        acc.continuity.consider(monotone ? bound : -1.0, last, x);
      } catch (const OverflowError&) {
        acc.subadditivity.exclude();
        acc.symmetry.exclude();
        acc.continuity.exclude();
      }
    }
  });

  AuditBatch total;
  for (const auto& b : out) {
    total.symmetry.merge(b.symmetry);
    total.subadditivity.merge(b.subadditivity);
    total.continuity.merge(b.continuity);
  }
  const std::string domain = std::to_string(samples) + " seeded pairs, coordinates |N(0,1)| * {0.1, 1, 10} with random signs";
  AxiomAudit audit;
  audit.symmetry.name = "symmetry";
  audit.subadditivity.name = "subadditivity";
  audit.continuity.name = "scalar-continuity";
  for (ConditionReport* rep : {&audit.symmetry, &audit.subadditivity, &audit.continuity}) rep->domain = domain;
  total.symmetry.fill(audit.symmetry);
  if (audit.symmetry.evaluated > 0 && audit.symmetry.worst_margin != 0.0) audit.symmetry.verdict = Verdict::Fails;
  total.subadditivity.fill(audit.subadditivity);
  total.continuity.fill(audit.continuity);
  audit.continuity.notes.push_back("p(t x) along t = 1e-1 ... 1e-12 must decrease and end below 1e-6 * max(1, p(x))");
  return audit;
}

std::vector<std::array<double, 2>> ball_boundary(const ParanormContext& ctx, double r, std::size_t n) {
  if (ctx.dim() != 2) throw InvalidArgument("ball boundary needs a two-point space, got k = " + std::to_string(ctx.dim()));
  if (n < 4) throw InvalidArgument("ball boundary needs n >= 4, got " + std::to_string(n));
  if (!(r > 0.0)) throw InvalidArgument("ball boundary needs r > 0");
  std::vector<std::array<double, 2>> pts(n);
  for (std::size_t j = 0; j < n; ++j) {
    // Exact axis directions avoid cos(pi/2) ~ 6e-17 residue.
    const std::size_t q4 = 4 * j;
    std::array<double, 2> dir;
    if (q4 % n == 0) {
      const std::size_t quadrant = q4 / n;
      static constexpr double cs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      dir = {cs[quadrant][0], cs[quadrant][1]};
    } else {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      dir = {std::cos(theta), std::sin(theta)};
    }
    const auto x = ctx.radial_scale(dir, r);
    pts[j] = {x[0], x[1]};
  }
  return pts;
}

}  // namespace uconvex
