#include "stableflows/measure/flow.hpp"

#include <cmath>
#include <stdexcept>

namespace stableflows::measure {

std::string to_string(FlowClass c) {
  switch (c) {
    case FlowClass::Dissipative:
      return "dissipative";
    case FlowClass::ConservativeNull:
      return "conservative_null";
    case FlowClass::Positive:
      return "positive";
    default:
      return "unknown";
  }
}

namespace {
double frac_mod(double v, double period) {
  double r = std::fmod(v, period);
  return r < 0 ? r + period : r;
}
}  // namespace

RotationFlow::RotationFlow(double rate) : rate_(rate) {
  if (rate == 0.0)
    throw std::invalid_argument("RotationFlow: rate must be nonzero");
}

Point RotationFlow::apply(double t, const Point& x) const {
  Point p = x;
  p.x = frac_mod(x.x + t * rate_, 1.0);
  return p;
}

AtomRotationFlow::AtomRotationFlow(std::vector<AtomMotion> motions)
    : motions_(std::move(motions)) {
  for (const auto& m : motions_) {
    if (m.speed == 0.0)
      throw std::invalid_argument("AtomRotationFlow: speed must be nonzero");
    if (!(m.period > 0.0))
      throw std::invalid_argument("AtomRotationFlow: period must be positive");
  }
}

Point AtomRotationFlow::apply(double t, const Point& x) const {
  const auto& m = motions_.at(static_cast<std::size_t>(x.atom));
  Point p = x;
  p.x = frac_mod(x.x + t * m.speed, m.period);
  return p;
}

AtomPowerCocycle::AtomPowerCocycle(std::vector<int> signs,
                                   std::vector<AtomMotion> motions)
    : signs_(std::move(signs)), motions_(std::move(motions)) {
  if (signs_.size() != motions_.size())
    throw std::invalid_argument("AtomPowerCocycle: sign/motion mismatch");
  for (int b : signs_)
    if (b != 1 && b != -1)
      throw std::invalid_argument("AtomPowerCocycle: signs must be +-1");
}

double AtomPowerCocycle::eval(double t, const Point& x) const {
  auto k = static_cast<std::size_t>(x.atom);
  if (signs_[k] == 1) return 1.0;
  const auto& m = motions_[k];
  auto wraps = static_cast<long long>(std::floor((x.x + t * m.speed) / m.period));
  return (wraps & 1LL) ? -1.0 : 1.0;
}

double WalkParityCocycle::eval(double t, const Point& x) const {
  auto n = static_cast<std::int64_t>(std::llround(t));
  auto off = static_cast<std::int64_t>(std::llround(x.x));
  std::int64_t s0 = x.traj->site_at(off);
  std::int64_t st = x.traj->site_at(off + n);
  return ((s0 + st) & 1LL) ? -1.0 : 1.0;
}

FlowAxiomReport check_flow_axioms(const Flow& flow, const Cocycle& cocycle,
                                  const Space& space, std::size_t samples,
                                  RngStream& rng, double t_range,
                                  bool discrete_time) {
  FlowAxiomReport rep;
  rep.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    Point x = space.sample(rng);
    double t = rng.uniform(-t_range, t_range);
    double s = rng.uniform(-t_range, t_range);
    if (discrete_time) {
      t = std::round(t);
      s = std::round(s);
    }
    if (x.traj) x.traj->ensure(-2.2 * t_range, 2.2 * t_range);

    Point xs = flow.apply(s, x);
    Point both = flow.apply(t, xs);
    Point direct = flow.apply(t + s, x);
    rep.max_group_residual =
        std::max(rep.max_group_residual, point_distance(both, direct));
    rep.max_identity_residual =
        std::max(rep.max_identity_residual, point_distance(flow.apply(0, x), x));

    double chain = flow.rn_derivative(t, xs) * flow.rn_derivative(s, x);
    double direct_rn = flow.rn_derivative(t + s, x);
    double denom = std::max(1.0, std::fabs(direct_rn));
    rep.max_chain_rule_residual = std::max(
        rep.max_chain_rule_residual, std::fabs(chain - direct_rn) / denom);

    double coc = cocycle.eval(s, x) * cocycle.eval(t, xs);
    double coc_direct = cocycle.eval(t + s, x);
    rep.max_cocycle_residual =
        std::max(rep.max_cocycle_residual, std::fabs(coc - coc_direct));
  }
  return rep;
}

}  // namespace stableflows::measure
