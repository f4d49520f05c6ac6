#include "stableflows/kernels/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace stableflows::kernels {

double eval_kernel(const KernelSpec& k, double t, const Point& x) {
  double a = k.cocycle->eval(t, x);
  double rn = k.flow->rn_derivative(t, x);
  double scale = rn == 1.0 ? 1.0 : std::pow(rn, 1.0 / k.alpha.value());
  double v = a * scale * k.f(k.flow->apply(t, x));
  if (!std::isfinite(v))
    throw std::runtime_error("kernel evaluation produced a non-finite value (" +
                             k.label + ", t=" + std::to_string(t) + ")");
  return v;
}

void eval_grid(const KernelSpec& k, const Point& x, double t0, double dt,
               std::size_t n, double* out) {
  if (n == 0) return;
  if (x.traj) {
    double lo = std::min(t0 + x.x, t0 + dt * static_cast<double>(n - 1) + x.x);
    double hi = std::max(t0 + x.x, t0 + dt * static_cast<double>(n - 1) + x.x);
    x.traj->ensure(std::min(lo, 0.0), std::max(hi, 0.0));
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = eval_kernel(k, t0 + dt * static_cast<double>(i), x);
}

// ---------------------------------------------------------------------------
// CombinationIntegrand
// ---------------------------------------------------------------------------

CombinationIntegrand::CombinationIntegrand(const KernelSpec& k,
                                           std::vector<Coeff> coeffs)
    : k_(k), coeffs_(std::move(coeffs)) {}

double CombinationIntegrand::operator()(const Point& x) const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += c.c * eval_kernel(k_, c.t, x);
  return std::pow(std::fabs(s), k_.alpha.value());
}

std::optional<Interval> CombinationIntegrand::line_window() const {
  if (!k_.hints.line_support || coeffs_.empty()) return {};
  bool first = true;
  Interval hull{0, 0};
  for (const auto& c : coeffs_) {
    auto w = k_.flow->pullback(c.t, *k_.hints.line_support);
    if (!w) return {};
    if (w->first > w->second) std::swap(w->first, w->second);
    if (first) {
      hull = *w;
      first = false;
    } else {
      hull.first = std::min(hull.first, w->first);
      hull.second = std::max(hull.second, w->second);
    }
  }
  return hull;
}

std::vector<double> CombinationIntegrand::line_breakpoints() const {
  std::vector<double> out;
  for (const auto& c : coeffs_) {
    for (double b : k_.hints.line_breaks) {
      auto w = k_.flow->pullback(c.t, Interval{b, b});
      if (w) out.push_back(w->first);
    }
  }
  return out;
}

std::vector<double> CombinationIntegrand::atom_breakpoints(int atom) const {
  using measure::AtomRotationFlow;
  using measure::RotationFlow;
  double period = 1.0, speed = 1.0;
  const measure::Flow* flow = k_.flow.get();
  if (auto* uf = dynamic_cast<const measure::UnionFlow*>(flow))
    flow = uf->parts().at(static_cast<std::size_t>(atom)).get();
  if (auto* rf = dynamic_cast<const RotationFlow*>(flow)) {
    speed = rf->rate();
  } else if (auto* af = dynamic_cast<const AtomRotationFlow*>(flow)) {
    const auto& m = af->motions().at(static_cast<std::size_t>(atom));
    period = m.period;
    speed = m.speed;
  } else if (dynamic_cast<const measure::IdentityFlow*>(flow)) {
    speed = 0.0;
  } else {
    return {};
  }
  std::vector<double> breaks;
  if (static_cast<std::size_t>(atom) < k_.hints.atom_breaks.size())
    breaks = k_.hints.atom_breaks[static_cast<std::size_t>(atom)];
  breaks.push_back(0.0);  // cocycle wrap point
  std::vector<double> out;
  for (const auto& c : coeffs_) {
    for (double b : breaks) {
      double v = std::fmod(b - speed * c.t, period);
      if (v < 0) v += period;
      out.push_back(v);
    }
  }
  return out;
}

std::optional<Interval> CombinationIntegrand::z_window(const Point& base) const {
  if (!k_.hints.z_support || coeffs_.empty() || !base.traj) return {};
  bool first = true;
  Interval hull{0, 0};
  for (const auto& c : coeffs_) {
    double y = base.traj->value_at(c.t + base.x);
    Interval w{k_.hints.z_support->first - y, k_.hints.z_support->second - y};
    if (first) {
      hull = w;
      first = false;
    } else {
      hull.first = std::min(hull.first, w.first);
      hull.second = std::max(hull.second, w.second);
    }
  }
  return hull;
}

std::vector<double> CombinationIntegrand::z_breakpoints(const Point& base) const {
  std::vector<double> out;
  if (!base.traj) return out;
  for (const auto& c : coeffs_) {
    double y = base.traj->value_at(c.t + base.x);
    for (double b : k_.hints.z_breaks) out.push_back(b - y);
  }
  return out;
}

std::vector<std::int64_t> CombinationIntegrand::walk_sites(
    const measure::Trajectory& traj) const {
  std::vector<std::int64_t> out;
  if (k_.hints.cylinder_sites.empty()) return out;
  for (const auto& c : coeffs_) {
    auto n = static_cast<std::int64_t>(std::llround(c.t));
    std::int64_t w = traj.site_at(n);
    for (std::int64_t site : k_.hints.cylinder_sites) out.push_back(site - w);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Interval> CombinationIntegrand::time_window() const {
  Interval w{0.0, 0.0};
  for (const auto& c : coeffs_) {
    w.first = std::min(w.first, c.t);
    w.second = std::max(w.second, c.t);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

StableScale scale_of_combination(const KernelSpec& k,
                                 const std::vector<Coeff>& coeffs,
                                 RngStream& rng) {
  if (coeffs.empty()) return StableScale(0.0);
  CombinationIntegrand g(k, coeffs);
  double v = k.space->integrate(g, k.quad, rng);
  if (v < 0) v = 0;  // quadrature roundoff on a nonnegative integrand
  return StableScale(std::pow(v, 1.0 / k.alpha.value()));
}

StableScale kernel_norm(const KernelSpec& k, double t, RngStream& rng) {
  return scale_of_combination(k, {{1.0, t}}, rng);
}

std::vector<double> norms_alpha_of_combinations(
    const KernelSpec& k, const std::vector<std::vector<Coeff>>& combos,
    const NormBatchOptions& opts, RngStream& rng) {
  measure::IntegrateOptions quad = k.quad;
  if (opts.mc_samples) quad.mc_samples = opts.mc_samples;
  std::vector<CombinationIntegrand> gs;
  gs.reserve(combos.size());
  for (const auto& c : combos) gs.emplace_back(k, c);
  std::vector<const measure::Integrand*> ptrs;
  ptrs.reserve(gs.size());
  for (const auto& g : gs) ptrs.push_back(&g);
  if (opts.shared_points) return k.space->integrate_family(ptrs, quad, rng);
  std::vector<double> out(combos.size());
  for (std::size_t i = 0; i < combos.size(); ++i) {
    RngStream sub = rng.substream(i);
    out[i] = k.space->integrate(*ptrs[i], quad, sub);
  }
  return out;
}

double support_fraction(const KernelSpec& k, Interval time_window,
                        std::size_t samples, double step, RngStream& rng) {
  if (samples == 0) return 0.0;
  if (k.time_domain.discrete()) step = std::max(1.0, std::round(step));
  auto n_steps = static_cast<std::size_t>(
      std::floor((time_window.second - time_window.first) / step)) + 1;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    Point x = k.space->sample(rng);
    if (x.traj) x.traj->ensure(time_window.first, time_window.second);
    for (std::size_t j = 0; j < n_steps; ++j) {
      double t = time_window.first + step * static_cast<double>(j);
      if (std::fabs(eval_kernel(k, t, x)) > 0) {
        ++hit;
        break;
      }
    }
  }
  return static_cast<double>(hit) / static_cast<double>(samples);
}

}  // namespace stableflows::kernels
