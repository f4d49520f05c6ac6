#include "stableflows/measure/space.hpp"

#include <algorithm>
#include <cmath>

#include "stableflows/core/types.hpp"
#include "stableflows/stable/sampler.hpp"

namespace stableflows::measure {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kSqrt2Pi = 2.50662827463100050241576528481104525;

// 16-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr double kGlNode[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr double kGlWeight[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

double gl16(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 8; ++i) {
    acc += kGlWeight[i] * (f(c + h * kGlNode[i]) + f(c - h * kGlNode[i]));
  }
  return acc * h;
}

double gauss_density(double z, double scale) {
  return std::exp(-0.5 * z * z / (scale * scale)) / (kSqrt2Pi * scale);
}

double cauchy_density(double z, double scale) {
  return scale / (kPi * (scale * scale + z * z));
}

}  // namespace

double panel_integrate(const std::function<double(double)>& f, double a,
                       double b, std::vector<double> breaks, double max_width) {
  if (!(b > a)) return 0.0;
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  double acc = 0.0;
  double lo = a;
  for (double br : breaks) {
    if (br <= lo + 1e-14) continue;
    double hi = std::min(br, b);
    if (hi <= lo) continue;
    int pieces = static_cast<int>(std::ceil((hi - lo) / max_width));
    if (pieces < 1) pieces = 1;
    double w = (hi - lo) / pieces;
    for (int p = 0; p < pieces; ++p)
      acc += gl16(f, lo + p * w, lo + (p + 1) * w);
    lo = hi;
    if (lo >= b) break;
  }
  return acc;
}

double importance_mc(const Space& space, const Integrand& g,
                     const IntegrateOptions& opts, RngStream& rng) {
  const std::size_t n = std::max<std::size_t>(opts.mc_samples, 64);
  double acc = 0.0;
  std::vector<double> checkpoints;
  std::size_t next_check = 256;
  for (std::size_t i = 0; i < n; ++i) {
    Point p = space.sample(rng);
    acc += g(p) * space.dm_dq(p);
    if (opts.detect_divergence && (i + 1 == next_check || i + 1 == n)) {
      checkpoints.push_back(acc / static_cast<double>(i + 1));
      next_check *= 2;
    }
  }
  if (opts.detect_divergence && checkpoints.size() >= 4) {
    std::size_t k = checkpoints.size();
    bool growing = true;
    for (std::size_t i = k - 3; i < k; ++i)
      growing = growing && checkpoints[i] > 1.5 * checkpoints[i - 1];
    if (growing && checkpoints.back() > 8.0 * checkpoints.front())
      throw DivergenceError(
          "integral shows sustained growth across sample-doubling checkpoints",
          checkpoints);
  }
  return acc / static_cast<double>(n);
}

std::vector<double> Space::integrate_family(
    const std::vector<const Integrand*>& gs, const IntegrateOptions& opts,
    RngStream& rng) const {
  std::vector<double> out(gs.size());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    RngStream sub = rng.substream(i);
    out[i] = integrate(*gs[i], opts, sub);
  }
  return out;
}

// ---------------------------------------------------------------------------
// LineSpace
// ---------------------------------------------------------------------------

Point LineSpace::sample(RngStream& rng) const {
  Point p;
  if (sampler_ == Sampler::Gaussian) {
    p.x = scale_ * rng.normal();
  } else {
    p.x = scale_ * std::tan(kPi * (rng.uniform01() - 0.5));
  }
  return p;
}

double LineSpace::dm_dq(const Point& x) const {
  double d = sampler_ == Sampler::Gaussian ? gauss_density(x.x, scale_)
                                           : cauchy_density(x.x, scale_);
  return 1.0 / d;
}

std::string LineSpace::describe() const {
  return sampler_ == Sampler::Gaussian ? "line(lebesgue, q=gaussian)"
                                       : "line(lebesgue, q=cauchy)";
}

double LineSpace::integrate(const Integrand& g, const IntegrateOptions& opts,
                            RngStream& rng) const {
  auto win = g.line_window();
  if (!win) return importance_mc(*this, g, opts, rng);
  Point p;
  return panel_integrate(
      [&](double x) {
        p.x = x;
        return g(p);
      },
      win->first, win->second, g.line_breakpoints(), opts.max_panel_width);
}

// ---------------------------------------------------------------------------
// CircleSpace
// ---------------------------------------------------------------------------

double CircleSpace::q_density(double x) const {
  if (sampler_ == Sampler::Uniform) return 1.0;
  return 1.0 + 0.5 * std::cos(2.0 * kPi * x);
}

Point CircleSpace::sample(RngStream& rng) const {
  Point p;
  if (sampler_ == Sampler::Uniform) {
    p.x = rng.uniform01();
    return p;
  }
  for (;;) {  // rejection against the tilted density, bounded by 1.5
    double x = rng.uniform01();
    if (rng.uniform01() * 1.5 <= q_density(x)) {
      p.x = x;
      return p;
    }
  }
}

double CircleSpace::dm_dq(const Point& x) const { return 1.0 / q_density(x.x); }

std::string CircleSpace::describe() const {
  return sampler_ == Sampler::Uniform ? "circle(q=uniform)" : "circle(q=tilted)";
}

double CircleSpace::integrate(const Integrand& g, const IntegrateOptions& opts,
                              RngStream&) const {
  Point p;
  return panel_integrate(
      [&](double x) {
        p.x = x;
        return g(p);
      },
      0.0, 1.0, g.atom_breakpoints(0), opts.max_panel_width);
}

// ---------------------------------------------------------------------------
// AtomIntervalSpace
// ---------------------------------------------------------------------------

AtomIntervalSpace::AtomIntervalSpace(std::vector<IntervalAtom> atoms)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty())
    throw std::invalid_argument("AtomIntervalSpace: needs at least one atom");
  mass_ = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.weight > 0) || !(a.period > 0))
      throw std::invalid_argument("AtomIntervalSpace: invalid atom");
    mass_ += a.weight * a.period;
    cum_.push_back(mass_);
  }
}

Point AtomIntervalSpace::sample(RngStream& rng) const {
  double u = rng.uniform01() * mass_;
  std::size_t k = static_cast<std::size_t>(
      std::lower_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
  if (k >= atoms_.size()) k = atoms_.size() - 1;
  Point p;
  p.atom = static_cast<int>(k);
  p.x = rng.uniform01() * atoms_[k].period;
  return p;
}

double AtomIntervalSpace::dm_dq(const Point&) const {
  // q is proportional to m atom-by-atom and uniform within each atom
  return mass_;
}

std::string AtomIntervalSpace::describe() const {
  return "atom-intervals(" + std::to_string(atoms_.size()) + ")";
}

double AtomIntervalSpace::integrate(const Integrand& g,
                                    const IntegrateOptions& opts,
                                    RngStream&) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    Point p;
    p.atom = static_cast<int>(k);
    acc += atoms_[k].weight *
           panel_integrate(
               [&](double v) {
                 p.x = v;
                 return g(p);
               },
               0.0, atoms_[k].period, g.atom_breakpoints(static_cast<int>(k)),
               opts.max_panel_width);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// WalkPathSpace
// ---------------------------------------------------------------------------

std::shared_ptr<Trajectory> WalkPathSpace::make_walk(RngStream rng) {
  return std::make_shared<WalkTrajectory>(rng);
}

std::int64_t WalkPathSpace::sample_site(RngStream& rng) const {
  if (pmf_ == SitePmf::InverseSquare) {
    double u = rng.uniform01();
    auto k = static_cast<std::int64_t>(std::floor(u / (1.0 - u)));
    if (k == 0) return 0;
    return rng.rademacher() > 0 ? k : -k;
  }
  // two-sided geometric
  double u = rng.uniform01();
  auto k = static_cast<std::int64_t>(
      std::floor(std::log(u) / std::log(geom_p_)));
  if (k == 0) return 0;
  return rng.rademacher() > 0 ? k : -k;
}

double WalkPathSpace::site_pmf(std::int64_t s) const {
  double a = static_cast<double>(std::llabs(s));
  if (pmf_ == SitePmf::InverseSquare) {
    if (s == 0) return 0.5;
    return 0.5 / ((1.0 + a) * (2.0 + a));
  }
  double c = 1.0 - geom_p_;
  return s == 0 ? c : 0.5 * c * std::pow(geom_p_, a);
}

Point WalkPathSpace::sample(RngStream& rng) const {
  Point p;
  p.z = static_cast<double>(sample_site(rng));
  p.traj = make_walk(RngStream(rng.next_u64(), 0x77616c6bULL));
  return p;
}

double WalkPathSpace::dm_dq(const Point& x) const {
  return 1.0 / site_pmf(static_cast<std::int64_t>(std::llround(x.z)));
}

std::string WalkPathSpace::describe() const { return "walk-paths(counting)"; }

double WalkPathSpace::integrate(const Integrand& g, const IntegrateOptions& opts,
                                RngStream& rng) const {
  std::vector<const Integrand*> one{&g};
  return integrate_family(one, opts, rng)[0];
}

std::vector<double> WalkPathSpace::integrate_family(
    const std::vector<const Integrand*>& gs, const IntegrateOptions& opts,
    RngStream& rng) const {
  // One zero-started trajectory serves every starting site: by walk
  // homogeneity, integral g dm = E_0 [ sum_s g(point started at s) ], and the
  // integrands report the finitely many s that can contribute.
  for (const auto* g : gs) {
    if (!g->site_sum_valid()) {
      std::vector<double> out(gs.size());
      for (std::size_t i = 0; i < gs.size(); ++i) {
        RngStream sub = rng.substream(i);
        out[i] = importance_mc(*this, *gs[i], opts, sub);
      }
      return out;
    }
  }
  std::vector<double> acc(gs.size(), 0.0);
  const std::size_t n = std::max<std::size_t>(opts.mc_samples, 16);
  Interval tw{0.0, 0.0};
  for (const auto* g : gs) {
    auto w = g->time_window();
    if (w) {
      tw.first = std::min(tw.first, w->first);
      tw.second = std::max(tw.second, w->second);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    RngStream sub = rng.substream(i);
    auto traj = make_walk(sub);
    traj->ensure(tw.first, tw.second);
    Point p;
    p.traj = traj;
    for (std::size_t j = 0; j < gs.size(); ++j) {
      for (std::int64_t s : gs[j]->walk_sites(*traj)) {
        p.z = static_cast<double>(s);
        acc[j] += (*gs[j])(p);
      }
    }
  }
  for (auto& a : acc) a /= static_cast<double>(n);
  return acc;
}

// ---------------------------------------------------------------------------
// PathLineSpace
// ---------------------------------------------------------------------------

std::shared_ptr<Trajectory> PathLineSpace::make_traj(RngStream rng,
                                                     double grid_step) const {
  PathModelSpec s = model_;
  if (grid_step > 0) s.grid_step = grid_step;
  return std::make_shared<GaussianTrajectory>(s, rng);
}

double PathLineSpace::z_density(double z) const {
  return zsampler_ == ZSampler::Gaussian ? gauss_density(z, 1.0)
                                         : cauchy_density(z, 1.0);
}

Point PathLineSpace::sample(RngStream& rng) const {
  Point p;
  p.traj = make_traj(RngStream(rng.next_u64(), 0x70617468ULL), 0);
  p.z = zsampler_ == ZSampler::Gaussian
            ? rng.normal()
            : std::tan(kPi * (rng.uniform01() - 0.5));
  return p;
}

double PathLineSpace::dm_dq(const Point& x) const {
  return 1.0 / z_density(x.z);
}

std::string PathLineSpace::describe() const { return "paths x line"; }

double PathLineSpace::integrate(const Integrand& g, const IntegrateOptions& opts,
                                RngStream& rng) const {
  const std::size_t n = std::max<std::size_t>(opts.mc_samples, 16);
  auto tw = g.time_window();
  double acc = 0.0;
  bool have_window = true;
  for (std::size_t i = 0; i < n && have_window; ++i) {
    RngStream sub = rng.substream(i);
    Point base;
    base.traj = make_traj(sub, 0);
    if (tw) base.traj->ensure(tw->first, tw->second);
    auto zwin = g.z_window(base);
    if (!zwin) {
      have_window = false;
      break;
    }
    acc += panel_integrate(
        [&](double z) {
          Point p = base;
          p.z = z;
          return g(p);
        },
        zwin->first, zwin->second, g.z_breakpoints(base), opts.max_panel_width);
  }
  if (have_window) return acc / static_cast<double>(n);
  return importance_mc(*this, g, opts, rng);
}

// ---------------------------------------------------------------------------
// PathSpace
// ---------------------------------------------------------------------------

namespace {
/// Trajectory scaled by a constant factor (sub-stable mixing).
class ScaledTrajectory final : public Trajectory {
public:
  ScaledTrajectory(std::shared_ptr<Trajectory> inner, double factor)
      : inner_(std::move(inner)), factor_(factor) {}
  void ensure(double lo, double hi) override { inner_->ensure(lo, hi); }
  double value_at(double t) const override {
    return factor_ * inner_->value_at(t);
  }
  double grid_step() const override { return inner_->grid_step(); }

private:
  std::shared_ptr<Trajectory> inner_;
  double factor_;
};
}  // namespace

std::shared_ptr<Trajectory> PathSpace::make_traj(RngStream rng,
                                                 double grid_step) const {
  PathModelSpec s = model_;
  if (grid_step > 0) s.grid_step = grid_step;
  auto base = std::make_shared<GaussianTrajectory>(s, rng.substream(1));
  if (!mixing_index_) return base;
  RngStream vstream = rng.substream(2);
  double v = stable::sample_positive_stable(*mixing_index_, vstream);
  return std::make_shared<ScaledTrajectory>(base, std::sqrt(v));
}

Point PathSpace::sample(RngStream& rng) const {
  Point p;
  p.traj = make_traj(RngStream(rng.next_u64(), 0x6f726269ULL), 0);
  return p;
}

std::string PathSpace::describe() const {
  return mixing_index_ ? "stationary-paths(sub-stable)" : "stationary-paths";
}

double PathSpace::integrate(const Integrand& g, const IntegrateOptions& opts,
                            RngStream& rng) const {
  const std::size_t n = std::max<std::size_t>(opts.mc_samples, 16);
  auto tw = g.time_window();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    RngStream sub = rng.substream(i);
    Point p;
    p.traj = make_traj(sub, 0);
    if (tw) p.traj->ensure(tw->first, tw->second);
    acc += g(p);
  }
  return acc / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// UnionSpace
// ---------------------------------------------------------------------------

UnionSpace::UnionSpace(std::vector<std::shared_ptr<const Space>> components,
                       std::vector<double> q_weights)
    : components_(std::move(components)), weights_(std::move(q_weights)) {
  if (components_.empty() || components_.size() != weights_.size())
    throw std::invalid_argument("UnionSpace: component/weight mismatch");
  double s = 0;
  for (double w : weights_) {
    if (!(w > 0)) throw std::invalid_argument("UnionSpace: weights must be > 0");
    s += w;
  }
  for (auto& w : weights_) w /= s;
}

Point UnionSpace::sample(RngStream& rng) const {
  double u = rng.uniform01();
  std::size_t k = 0;
  double c = weights_[0];
  while (k + 1 < weights_.size() && u > c) c += weights_[++k];
  Point p = components_[k]->sample(rng);
  p.atom = static_cast<int>(k);
  return p;
}

double UnionSpace::dm_dq(const Point& x) const {
  auto k = static_cast<std::size_t>(x.atom);
  Point inner = x;
  inner.atom = 0;
  return components_[k]->dm_dq(inner) / weights_[k];
}

double UnionSpace::total_mass() const {
  double s = 0;
  for (const auto& c : components_) s += c->total_mass();
  return s;
}

std::string UnionSpace::describe() const {
  std::string s = "union(";
  for (std::size_t k = 0; k < components_.size(); ++k) {
    if (k) s += " + ";
    s += components_[k]->describe();
  }
  return s + ")";
}

bool UnionSpace::deterministic_quadrature() const {
  for (const auto& c : components_)
    if (!c->deterministic_quadrature()) return false;
  return true;
}

double UnionSpace::integrate(const Integrand& g, const IntegrateOptions& opts,
                             RngStream& rng) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    ComponentIntegrand gk(g, static_cast<int>(k));
    RngStream sub = rng.substream(k);
    acc += components_[k]->integrate(gk, opts, sub);
  }
  return acc;
}

}  // namespace stableflows::measure
