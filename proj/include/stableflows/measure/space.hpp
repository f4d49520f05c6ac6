#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stableflows/core/rng.hpp"
#include "stableflows/measure/point.hpp"

namespace stableflows::measure {

using Interval = std::pair<double, double>;

/// An integrand over a measure space, carrying the structural hints each
/// integration contract can exploit. Hints that do not apply are left empty
/// and the space falls back to importance-sampled Monte Carlo.
class Integrand {
public:
  virtual ~Integrand() = default;
  virtual double operator()(const Point& x) const = 0;

  /// Line spaces: bounded window containing the integrand's support.
  virtual std::optional<Interval> line_window() const { return {}; }
  /// Line spaces: discontinuity points (panel boundaries).
  virtual std::vector<double> line_breakpoints() const { return {}; }

  /// Circle / atom-interval spaces: per-atom discontinuity points in [0, q).
  virtual std::vector<double> atom_breakpoints(int atom) const {
    (void)atom;
    return {};
  }

  /// Product path x line spaces: z-window and z-breaks given the sampled
  /// trajectory part of `base` (the z field of base is ignored).
  virtual std::optional<Interval> z_window(const Point& base) const {
    (void)base;
    return {};
  }
  virtual std::vector<double> z_breakpoints(const Point& base) const {
    (void)base;
    return {};
  }

  /// Walk path spaces: starting sites with a possibly nonzero contribution
  /// for the given zero-started trajectory. Only consulted when
  /// site_sum_valid() is true; an empty result then means no contribution.
  virtual std::vector<std::int64_t> walk_sites(const Trajectory& traj) const {
    (void)traj;
    return {};
  }
  virtual bool site_sum_valid() const { return false; }

  /// Trajectory window that point evaluation will touch.
  virtual std::optional<Interval> time_window() const { return {}; }
};

struct IntegrateOptions {
  std::size_t mc_samples = 1 << 14;
  double max_panel_width = 0.25;
  bool detect_divergence = true;
};

/// A sigma-finite measure space (E, m) together with an equivalent sampling
/// probability q and its integration contract. Immutable after construction.
class Space {
public:
  virtual ~Space() = default;

  virtual Point sample(RngStream& rng) const = 0;
  /// Radon-Nikodym derivative dm/dq at a sampled point (> 0).
  virtual double dm_dq(const Point& x) const = 0;
  /// Total mass m(E); +infinity for sigma-finite infinite spaces.
  virtual double total_mass() const = 0;
  virtual std::string describe() const = 0;

  /// integral of g dm under this space's contract.
  virtual double integrate(const Integrand& g, const IntegrateOptions& opts,
                           RngStream& rng) const = 0;

  /// Integrates a family sharing the sampled points (trajectories), so that
  /// estimates are comparable across family members. The default draws one
  /// sub-stream per member instead (independent estimates).
  virtual std::vector<double> integrate_family(
      const std::vector<const Integrand*>& gs, const IntegrateOptions& opts,
      RngStream& rng) const;

  /// True when integrate() is deterministic (panel quadrature throughout).
  virtual bool deterministic_quadrature() const { return false; }
};

// ---------------------------------------------------------------------------
// Concrete spaces
// ---------------------------------------------------------------------------

/// Real line with Lebesgue measure. Sampling measure q is standard Gaussian
/// (scaled) or Cauchy; integration is deterministic panel quadrature when the
/// integrand provides a support window, importance-sampled otherwise.
class LineSpace final : public Space {
public:
  enum class Sampler { Gaussian, Cauchy };
  explicit LineSpace(Sampler s = Sampler::Gaussian, double sampler_scale = 1.0)
      : sampler_(s), scale_(sampler_scale) {}
  Point sample(RngStream& rng) const override;
  double dm_dq(const Point& x) const override;
  double total_mass() const override {
    return std::numeric_limits<double>::infinity();
  }
  std::string describe() const override;
  double integrate(const Integrand& g, const IntegrateOptions& opts,
                   RngStream& rng) const override;

private:
  Sampler sampler_;
  double scale_;
};

/// Circle [0,1) with uniform probability measure (the canonical finite
/// invariant space). The tilted sampler provides an equivalent alternative q.
class CircleSpace final : public Space {
public:
  enum class Sampler { Uniform, Tilted };
  explicit CircleSpace(Sampler s = Sampler::Uniform) : sampler_(s) {}
  Point sample(RngStream& rng) const override;
  double dm_dq(const Point& x) const override;
  double total_mass() const override { return 1.0; }
  std::string describe() const override;
  double integrate(const Integrand& g, const IntegrateOptions& opts,
                   RngStream& rng) const override;
  bool deterministic_quadrature() const override { return true; }

private:
  double q_density(double x) const;
  Sampler sampler_;
};

/// Disjoint union of interval atoms {z} x [0, q_z) with m = sum_z sigma_z Leb.
struct IntervalAtom {
  double weight = 1.0;  // sigma_z
  double period = 1.0;  // q_z
};

class AtomIntervalSpace final : public Space {
public:
  explicit AtomIntervalSpace(std::vector<IntervalAtom> atoms);
  Point sample(RngStream& rng) const override;
  double dm_dq(const Point& x) const override;
  double total_mass() const override { return mass_; }
  std::string describe() const override;
  double integrate(const Integrand& g, const IntegrateOptions& opts,
                   RngStream& rng) const override;
  bool deterministic_quadrature() const override { return true; }
  const std::vector<IntervalAtom>& atoms() const { return atoms_; }

private:
  std::vector<IntervalAtom> atoms_;
  std::vector<double> cum_;
  double mass_;
};

/// Path space of the bilateral simple symmetric walk with counting invariant
/// measure: m = sum_s P_s. Points are (starting site, walk seed). The
/// integration contract uses walk homogeneity: one zero-started trajectory
/// serves every starting site, and integrands report which sites can
/// contribute, so the site sum is exact per trajectory.
class WalkPathSpace final : public Space {
public:
  enum class SitePmf { InverseSquare, Geometric };
  explicit WalkPathSpace(SitePmf pmf = SitePmf::InverseSquare,
                         double geom_p = 0.5)
      : pmf_(pmf), geom_p_(geom_p) {}
  Point sample(RngStream& rng) const override;
  double dm_dq(const Point& x) const override;
  double total_mass() const override {
    return std::numeric_limits<double>::infinity();
  }
  std::string describe() const override;
  double integrate(const Integrand& g, const IntegrateOptions& opts,
                   RngStream& rng) const override;
  std::vector<double> integrate_family(const std::vector<const Integrand*>& gs,
                                       const IntegrateOptions& opts,
                                       RngStream& rng) const override;
  double site_pmf(std::int64_t s) const;
  static std::shared_ptr<Trajectory> make_walk(RngStream rng);

private:
  std::int64_t sample_site(RngStream& rng) const;
  SitePmf pmf_;
  double geom_p_;
};

/// Product of a Gaussian path model and the Lebesgue line: m = P1 x Leb.
/// Points are (trajectory, z). q draws the trajectory from P1 and z from a
/// Gaussian (or Cauchy) proposal; the contract integrates z by panels per
/// sampled trajectory and averages over trajectories.
class PathLineSpace final : public Space {
public:
  enum class ZSampler { Gaussian, Cauchy };
  PathLineSpace(PathModelSpec model, ZSampler zs = ZSampler::Gaussian)
      : model_(model), zsampler_(zs) {}
  Point sample(RngStream& rng) const override;
  double dm_dq(const Point& x) const override;
  double total_mass() const override {
    return std::numeric_limits<double>::infinity();
  }
  std::string describe() const override;
  double integrate(const Integrand& g, const IntegrateOptions& opts,
                   RngStream& rng) const override;
  const PathModelSpec& model() const { return model_; }
  std::shared_ptr<Trajectory> make_traj(RngStream rng, double grid_step) const;

private:
  double z_density(double z) const;
  PathModelSpec model_;
  ZSampler zsampler_;
};

/// Path space of a stationary process with probability control measure
/// (doubly stationary construction). Points are trajectories; q = m.
/// If `mixing_index` is set, each point carries an independent positive
/// stable factor V^(1/2) multiplying the path (sub-stable construction).
class PathSpace final : public Space {
public:
  explicit PathSpace(PathModelSpec model,
                     std::optional<double> mixing_index = {})
      : model_(model), mixing_index_(mixing_index) {}
  Point sample(RngStream& rng) const override;
  double dm_dq(const Point&) const override { return 1.0; }
  double total_mass() const override { return 1.0; }
  std::string describe() const override;
  double integrate(const Integrand& g, const IntegrateOptions& opts,
                   RngStream& rng) const override;
  const PathModelSpec& model() const { return model_; }
  std::shared_ptr<Trajectory> make_traj(RngStream rng, double grid_step) const;

private:
  PathModelSpec model_;
  std::optional<double> mixing_index_;
};

/// Single atom of mass 1 (degenerate constant-kernel space).
class SingleAtomSpace final : public Space {
public:
  Point sample(RngStream&) const override { return Point{}; }
  double dm_dq(const Point&) const override { return 1.0; }
  double total_mass() const override { return 1.0; }
  std::string describe() const override { return "atom"; }
  double integrate(const Integrand& g, const IntegrateOptions&,
                   RngStream&) const override {
    return g(Point{});
  }
  bool deterministic_quadrature() const override { return true; }
};

/// Disjoint union of component spaces with q mixing weights. Component
/// measures add; a point carries its component index in `atom` and the
/// component's own point in the remaining fields (component atoms are not
/// nested, which the shipped catalog never needs).
class UnionSpace final : public Space {
public:
  UnionSpace(std::vector<std::shared_ptr<const Space>> components,
             std::vector<double> q_weights);
  Point sample(RngStream& rng) const override;
  double dm_dq(const Point& x) const override;
  double total_mass() const override;
  std::string describe() const override;
  double integrate(const Integrand& g, const IntegrateOptions& opts,
                   RngStream& rng) const override;
  bool deterministic_quadrature() const override;
  const std::vector<std::shared_ptr<const Space>>& components() const {
    return components_;
  }
  const std::vector<double>& weights() const { return weights_; }

private:
  std::vector<std::shared_ptr<const Space>> components_;
  std::vector<double> weights_;
};

/// Restriction of a sampled integrand to a component (used by UnionSpace and
/// by the decomposition): forwards hints with the component tag applied.
class ComponentIntegrand final : public Integrand {
public:
  ComponentIntegrand(const Integrand& inner, int component)
      : inner_(inner), component_(component) {}
  double operator()(const Point& x) const override {
    Point p = x;
    p.atom = component_;
    return inner_(p);
  }
  std::optional<Interval> line_window() const override {
    return inner_.line_window();
  }
  std::vector<double> line_breakpoints() const override {
    return inner_.line_breakpoints();
  }
  std::vector<double> atom_breakpoints(int atom) const override {
    return inner_.atom_breakpoints(atom);
  }
  std::optional<Interval> z_window(const Point& base) const override {
    return inner_.z_window(base);
  }
  std::vector<double> z_breakpoints(const Point& base) const override {
    return inner_.z_breakpoints(base);
  }
  std::vector<std::int64_t> walk_sites(const Trajectory& t) const override {
    return inner_.walk_sites(t);
  }
  bool site_sum_valid() const override { return inner_.site_sum_valid(); }
  std::optional<Interval> time_window() const override {
    return inner_.time_window();
  }

private:
  const Integrand& inner_;
  int component_;
};

/// Monte Carlo mean of g dm/dq over q-samples, with dyadic-block divergence
/// detection. Shared by the sampling-based contracts.
double importance_mc(const Space& space, const Integrand& g,
                     const IntegrateOptions& opts, RngStream& rng);

/// Composite Gauss-Legendre over [a, b], split at the interior breakpoints
/// and further subdivided to max_width. Exact for integrands that are
/// polynomial (in particular constant) between breakpoints.
double panel_integrate(const std::function<double(double)>& f, double a,
                       double b, std::vector<double> breaks, double max_width);

}  // namespace stableflows::measure
