#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stableflows/core/rng.hpp"
#include "stableflows/core/types.hpp"
#include "stableflows/measure/flow.hpp"
#include "stableflows/measure/space.hpp"

namespace stableflows::kernels {

using measure::Interval;
using measure::Point;

/// Structural hints the integration contracts exploit. Only the fields
/// matching the kernel's space kind are read; a union space reads each
/// field for its component of that kind.
struct KernelHints {
  std::optional<Interval> line_support;  // support of f on the line
  std::vector<double> line_breaks;       // discontinuities of f on the line
  std::optional<Interval> z_support;     // support of the profile in z
  std::vector<double> z_breaks;
  std::vector<std::int64_t> cylinder_sites;    // walk: f != 0 needs x_0 here
  std::vector<std::vector<double>> atom_breaks;  // per-atom discontinuities
};

/// A stationary-kernel representation: base function f on (space, m),
/// moved by a nonsingular flow and signed by a cocycle,
///   f_t(x) = a_t(x) (d(m.phi_t)/dm (x))^(1/alpha) f(phi_t(x)).
struct KernelSpec {
  StabilityIndex alpha;
  TimeDomain time_domain;
  std::shared_ptr<const measure::Space> space;
  std::shared_ptr<const measure::Flow> flow;
  std::shared_ptr<const measure::Cocycle> cocycle;
  std::function<double(const Point&)> f;
  KernelHints hints;
  measure::IntegrateOptions quad;
  std::string label;
};

/// f_t(x).
double eval_kernel(const KernelSpec& k, double t, const Point& x);

/// out[i] = f_{t0 + i dt}(x); materializes the trajectory window first.
void eval_grid(const KernelSpec& k, const Point& x, double t0, double dt,
               std::size_t n, double* out);

/// |sum_i c_i f_{t_i}|^alpha as a space integrand, with the hints pulled
/// back through the flow at the combination's times.
class CombinationIntegrand final : public measure::Integrand {
public:
  CombinationIntegrand(const KernelSpec& k, std::vector<Coeff> coeffs);
  double operator()(const Point& x) const override;
  std::optional<Interval> line_window() const override;
  std::vector<double> line_breakpoints() const override;
  std::vector<double> atom_breakpoints(int atom) const override;
  std::optional<Interval> z_window(const Point& base) const override;
  std::vector<double> z_breakpoints(const Point& base) const override;
  std::vector<std::int64_t> walk_sites(
      const measure::Trajectory& traj) const override;
  bool site_sum_valid() const override {
    return !k_.hints.cylinder_sites.empty();
  }
  std::optional<Interval> time_window() const override;

private:
  const KernelSpec& k_;
  std::vector<Coeff> coeffs_;
};

/// Scale parameter of sum_i c_i X(t_i): (integral |sum c_i f_{t_i}|^alpha dm)^(1/alpha),
/// computed under the space's quadrature contract. Empty combinations give 0.
StableScale scale_of_combination(const KernelSpec& k,
                                 const std::vector<Coeff>& coeffs,
                                 RngStream& rng);

/// ||f_t||_alpha; equals the t = 0 value for every t (stationarity).
StableScale kernel_norm(const KernelSpec& k, double t, RngStream& rng);

struct NormBatchOptions {
  bool shared_points = false;  // reuse one point sample across combinations
  std::size_t mc_samples = 0;  // 0: use the kernel's quad default
};

/// ||sum c X||^alpha (the alpha-th power, not the root) for each combination.
std::vector<double> norms_alpha_of_combinations(
    const KernelSpec& k, const std::vector<std::vector<Coeff>>& combos,
    const NormBatchOptions& opts, RngStream& rng);

/// Monte Carlo fraction of q-mass seeing the kernel somewhere on the time
/// window: P_q( sup_{t in grid} |f_t(x)| > 0 ).
double support_fraction(const KernelSpec& k, Interval time_window,
                        std::size_t samples, double step, RngStream& rng);

}  // namespace stableflows::kernels
