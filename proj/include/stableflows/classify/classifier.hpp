#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stableflows/classify/weights.hpp"
#include "stableflows/kernels/kernel.hpp"

namespace stableflows::classify {

using kernels::KernelSpec;
using measure::Point;

enum class PositiveNull { Positive, Null, Undecided };
enum class ConsDiss { Conservative, Dissipative, Undecided };

std::string to_string(PositiveNull v);
std::string to_string(ConsDiss v);

struct ClassifyConfig {
  // horizon/grid layout
  double h_max_continuous = 1e4;
  std::int64_t h_max_discrete = 1LL << 18;
  double step_continuous = 0.05;
  int n_dyadic = 14;  // dyadic horizon marks below H_max

  // Verdict thresholds on the scale-invariant tail-mass ratio
  //   r = (S(H) - S(H / 2^last_doublings)) / S(H):
  // converged when r <= theta_conv (for some weight), still growing when
  // r >= theta_div (for all divergence-test weights).
  double theta_conv = 0.03;
  double theta_div = 0.06;
  int last_doublings = 2;

  std::size_t n_points = 200;
};

/// Dyadic partial sums of one weighted trajectory functional at one point.
struct HorizonSums {
  std::string weight_label;
  std::vector<double> horizons;  // H_k, increasing
  std::vector<double> sums;      // S(H_k), nondecreasing
  double tail_ratio(int last_doublings) const;
};

/// Per-point classification outcome.
struct PointVerdict {
  std::string point_id;
  PositiveNull positive_null = PositiveNull::Undecided;
  ConsDiss cons_diss = ConsDiss::Undecided;
  std::vector<HorizonSums> per_weight;  // shipped weights, then unweighted
  std::vector<double> final_sums;       // S(H_max) per entry of per_weight
  bool zero_orbit = false;              // kernel vanished along the whole orbit
};

struct Fraction {
  double value = 0.0;
  double half_width = 0.0;  // 95% binomial
};

struct ClassificationReport {
  Fraction positive, null_frac, conservative, dissipative, cons_null;
  double undecided_fraction = 0.0;
  std::vector<PointVerdict> per_point;
  std::vector<std::string> weight_labels;  // matches per_weight layout
  std::string notes;
  std::size_t n_points = 0;
};

/// Partial sums S_H(x) = sum/integral over |t| <= H of w(t) |f_t(x)|^alpha,
/// at the given increasing horizons.
std::vector<std::pair<double, double>> weighted_trajectory_sums(
    const KernelSpec& k, const Point& x, const WeightFunction& w,
    const std::vector<double>& horizons, const ClassifyConfig& cfg);

PointVerdict classify_point(const KernelSpec& k, const Point& x,
                            const ClassifyConfig& cfg);

ClassificationReport classify_process(const KernelSpec& k, std::size_t n_points,
                                      const ClassifyConfig& cfg, RngStream& rng);

/// Dyadic horizon marks for the kernel's time domain.
std::vector<double> dyadic_horizons(const KernelSpec& k,
                                    const ClassifyConfig& cfg);

}  // namespace stableflows::classify
