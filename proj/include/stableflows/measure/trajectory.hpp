#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "stableflows/core/rng.hpp"

namespace stableflows::measure {

/// A lazily materialized random trajectory identified by a seed.
/// Values are generated over requested windows and cached; a trajectory
/// object is confined to one worker at a time.
class Trajectory {
public:
  virtual ~Trajectory() = default;

  /// Materialize values covering [lo, hi] (in trajectory time units).
  virtual void ensure(double lo, double hi) = 0;

  /// Real-valued path models; t must be a multiple of the grid step.
  virtual double value_at(double t) const;

  /// Integer site models (random walks).
  virtual std::int64_t site_at(std::int64_t n) const;

  virtual double grid_step() const { return 1.0; }
};

/// Bilateral simple symmetric random walk on Z started at site 0.
/// The backward arm is an independent walk (the chain is reversible with
/// respect to counting measure, so this is the bilateral extension).
class WalkTrajectory final : public Trajectory {
public:
  explicit WalkTrajectory(RngStream seed_stream);
  void ensure(double lo, double hi) override;
  std::int64_t site_at(std::int64_t n) const override;

private:
  void extend_forward(std::size_t upto);
  void extend_backward(std::size_t upto);
  RngStream fwd_rng_;
  RngStream bwd_rng_;
  std::vector<std::int32_t> fwd_;  // positions at times 1..n
  std::vector<std::int32_t> bwd_;  // positions at times -1..-n
  std::uint64_t fwd_bits_ = 0, bwd_bits_ = 0;
  int fwd_left_ = 0, bwd_left_ = 0;
};

enum class PathModel { Brownian, Fbm, Ou, DriftBrownian };

struct PathModelSpec {
  PathModel model = PathModel::Brownian;
  double hurst = 0.5;        // Fbm
  double ou_decay = 1.0;     // Ou: corr(t) = exp(-ou_decay*|t|)
  double drift = 0.0;        // DriftBrownian
  double grid_step = 1.0;
};

/// Gaussian path models on a uniform grid. Brownian / drifted Brownian and
/// the exponential-correlation stationary model extend their windows on
/// demand; fractional Brownian motion is generated in one shot by circulant
/// embedding of the increment covariance (exact in law), so its first
/// ensure() must cover every later query.
class GaussianTrajectory final : public Trajectory {
public:
  GaussianTrajectory(PathModelSpec spec, RngStream seed_stream);
  void ensure(double lo, double hi) override;
  double value_at(double t) const override;
  double grid_step() const override { return spec_.grid_step; }
  const PathModelSpec& spec() const { return spec_; }

private:
  void extend(std::int64_t lo_idx, std::int64_t hi_idx);
  void generate_fbm(std::int64_t lo_idx, std::int64_t hi_idx);
  PathModelSpec spec_;
  RngStream fwd_rng_, bwd_rng_, init_rng_;
  bool initialized_ = false;
  std::int64_t lo_idx_ = 0, hi_idx_ = -1;  // inclusive grid index range
  std::vector<double> values_;             // index i -> value at (lo_idx_+i)*step
  double y0_ = 0.0;
};

/// fGn sample of length n for Hurst index H and grid step, by circulant
/// embedding (eigenvalues and FFT plans are cached per geometry).
std::vector<double> sample_fgn(double hurst, double step, std::size_t n,
                               RngStream& rng);

}  // namespace stableflows::measure
