#include "stableflows/measure/trajectory.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace stableflows::measure {

double Trajectory::value_at(double) const {
  throw std::logic_error("trajectory has no real-valued coordinate");
}
std::int64_t Trajectory::site_at(std::int64_t) const {
  throw std::logic_error("trajectory has no integer site coordinate");
}

// ---------------------------------------------------------------------------
// Simple symmetric walk
// ---------------------------------------------------------------------------

WalkTrajectory::WalkTrajectory(RngStream seed_stream)
    : fwd_rng_(seed_stream.substream(0)), bwd_rng_(seed_stream.substream(1)) {}

void WalkTrajectory::extend_forward(std::size_t upto) {
  std::size_t n = fwd_.size();
  fwd_.reserve(upto);
  std::int32_t pos = n == 0 ? 0 : fwd_.back();
  while (n < upto) {
    if (fwd_left_ == 0) {
      fwd_bits_ = fwd_rng_.next_u64();
      fwd_left_ = 64;
    }
    pos += (fwd_bits_ & 1) ? 1 : -1;
    fwd_bits_ >>= 1;
    --fwd_left_;
    fwd_.push_back(pos);
    ++n;
  }
}

void WalkTrajectory::extend_backward(std::size_t upto) {
  std::size_t n = bwd_.size();
  bwd_.reserve(upto);
  std::int32_t pos = n == 0 ? 0 : bwd_.back();
  while (n < upto) {
    if (bwd_left_ == 0) {
      bwd_bits_ = bwd_rng_.next_u64();
      bwd_left_ = 64;
    }
    pos += (bwd_bits_ & 1) ? 1 : -1;
    bwd_bits_ >>= 1;
    --bwd_left_;
    bwd_.push_back(pos);
    ++n;
  }
}

void WalkTrajectory::ensure(double lo, double hi) {
  if (hi > 0) extend_forward(static_cast<std::size_t>(std::ceil(hi)));
  if (lo < 0) extend_backward(static_cast<std::size_t>(std::ceil(-lo)));
}

std::int64_t WalkTrajectory::site_at(std::int64_t n) const {
  if (n == 0) return 0;
  if (n > 0) {
    auto idx = static_cast<std::size_t>(n - 1);
    if (idx >= fwd_.size())
      const_cast<WalkTrajectory*>(this)->extend_forward(idx + 1);
    return fwd_[idx];
  }
  auto idx = static_cast<std::size_t>(-n - 1);
  if (idx >= bwd_.size())
    const_cast<WalkTrajectory*>(this)->extend_backward(idx + 1);
  return bwd_[idx];
}

// ---------------------------------------------------------------------------
// fGn by circulant embedding
// ---------------------------------------------------------------------------

namespace {

struct FgnGeometry {
  std::size_t m = 0;              // circulant size (power of two)
  std::vector<double> sqrt_eig;   // sqrt(lambda_k / m), scaled for synthesis
  fftw_plan plan = nullptr;
  fftw_complex* buf = nullptr;
};

std::mutex g_fgn_mutex;
std::map<std::pair<double, std::pair<double, std::size_t>>,
         std::shared_ptr<FgnGeometry>>
    g_fgn_cache;

double fgn_autocov(double h, double step, std::int64_t k) {
  double a = std::pow(std::fabs(static_cast<double>(k + 1)), 2 * h);
  double b = std::pow(std::fabs(static_cast<double>(k)), 2 * h);
  double c = std::pow(std::fabs(static_cast<double>(k - 1)), 2 * h);
  return 0.5 * std::pow(step, 2 * h) * (a - 2 * b + c);
}

std::shared_ptr<FgnGeometry> fgn_geometry(double h, double step, std::size_t n) {
  std::lock_guard<std::mutex> lock(g_fgn_mutex);
  auto key = std::make_pair(h, std::make_pair(step, n));
  auto it = g_fgn_cache.find(key);
  if (it != g_fgn_cache.end()) return it->second;

  auto geo = std::make_shared<FgnGeometry>();
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;
  geo->m = m;
  geo->buf = fftw_alloc_complex(m);
  geo->plan = fftw_plan_dft_1d(static_cast<int>(m), geo->buf, geo->buf,
                               FFTW_FORWARD, FFTW_ESTIMATE);

  // eigenvalues of the circulant embedding = FFT of the wrapped autocovariance
  for (std::size_t k = 0; k <= m / 2; ++k) {
    geo->buf[k][0] = fgn_autocov(h, step, static_cast<std::int64_t>(k));
    geo->buf[k][1] = 0.0;
  }
  for (std::size_t k = m / 2 + 1; k < m; ++k) {
    geo->buf[k][0] = fgn_autocov(h, step, static_cast<std::int64_t>(m - k));
    geo->buf[k][1] = 0.0;
  }
  fftw_execute(geo->plan);
  geo->sqrt_eig.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    double lam = geo->buf[k][0];
    if (lam < 0) lam = 0;  // clip roundoff; fGn embeddings are nonnegative
    geo->sqrt_eig[k] = std::sqrt(lam / static_cast<double>(m));
  }
  g_fgn_cache.emplace(key, geo);
  return geo;
}

}  // namespace

std::vector<double> sample_fgn(double hurst, double step, std::size_t n,
                               RngStream& rng) {
  auto geo = fgn_geometry(hurst, step, n);
  const std::size_t m = geo->m;
  std::vector<double> re(m), im(m);
  // Hermitian-symmetric Gaussian spectrum: the inverse transform is real fGn.
  re[0] = geo->sqrt_eig[0] * std::sqrt(static_cast<double>(m)) * rng.normal();
  im[0] = 0.0;
  re[m / 2] =
      geo->sqrt_eig[m / 2] * std::sqrt(static_cast<double>(m)) * rng.normal();
  im[m / 2] = 0.0;
  const double half = std::sqrt(0.5 * static_cast<double>(m));
  for (std::size_t k = 1; k < m / 2; ++k) {
    double a = rng.normal(), b = rng.normal();
    re[k] = geo->sqrt_eig[k] * half * a;
    im[k] = geo->sqrt_eig[k] * half * b;
    re[m - k] = re[k];
    im[m - k] = -im[k];
  }
  std::vector<double> out(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  {
    std::lock_guard<std::mutex> lock(g_fgn_mutex);
    for (std::size_t k = 0; k < m; ++k) {
      geo->buf[k][0] = re[k];
      geo->buf[k][1] = im[k];
    }
    fftw_execute(geo->plan);
    for (std::size_t k = 0; k < n; ++k) out[k] = geo->buf[k][0] * norm;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian path models
// ---------------------------------------------------------------------------

GaussianTrajectory::GaussianTrajectory(PathModelSpec spec, RngStream seed_stream)
    : spec_(spec),
      fwd_rng_(seed_stream.substream(0)),
      bwd_rng_(seed_stream.substream(1)),
      init_rng_(seed_stream.substream(2)) {}

void GaussianTrajectory::ensure(double lo, double hi) {
  const double step = spec_.grid_step;
  auto lo_idx = static_cast<std::int64_t>(std::floor(lo / step - 1e-9));
  auto hi_idx = static_cast<std::int64_t>(std::ceil(hi / step + 1e-9));
  if (lo_idx > 0) lo_idx = 0;
  if (hi_idx < 0) hi_idx = 0;
  if (initialized_ && lo_idx >= lo_idx_ && hi_idx <= hi_idx_) return;
  if (spec_.model == PathModel::Fbm) {
    if (initialized_)
      throw std::logic_error(
          "fbm trajectory window cannot grow after first materialization");
    generate_fbm(lo_idx, hi_idx);
    initialized_ = true;
    return;
  }
  extend(lo_idx, hi_idx);
  initialized_ = true;
}

void GaussianTrajectory::generate_fbm(std::int64_t lo_idx, std::int64_t hi_idx) {
  const double step = spec_.grid_step;
  const auto n = static_cast<std::size_t>(hi_idx - lo_idx);
  lo_idx_ = lo_idx;
  hi_idx_ = hi_idx;
  values_.assign(n + 1, 0.0);
  if (n == 0) return;
  RngStream rng = fwd_rng_;
  std::vector<double> incr = sample_fgn(spec_.hurst, step, n, rng);
  // cumulate, then re-pin so the value at grid index 0 is exactly 0
  double acc = 0.0;
  values_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += incr[i];
    values_[i + 1] = acc;
  }
  double pivot = values_[static_cast<std::size_t>(-lo_idx)];
  for (auto& v : values_) v -= pivot;
}

void GaussianTrajectory::extend(std::int64_t lo_idx, std::int64_t hi_idx) {
  const double step = spec_.grid_step;
  if (!initialized_) {
    lo_idx_ = 0;
    hi_idx_ = 0;
    switch (spec_.model) {
      case PathModel::Ou:
        y0_ = init_rng_.normal();  // stationary start
        break;
      default:
        y0_ = 0.0;
    }
    values_.assign(1, y0_);
  }
  if (hi_idx > hi_idx_) {
    values_.reserve(static_cast<std::size_t>(hi_idx - lo_idx_) + 1);
    double prev = values_.back();
    for (std::int64_t i = hi_idx_ + 1; i <= hi_idx; ++i) {
      double z = fwd_rng_.normal();
      double v = 0.0;
      switch (spec_.model) {
        case PathModel::Brownian:
          v = prev + std::sqrt(step) * z;
          break;
        case PathModel::DriftBrownian:
          v = prev + spec_.drift * step + std::sqrt(step) * z;
          break;
        case PathModel::Ou: {
          double phi = std::exp(-spec_.ou_decay * step);
          v = phi * prev + std::sqrt(1.0 - phi * phi) * z;
          break;
        }
        case PathModel::Fbm:
          break;  // handled elsewhere
      }
      values_.push_back(v);
      prev = v;
    }
    hi_idx_ = hi_idx;
  }
  if (lo_idx < lo_idx_) {
    std::vector<double> front;
    front.reserve(static_cast<std::size_t>(lo_idx_ - lo_idx));
    double prev = values_.front();
    for (std::int64_t i = lo_idx_ - 1; i >= lo_idx; --i) {
      double z = bwd_rng_.normal();
      double v = 0.0;
      switch (spec_.model) {
        case PathModel::Brownian:
          v = prev + std::sqrt(step) * z;  // time-reversed Brownian arm
          break;
        case PathModel::DriftBrownian:
          v = prev - spec_.drift * step + std::sqrt(step) * z;
          break;
        case PathModel::Ou: {
          double phi = std::exp(-spec_.ou_decay * step);
          v = phi * prev + std::sqrt(1.0 - phi * phi) * z;  // reversible
          break;
        }
        case PathModel::Fbm:
          break;
      }
      front.push_back(v);
      prev = v;
    }
    values_.insert(values_.begin(), front.rbegin(), front.rend());
    lo_idx_ = lo_idx;
  }
}

double GaussianTrajectory::value_at(double t) const {
  const double step = spec_.grid_step;
  double fidx = t / step;
  auto idx = static_cast<std::int64_t>(std::llround(fidx));
  if (std::fabs(fidx - static_cast<double>(idx)) > 1e-6)
    throw std::invalid_argument("trajectory query off the grid");
  if (!initialized_ || idx < lo_idx_ || idx > hi_idx_) {
    auto* self = const_cast<GaussianTrajectory*>(this);
    self->ensure(std::min(t, 0.0), std::max(t, 0.0));
  }
  return values_[static_cast<std::size_t>(idx - lo_idx_)];
}

}  // namespace stableflows::measure
