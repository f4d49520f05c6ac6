#include "stableflows/classify/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "stableflows/core/parallel.hpp"
#include "stableflows/core/vec.hpp"

namespace stableflows::classify {

std::string to_string(PositiveNull v) {
  switch (v) {
    case PositiveNull::Positive:
      return "positive";
    case PositiveNull::Null:
      return "null";
    default:
      return "undecided";
  }
}

std::string to_string(ConsDiss v) {
  switch (v) {
    case ConsDiss::Conservative:
      return "conservative";
    case ConsDiss::Dissipative:
      return "dissipative";
    default:
      return "undecided";
  }
}

double HorizonSums::tail_ratio(int last_doublings) const {
  if (sums.empty()) return 0.0;
  double total = sums.back();
  if (total <= 0.0) return 0.0;
  int k = static_cast<int>(sums.size()) - 1 - last_doublings;
  double earlier = k >= 0 ? sums[static_cast<std::size_t>(k)] : 0.0;
  return (total - earlier) / total;
}

std::vector<double> dyadic_horizons(const KernelSpec& k,
                                    const ClassifyConfig& cfg) {
  std::vector<double> rev;
  if (k.time_domain.discrete()) {
    std::int64_t h = cfg.h_max_discrete;
    for (int i = 0; i <= cfg.n_dyadic && h >= 1; ++i, h /= 2)
      rev.push_back(static_cast<double>(h));
  } else {
    double h = cfg.h_max_continuous;
    for (int i = 0; i <= cfg.n_dyadic && h > 2.0 * cfg.step_continuous; ++i, h /= 2)
      rev.push_back(h);
  }
  return {rev.rbegin(), rev.rend()};
}

namespace {

/// |f_t(x)|^alpha sampled on the bilateral grid, plus the per-weight partial
/// sums at the dyadic marks. The evaluation buffer is shared by all weights.
struct TrajectoryProfile {
  std::vector<double> horizons;
  std::vector<HorizonSums> per_weight;  // shipped weights then unweighted
};

TrajectoryProfile evaluate_profile(const KernelSpec& k, const Point& x,
                                   const ClassifyConfig& cfg) {
  TrajectoryProfile prof;
  prof.horizons = dyadic_horizons(k, cfg);
  const bool discrete = k.time_domain.discrete();
  const double step = discrete ? 1.0 : cfg.step_continuous;
  const double h_max = prof.horizons.back();
  const auto n_side = static_cast<std::size_t>(std::llround(h_max / step));

  // grid t_i = -H + i*step, i = 0 .. 2*n_side
  const std::size_t n_grid = 2 * n_side + 1;
  std::vector<double> vals(n_grid);
  kernels::eval_grid(k, x, -h_max, step, n_grid, vals.data());
  std::vector<double> pow_vals(n_grid);
  vec::abs_pow(vals.data(), n_grid, k.alpha.value(), pow_vals.data());

  auto weights = shipped_weights(k.time_domain);
  weights.push_back({"w_1(unweighted)", [](double) { return 1.0; }});

  // quadrature coefficient: counting measure on Z, left-Riemann step on R
  const double measure_coef = discrete ? 1.0 : step;

  for (const auto& w : weights) {
    HorizonSums hz;
    hz.weight_label = w.label;
    hz.horizons = prof.horizons;
    hz.sums.resize(prof.horizons.size());

    std::vector<double> coef(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i) {
      double t = -h_max + step * static_cast<double>(i);
      coef[i] = w.eval(t) * measure_coef;
    }
    double acc = 0.0;
    std::size_t lo = n_side, hi = n_side;  // indices covered so far (center)
    acc += coef[n_side] * pow_vals[n_side];
    for (std::size_t m = 0; m < prof.horizons.size(); ++m) {
      auto reach = static_cast<std::size_t>(
          std::llround(prof.horizons[m] / step));
      std::size_t new_lo = n_side - reach, new_hi = n_side + reach;
      if (new_lo < lo)
        acc += vec::dot(coef.data() + new_lo, pow_vals.data() + new_lo,
                        lo - new_lo);
      if (new_hi > hi)
        acc += vec::dot(coef.data() + hi + 1, pow_vals.data() + hi + 1,
                        new_hi - hi);
      lo = new_lo;
      hi = new_hi;
      hz.sums[m] = acc;
    }
    prof.per_weight.push_back(std::move(hz));
  }
  return prof;
}

}  // namespace

std::vector<std::pair<double, double>> weighted_trajectory_sums(
    const KernelSpec& k, const Point& x, const WeightFunction& w,
    const std::vector<double>& horizons, const ClassifyConfig& cfg) {
  const bool discrete = k.time_domain.discrete();
  const double step = discrete ? 1.0 : cfg.step_continuous;
  const double h_max = horizons.back();
  const auto n_side = static_cast<std::size_t>(std::llround(h_max / step));
  const std::size_t n_grid = 2 * n_side + 1;
  std::vector<double> vals(n_grid);
  kernels::eval_grid(k, x, -h_max, step, n_grid, vals.data());
  std::vector<double> pow_vals(n_grid);
  vec::abs_pow(vals.data(), n_grid, k.alpha.value(), pow_vals.data());
  const double measure_coef = discrete ? 1.0 : step;

  std::vector<std::pair<double, double>> out;
  double acc = pow_vals[n_side] * w.eval(0.0) * measure_coef;
  std::size_t lo = n_side, hi = n_side;
  for (double h : horizons) {
    auto reach = static_cast<std::size_t>(std::llround(h / step));
    std::size_t new_lo = n_side - reach, new_hi = n_side + reach;
    for (std::size_t i = new_lo; i < lo; ++i)
      acc += w.eval(-h_max + step * static_cast<double>(i)) * measure_coef *
             pow_vals[i];
    for (std::size_t i = hi + 1; i <= new_hi; ++i)
      acc += w.eval(-h_max + step * static_cast<double>(i)) * measure_coef *
             pow_vals[i];
    lo = new_lo;
    hi = new_hi;
    out.emplace_back(h, acc);
  }
  return out;
}

namespace {

PointVerdict verdict_from_profile(const KernelSpec& k, TrajectoryProfile prof,
                                  const ClassifyConfig& cfg) {
  PointVerdict v;
  const std::size_t n_w = prof.per_weight.size();  // shipped + unweighted
  const auto& unweighted = prof.per_weight.back();

  v.final_sums.resize(n_w);
  for (std::size_t i = 0; i < n_w; ++i) v.final_sums[i] = prof.per_weight[i].sums.back();

  if (unweighted.sums.back() <= 0.0) {
    // the kernel is invisible from this point at every tested horizon
    v.zero_orbit = true;
    v.per_weight = std::move(prof.per_weight);
    return v;
  }

  bool any_converged = false;
  bool all_growing = true;
  for (std::size_t i = 0; i + 1 < n_w; ++i) {
    const auto& hz = prof.per_weight[i];
    double r = hz.tail_ratio(cfg.last_doublings);
    if (hz.sums.back() > 0.0 && r <= cfg.theta_conv) any_converged = true;
    // the log-corrected weight is too slow to certify growth; skip it there
    bool divergence_witness = hz.weight_label.rfind("w_log", 0) != 0;
    if (divergence_witness && !(r >= cfg.theta_div)) all_growing = false;
  }
  double r1 = unweighted.tail_ratio(cfg.last_doublings);

  if (any_converged)
    v.positive_null = PositiveNull::Null;
  else if (all_growing && r1 >= cfg.theta_div)
    v.positive_null = PositiveNull::Positive;

  if (r1 <= cfg.theta_conv)
    v.cons_diss = ConsDiss::Dissipative;
  else if (r1 >= cfg.theta_div)
    v.cons_diss = ConsDiss::Conservative;

  // a convergent unweighted sum makes every weighted sum convergent
  if (v.cons_diss == ConsDiss::Dissipative) v.positive_null = PositiveNull::Null;

  v.per_weight = std::move(prof.per_weight);
  return v;
}

}  // namespace

PointVerdict classify_point(const KernelSpec& k, const Point& x,
                            const ClassifyConfig& cfg) {
  return verdict_from_profile(k, evaluate_profile(k, x, cfg), cfg);
}

ClassificationReport classify_process(const KernelSpec& k, std::size_t n_points,
                                      const ClassifyConfig& cfg,
                                      RngStream& rng) {
  if (n_points == 0) throw std::invalid_argument("classify_process: n_points >= 1");
  ClassificationReport rep;
  rep.n_points = n_points;
  for (const auto& w : shipped_weights(k.time_domain))
    rep.weight_labels.push_back(w.label);
  rep.weight_labels.push_back("w_1(unweighted)");
  rep.notes =
      "weights are nonincreasing in |t| with divergent half-line mass; "
      "verdicts use scale-invariant tail-mass ratios at dyadic horizons";

  rep.per_point.resize(n_points);
  parallel_for(n_points, [&](std::size_t i) {
    RngStream sub = rng.substream(i);
    Point x = k.space->sample(sub);
    PointVerdict v = classify_point(k, x, cfg);
    v.point_id = "p" + std::to_string(i);
    rep.per_point[i] = std::move(v);
  });

  double n = static_cast<double>(n_points);
  std::size_t n_pos = 0, n_null = 0, n_cons = 0, n_diss = 0, n_cn = 0,
              n_und = 0;
  for (const auto& v : rep.per_point) {
    bool und = false;
    if (v.positive_null == PositiveNull::Positive)
      ++n_pos;
    else if (v.positive_null == PositiveNull::Null)
      ++n_null;
    else
      und = true;
    if (v.cons_diss == ConsDiss::Conservative)
      ++n_cons;
    else if (v.cons_diss == ConsDiss::Dissipative)
      ++n_diss;
    else
      und = true;
    if (v.cons_diss == ConsDiss::Conservative &&
        v.positive_null == PositiveNull::Null)
      ++n_cn;
    if (und) ++n_und;
  }
  auto frac = [n](std::size_t c) {
    double p = static_cast<double>(c) / n;
    return Fraction{p, 1.96 * std::sqrt(std::max(p * (1 - p), 1e-12) / n)};
  };
  rep.positive = frac(n_pos);
  rep.null_frac = frac(n_null);
  rep.conservative = frac(n_cons);
  rep.dissipative = frac(n_diss);
  rep.cons_null = frac(n_cn);
  rep.undecided_fraction = static_cast<double>(n_und) / n;
  return rep;
}

}  // namespace stableflows::classify
