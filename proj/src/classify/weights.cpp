#include "stableflows/classify/weights.hpp"

#include <cmath>

namespace stableflows::classify {

namespace {
WeightFunction power_weight(double p) {
  return {"w_p" + std::to_string(p).substr(0, 4),
          [p](double t) { return std::pow(1.0 + std::fabs(t), -p); }};
}
}  // namespace

std::vector<WeightFunction> shipped_weights(const TimeDomain& td) {
  std::vector<WeightFunction> ws;
  ws.push_back(power_weight(0.5));
  ws.push_back(power_weight(0.75));
  ws.push_back(power_weight(1.0));
  if (!td.discrete()) {
    ws.push_back({"w_log", [](double t) {
                    double a = std::fabs(t);
                    return 1.0 / ((1.0 + a) * std::log(std::exp(1.0) + a));
                  }});
  }
  return ws;
}

double half_line_mass(const WeightFunction& w, double T, bool discrete) {
  double acc = 0.0;
  if (discrete) {
    for (double n = 0; n <= T; n += 1.0) acc += w.eval(n);
    return acc;
  }
  // trapezoid at a resolution fine enough for the monotone weights used here
  const double step = T <= 1e3 ? 0.01 : T / 1e5;
  double prev = w.eval(0.0);
  for (double t = step; t <= T; t += step) {
    double cur = w.eval(t);
    acc += 0.5 * (prev + cur) * step;
    prev = cur;
  }
  return acc;
}

}  // namespace stableflows::classify
