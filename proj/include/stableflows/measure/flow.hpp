#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stableflows/core/rng.hpp"
#include "stableflows/measure/point.hpp"
#include "stableflows/measure/space.hpp"

namespace stableflows::measure {

enum class FlowClass { Dissipative, ConservativeNull, Positive, Unknown };

std::string to_string(FlowClass c);

/// A measurable nonsingular flow: a group of maps phi_t with
/// phi_0 = id, phi_{t+s} = phi_t . phi_s, and m . phi_t ~ m.
class Flow {
public:
  virtual ~Flow() = default;
  virtual Point apply(double t, const Point& x) const = 0;
  /// d(m . phi_t)/dm evaluated at x.
  virtual double rn_derivative(double t, const Point& x) const { return 1.0; }
  /// Declared ground truth for testing; the classification never reads it.
  virtual FlowClass metadata() const { return FlowClass::Unknown; }
  /// Set when an equivalent invariant probability measure exists.
  virtual bool invariant_probability() const { return false; }
  /// Preimage of a coordinate interval under phi_t, for line spaces whose
  /// deterministic quadrature needs to pull support windows back.
  virtual std::optional<Interval> pullback(double t, const Interval& w) const {
    (void)t;
    (void)w;
    return {};
  }
  virtual std::string describe() const = 0;
};

/// +-1 valued cocycle: a_0 = 1, a_{t+s}(x) = a_s(x) a_t(phi_s(x)).
class Cocycle {
public:
  virtual ~Cocycle() = default;
  virtual double eval(double t, const Point& x) const = 0;
};

class TrivialCocycle final : public Cocycle {
public:
  double eval(double, const Point&) const override { return 1.0; }
};

/// x -> x + t on the line (Lebesgue translation; measure preserving).
class TranslationFlow final : public Flow {
public:
  Point apply(double t, const Point& x) const override {
    Point p = x;
    p.x += t;
    return p;
  }
  FlowClass metadata() const override { return FlowClass::Dissipative; }
  std::optional<Interval> pullback(double t, const Interval& w) const override {
    return Interval{w.first - t, w.second - t};
  }
  std::string describe() const override { return "translation"; }
};

/// x -> {x + t rate} on the circle [0,1); preserves the uniform probability.
class RotationFlow final : public Flow {
public:
  explicit RotationFlow(double rate);
  Point apply(double t, const Point& x) const override;
  FlowClass metadata() const override { return FlowClass::Positive; }
  bool invariant_probability() const override { return true; }
  std::string describe() const override { return "rotation"; }
  double rate() const { return rate_; }

private:
  double rate_;
};

/// Per-atom circular motion v -> {v + s_z t} mod q_z on interval atoms.
struct AtomMotion {
  double period = 1.0;  // q_z
  double speed = 1.0;   // s_z, nonzero
};

class AtomRotationFlow final : public Flow {
public:
  explicit AtomRotationFlow(std::vector<AtomMotion> motions);
  Point apply(double t, const Point& x) const override;
  FlowClass metadata() const override { return FlowClass::Positive; }
  bool invariant_probability() const override { return true; }
  std::string describe() const override { return "atom-rotation"; }
  const std::vector<AtomMotion>& motions() const { return motions_; }

private:
  std::vector<AtomMotion> motions_;
};

/// Shift along a trajectory: the point's time offset advances by t.
/// Measure preservation holds for every shipped path model.
class PathShiftFlow final : public Flow {
public:
  explicit PathShiftFlow(FlowClass declared) : declared_(declared) {}
  Point apply(double t, const Point& x) const override {
    Point p = x;
    p.x += t;
    return p;
  }
  FlowClass metadata() const override { return declared_; }
  bool invariant_probability() const override {
    return declared_ == FlowClass::Positive;
  }
  std::string describe() const override { return "path-shift"; }

private:
  FlowClass declared_;
};

class IdentityFlow final : public Flow {
public:
  Point apply(double, const Point& x) const override { return x; }
  FlowClass metadata() const override { return FlowClass::Positive; }
  bool invariant_probability() const override { return true; }
  std::optional<Interval> pullback(double, const Interval& w) const override {
    return w;
  }
  std::string describe() const override { return "identity"; }
};

/// x -> e^t x on the line: nonsingular but not measure preserving,
/// d(m.phi_t)/dm = e^t. Exercises the Radon-Nikodym plumbing.
class ScalingFlow final : public Flow {
public:
  Point apply(double t, const Point& x) const override {
    Point p = x;
    p.x *= std::exp(t);
    return p;
  }
  double rn_derivative(double t, const Point&) const override {
    return std::exp(t);
  }
  FlowClass metadata() const override { return FlowClass::Dissipative; }
  std::optional<Interval> pullback(double t, const Interval& w) const override {
    double e = std::exp(-t);
    return Interval{w.first * e, w.second * e};
  }
  std::string describe() const override { return "scaling"; }
};

/// Componentwise flow on a union space.
class UnionFlow final : public Flow {
public:
  explicit UnionFlow(std::vector<std::shared_ptr<const Flow>> parts)
      : parts_(std::move(parts)) {}
  Point apply(double t, const Point& x) const override {
    Point p = parts_[static_cast<std::size_t>(x.atom)]->apply(t, x);
    p.atom = x.atom;
    return p;
  }
  double rn_derivative(double t, const Point& x) const override {
    return parts_[static_cast<std::size_t>(x.atom)]->rn_derivative(t, x);
  }
  std::string describe() const override { return "union"; }
  const std::vector<std::shared_ptr<const Flow>>& parts() const {
    return parts_;
  }

private:
  std::vector<std::shared_ptr<const Flow>> parts_;
};

/// Sign cocycle of the cyclic construction: b_z to the power of the number
/// of full periods wrapped, a_t(z, v) = b_z^[ (v + s_z t) / q_z ].
class AtomPowerCocycle final : public Cocycle {
public:
  AtomPowerCocycle(std::vector<int> signs, std::vector<AtomMotion> motions);
  double eval(double t, const Point& x) const override;

private:
  std::vector<int> signs_;
  std::vector<AtomMotion> motions_;
};

/// Parity coboundary on walk paths: a_t(x) = g(x_t) g(x_0), g(s) = (-1)^s.
class WalkParityCocycle final : public Cocycle {
public:
  double eval(double t, const Point& x) const override;
};

/// Componentwise cocycle on a union space.
class UnionCocycle final : public Cocycle {
public:
  explicit UnionCocycle(std::vector<std::shared_ptr<const Cocycle>> parts)
      : parts_(std::move(parts)) {}
  double eval(double t, const Point& x) const override {
    return parts_[static_cast<std::size_t>(x.atom)]->eval(t, x);
  }

private:
  std::vector<std::shared_ptr<const Cocycle>> parts_;
};

/// Residual report of the flow-axiom property checks over random triples
/// (t, s, x): group law, identity, Radon-Nikodym chain rule, cocycle law.
struct FlowAxiomReport {
  double max_group_residual = 0.0;
  double max_identity_residual = 0.0;
  double max_chain_rule_residual = 0.0;
  double max_cocycle_residual = 0.0;
  std::size_t samples = 0;
  double worst() const {
    return std::max(std::max(max_group_residual, max_identity_residual),
                    std::max(max_chain_rule_residual, max_cocycle_residual));
  }
};

/// Samples x from the space and t, s uniformly from [-t_range, t_range]
/// (rounded to integers for discrete-time flows).
FlowAxiomReport check_flow_axioms(const Flow& flow, const Cocycle& cocycle,
                                  const Space& space, std::size_t samples,
                                  RngStream& rng, double t_range = 50.0,
                                  bool discrete_time = false);

}  // namespace stableflows::measure
