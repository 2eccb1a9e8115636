#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "odeclass/forcing.hpp"

namespace odeclass::detail {

enum class Op {
  Number,
  Time,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Sin,
  Cos,
  Exp,
  Log,
  Abs,
  Sqrt,
  Phase,
  Pulses,
};

/// B(t) = integral of A over [0, t] for a chirp. Either closed form or
/// quadrature accumulated on a fixed lattice so that the value at t does not
/// depend on evaluation order.
class PhaseIntegral {
 public:
  PhaseIntegral(ForcingExpr amplitude, std::optional<ForcingExpr> closed)
      : amplitude_(std::move(amplitude)), closed_(std::move(closed)) {}

  double operator()(double t) const;
  const ForcingExpr& amplitude() const noexcept { return amplitude_; }
  const std::optional<ForcingExpr>& closed() const noexcept { return closed_; }

 private:
  static constexpr double kLatticeStep = 1.0 / 64.0;
  static constexpr double kPanelTolerance = 1e-13;

  ForcingExpr amplitude_;
  std::optional<ForcingExpr> closed_;
  mutable std::mutex mutex_;
  mutable std::vector<double> lattice_{0.0};
};

struct PulseSpec {
  double start;
  double width;
  double gap;
};

struct Node {
  Op op = Op::Number;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  std::shared_ptr<const PhaseIntegral> phase;
  std::optional<PulseSpec> pulses;
};

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double value);
NodePtr make_time();
NodePtr make_unary(Op op, NodePtr arg);
NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs);

}  // namespace odeclass::detail
