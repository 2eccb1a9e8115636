#include "odeclass/forcing.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "forcing_node.hpp"
#include "odeclass/quadrature.hpp"

namespace odeclass {
namespace detail {

NodePtr make_number(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Number;
  n->value = value;
  return n;
}

NodePtr make_time() {
  static const NodePtr t = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::Time;
    return n;
  }();
  return t;
}

NodePtr make_unary(Op op, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(arg);
  return n;
}

NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

double PhaseIntegral::operator()(double t) const {
  if (closed_) return (*closed_)(t);
  if (t <= 0.0) return 0.0;
  const auto panel = static_cast<std::size_t>(std::floor(t / kLatticeStep));
  const auto integrand = [this](double s) { return amplitude_(s); };
  double base = 0.0;
  {
    std::lock_guard lock(mutex_);
    while (lattice_.size() <= panel) {
      const double lo = static_cast<double>(lattice_.size() - 1) * kLatticeStep;
      lattice_.push_back(lattice_.back() +
                         gauss_kronrod(integrand, lo, lo + kLatticeStep, kPanelTolerance));
    }
    base = lattice_[panel];
  }
  const double lo = static_cast<double>(panel) * kLatticeStep;
  return base + gauss_kronrod(integrand, lo, t, kPanelTolerance);
}

}  // namespace detail

using detail::Node;
using detail::NodePtr;
using detail::Op;

namespace {

struct NotPrintable {};

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), std::abs(v));
  std::string digits(buf, end);
  return std::signbit(v) ? "(-" + digits + ")" : digits;
}

const char* function_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Abs: return "abs";
    case Op::Sqrt: return "sqrt";
    default: return nullptr;
  }
}

char binary_symbol(Op op) {
  switch (op) {
    case Op::Add: return '+';
    case Op::Sub: return '-';
    case Op::Mul: return '*';
    case Op::Div: return '/';
    case Op::Pow: return '^';
    default: return '?';
  }
}

void print(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::Number:
      if (!std::isfinite(n.value)) throw NotPrintable{};
      out += format_number(n.value);
      return;
    case Op::Time:
      out += 't';
      return;
    case Op::Neg:
      out += "(-";
      print(*n.lhs, out);
      out += ')';
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
      out += '(';
      print(*n.lhs, out);
      out += binary_symbol(n.op);
      print(*n.rhs, out);
      out += ')';
      return;
    case Op::Phase:
      if (!n.phase->closed()) throw NotPrintable{};
      print(*n.phase->closed()->node(), out);
      return;
    case Op::Pulses:
      throw NotPrintable{};
    default:
      out += function_name(n.op);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      return;
  }
}

// Best-effort text for error messages; never throws.
std::string describe(const Node& n) {
  try {
    std::string s;
    print(n, s);
    return s;
  } catch (const NotPrintable&) {
    return n.op == Op::Pulses ? "pulses" : "chirp phase";
  }
}

double pulse_value(const detail::PulseSpec& p, double t) {
  double start = p.start;
  double width = p.width;
  double gap = p.gap;
  while (start <= t) {
    if (t < start + width) return 1.0;
    start += width + gap;
    width *= 0.5;
    gap *= 2.0;
  }
  return 0.0;
}

double eval(const Node& n, double t) {
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::Time: return t;
    case Op::Neg: return -eval(*n.lhs, t);
    case Op::Add: return eval(*n.lhs, t) + eval(*n.rhs, t);
    case Op::Sub: return eval(*n.lhs, t) - eval(*n.rhs, t);
    case Op::Mul: return eval(*n.lhs, t) * eval(*n.rhs, t);
    case Op::Div: {
      const double num = eval(*n.lhs, t);
      const double den = eval(*n.rhs, t);
      if (den == 0.0) throw EvalError("division by zero", describe(n));
      return num / den;
    }
    case Op::Pow: {
      const double base = eval(*n.lhs, t);
      const double exponent = eval(*n.rhs, t);
      if (base < 0.0 && std::trunc(exponent) != exponent) {
        throw EvalError("negative base with non-integer exponent", describe(n));
      }
      if (base == 0.0 && exponent < 0.0) throw EvalError("division by zero", describe(n));
      return std::pow(base, exponent);
    }
    case Op::Sin: return std::sin(eval(*n.lhs, t));
    case Op::Cos: return std::cos(eval(*n.lhs, t));
    case Op::Exp: return std::exp(eval(*n.lhs, t));
    case Op::Log: {
      const double arg = eval(*n.lhs, t);
      if (arg <= 0.0) throw EvalError("log of non-positive value", describe(n));
      return std::log(arg);
    }
    case Op::Abs: return std::abs(eval(*n.lhs, t));
    case Op::Sqrt: {
      const double arg = eval(*n.lhs, t);
      if (arg < 0.0) throw EvalError("sqrt of negative value", describe(n));
      return std::sqrt(arg);
    }
    case Op::Phase: return (*n.phase)(t);
    case Op::Pulses: return pulse_value(*n.pulses, t);
  }
  return 0.0;
}

bool references_time(const Node& n) {
  switch (n.op) {
    case Op::Time:
    case Op::Phase:
    case Op::Pulses:
      return true;
    case Op::Number:
      return false;
    default:
      return (n.lhs && references_time(*n.lhs)) || (n.rhs && references_time(*n.rhs));
  }
}

void collect_breakpoints(const Node& n, double horizon, std::vector<double>& out) {
  if (n.op == Op::Pulses) {
    double start = n.pulses->start;
    double width = n.pulses->width;
    double gap = n.pulses->gap;
    while (start <= horizon) {
      if (start > 0.0) out.push_back(start);
      if (start + width <= horizon) out.push_back(start + width);
      start += width + gap;
      width *= 0.5;
      gap *= 2.0;
    }
    return;
  }
  if (n.op == Op::Phase) {
    collect_breakpoints(*n.phase->amplitude().node(), horizon, out);
    return;
  }
  if (n.lhs) collect_breakpoints(*n.lhs, horizon, out);
  if (n.rhs) collect_breakpoints(*n.rhs, horizon, out);
}

// Folding constructors used only when building derivatives and
// antiderivatives, so parsed trees keep their exact shape.
bool is_number(const NodePtr& n, double v) { return n->op == Op::Number && n->value == v; }

NodePtr fold_add(NodePtr a, NodePtr b) {
  if (is_number(a, 0.0)) return b;
  if (is_number(b, 0.0)) return a;
  return detail::make_binary(Op::Add, std::move(a), std::move(b));
}

NodePtr fold_neg(NodePtr a) {
  if (a->op == Op::Number) return detail::make_number(-a->value);
  return detail::make_unary(Op::Neg, std::move(a));
}

NodePtr fold_sub(NodePtr a, NodePtr b) {
  if (is_number(b, 0.0)) return a;
  if (is_number(a, 0.0)) return fold_neg(std::move(b));
  return detail::make_binary(Op::Sub, std::move(a), std::move(b));
}

NodePtr fold_mul(NodePtr a, NodePtr b) {
  if (is_number(a, 0.0) || is_number(b, 0.0)) return detail::make_number(0.0);
  if (is_number(a, 1.0)) return b;
  if (is_number(b, 1.0)) return a;
  if (a->op == Op::Number && b->op == Op::Number) return detail::make_number(a->value * b->value);
  return detail::make_binary(Op::Mul, std::move(a), std::move(b));
}

NodePtr fold_div(NodePtr a, NodePtr b) {
  if (is_number(a, 0.0)) return detail::make_number(0.0);
  if (is_number(b, 1.0)) return a;
  return detail::make_binary(Op::Div, std::move(a), std::move(b));
}

NodePtr derive(const NodePtr& n) {
  using detail::make_binary;
  using detail::make_number;
  using detail::make_unary;
  switch (n->op) {
    case Op::Number: return make_number(0.0);
    case Op::Time: return make_number(1.0);
    case Op::Neg: return fold_neg(derive(n->lhs));
    case Op::Add: return fold_add(derive(n->lhs), derive(n->rhs));
    case Op::Sub: return fold_sub(derive(n->lhs), derive(n->rhs));
    case Op::Mul:
      return fold_add(fold_mul(derive(n->lhs), n->rhs), fold_mul(n->lhs, derive(n->rhs)));
    case Op::Div: {
      const NodePtr first = fold_div(derive(n->lhs), n->rhs);
      const NodePtr second =
          fold_div(fold_mul(n->lhs, derive(n->rhs)), make_binary(Op::Mul, n->rhs, n->rhs));
      return fold_sub(first, second);
    }
    case Op::Pow: {
      const NodePtr& base = n->lhs;
      const NodePtr& exponent = n->rhs;
      if (!references_time(*exponent)) {
        NodePtr reduced = exponent->op == Op::Number
                              ? make_number(exponent->value - 1.0)
                              : make_binary(Op::Sub, exponent, make_number(1.0));
        return fold_mul(fold_mul(exponent, make_binary(Op::Pow, base, reduced)), derive(base));
      }
      // d(u^v) = u^v (v' log u + v u'/u)
      NodePtr inner = fold_add(fold_mul(derive(exponent), make_unary(Op::Log, base)),
                               fold_div(fold_mul(exponent, derive(base)), base));
      return fold_mul(n, inner);
    }
    case Op::Sin: return fold_mul(make_unary(Op::Cos, n->lhs), derive(n->lhs));
    case Op::Cos: return fold_neg(fold_mul(make_unary(Op::Sin, n->lhs), derive(n->lhs)));
    case Op::Exp: return fold_mul(n, derive(n->lhs));
    case Op::Log: return fold_div(derive(n->lhs), n->lhs);
    case Op::Abs: throw DifferentiationError("abs is not differentiable");
    case Op::Sqrt: throw DifferentiationError("sqrt is not admitted by differentiate");
    case Op::Pulses: throw DifferentiationError("pulse train is not differentiable");
    case Op::Phase: return n->phase->amplitude().node();
  }
  throw DifferentiationError("unknown node");
}

std::optional<NodePtr> antiderive(const NodePtr& n) {
  using detail::make_binary;
  using detail::make_number;
  using detail::make_time;
  using detail::make_unary;
  if (!references_time(*n)) return fold_mul(n, make_time());
  switch (n->op) {
    case Op::Time:
      return make_binary(Op::Mul, make_number(0.5), make_binary(Op::Pow, make_time(), make_number(2.0)));
    case Op::Pow:
      if (n->lhs->op == Op::Time && n->rhs->op == Op::Number && n->rhs->value != -1.0) {
        const double p = n->rhs->value + 1.0;
        return make_binary(Op::Div, make_binary(Op::Pow, make_time(), make_number(p)), make_number(p));
      }
      return std::nullopt;
    case Op::Neg: {
      auto g = antiderive(n->lhs);
      if (!g) return std::nullopt;
      return fold_neg(*g);
    }
    case Op::Add:
    case Op::Sub: {
      auto g1 = antiderive(n->lhs);
      auto g2 = antiderive(n->rhs);
      if (!g1 || !g2) return std::nullopt;
      return n->op == Op::Add ? fold_add(*g1, *g2) : fold_sub(*g1, *g2);
    }
    case Op::Mul: {
      if (!references_time(*n->lhs)) {
        auto g = antiderive(n->rhs);
        if (g) return fold_mul(n->lhs, *g);
      } else if (!references_time(*n->rhs)) {
        auto g = antiderive(n->lhs);
        if (g) return fold_mul(*g, n->rhs);
      }
      return std::nullopt;
    }
    case Op::Div: {
      if (references_time(*n->rhs)) return std::nullopt;
      auto g = antiderive(n->lhs);
      if (!g) return std::nullopt;
      return fold_div(*g, n->rhs);
    }
    case Op::Exp: {
      // exp(alpha t + beta): the argument's derivative must be a nonzero constant.
      NodePtr slope;
      try {
        slope = derive(n->lhs);
      } catch (const DifferentiationError&) {
        return std::nullopt;
      }
      if (references_time(*slope)) return std::nullopt;
      double alpha = 0.0;
      try {
        alpha = eval(*slope, 0.0);
      } catch (const EvalError&) {
        return std::nullopt;
      }
      if (alpha == 0.0 || !std::isfinite(alpha)) return std::nullopt;
      return fold_div(n, make_number(alpha));
    }
    default:
      return std::nullopt;
  }
}

std::string format_param(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

ForcingExpr::ForcingExpr() : node_(detail::make_number(0.0)) {}

ForcingExpr::ForcingExpr(std::shared_ptr<const detail::Node> node, std::string spec)
    : node_(std::move(node)), spec_(std::move(spec)) {}

ForcingExpr ForcingExpr::number(double value) { return ForcingExpr(detail::make_number(value)); }
ForcingExpr ForcingExpr::time() { return ForcingExpr(detail::make_time()); }

double ForcingExpr::operator()(double t) const { return eval(*node_, t); }

ForcingExpr ForcingExpr::derivative() const { return ForcingExpr(derive(node_)); }

std::string ForcingExpr::to_string() const {
  try {
    std::string out;
    print(*node_, out);
    return out;
  } catch (const NotPrintable&) {
    if (!spec_.empty()) return spec_;
    throw std::logic_error("forcing has no textual form");
  }
}

std::vector<double> ForcingExpr::breakpoints(double horizon) const {
  std::vector<double> out;
  collect_breakpoints(*node_, horizon, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool ForcingExpr::is_constant() const { return !references_time(*node_); }

ForcingExpr ForcingExpr::with_spec(std::string spec) const { return ForcingExpr(node_, std::move(spec)); }

ForcingExpr operator+(const ForcingExpr& lhs, const ForcingExpr& rhs) {
  return ForcingExpr(detail::make_binary(Op::Add, lhs.node_, rhs.node_));
}
ForcingExpr operator-(const ForcingExpr& lhs, const ForcingExpr& rhs) {
  return ForcingExpr(detail::make_binary(Op::Sub, lhs.node_, rhs.node_));
}
ForcingExpr operator*(const ForcingExpr& lhs, const ForcingExpr& rhs) {
  return ForcingExpr(detail::make_binary(Op::Mul, lhs.node_, rhs.node_));
}
ForcingExpr operator/(const ForcingExpr& lhs, const ForcingExpr& rhs) {
  return ForcingExpr(detail::make_binary(Op::Div, lhs.node_, rhs.node_));
}
ForcingExpr operator-(const ForcingExpr& arg) { return ForcingExpr(detail::make_unary(Op::Neg, arg.node_)); }
ForcingExpr pow(const ForcingExpr& base, const ForcingExpr& exponent) {
  return ForcingExpr(detail::make_binary(Op::Pow, base.node_, exponent.node_));
}
ForcingExpr sin(const ForcingExpr& arg) { return ForcingExpr(detail::make_unary(Op::Sin, arg.node_)); }
ForcingExpr cos(const ForcingExpr& arg) { return ForcingExpr(detail::make_unary(Op::Cos, arg.node_)); }
ForcingExpr exp(const ForcingExpr& arg) { return ForcingExpr(detail::make_unary(Op::Exp, arg.node_)); }
ForcingExpr log(const ForcingExpr& arg) { return ForcingExpr(detail::make_unary(Op::Log, arg.node_)); }
ForcingExpr abs(const ForcingExpr& arg) { return ForcingExpr(detail::make_unary(Op::Abs, arg.node_)); }
ForcingExpr sqrt(const ForcingExpr& arg) { return ForcingExpr(detail::make_unary(Op::Sqrt, arg.node_)); }

double eval_forcing(const ForcingExpr& f, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("forcing evaluated at negative time");
  return f(t);
}

ForcingExpr differentiate(const ForcingExpr& f) { return f.derivative(); }

ForcingExpr constant_forcing(double c) {
  return ForcingExpr::number(c).with_spec("constant:c=" + format_param(c));
}

ForcingExpr exp_decay(double lambda) {
  return exp(ForcingExpr::number(-lambda) * ForcingExpr::time())
      .with_spec("expdecay:lambda=" + format_param(lambda));
}

ForcingExpr sinusoid(double omega, double amp) {
  return (ForcingExpr::number(amp) * sin(ForcingExpr::number(omega) * ForcingExpr::time()))
      .with_spec("sin:omega=" + format_param(omega) + ",amp=" + format_param(amp));
}

ForcingExpr ramp(double slope) {
  return (ForcingExpr::number(slope) * ForcingExpr::time())
      .with_spec("ramp:slope=" + format_param(slope));
}

ForcingExpr explicit_example() {
  static const ForcingExpr f = parse_forcing(
      "-4*exp(3*t)*sin(exp(2*t)-1)+10*exp(t)*cos(exp(2*t)-1)+2*exp(-t)*sin(exp(2*t)-1)");
  return f.with_spec("paper-example-1");
}

ForcingExpr pulse_train(double start, double width, double gap) {
  if (!(start >= 0.0) || !(width > 0.0) || !(gap > 0.0)) {
    throw std::invalid_argument("pulse train needs start >= 0, width > 0, gap > 0");
  }
  auto n = std::make_shared<Node>();
  n->op = Op::Pulses;
  n->pulses = detail::PulseSpec{start, width, gap};
  return ForcingExpr(std::move(n), "pulses:start=" + format_param(start) +
                                       ",width=" + format_param(width) +
                                       ",gap=" + format_param(gap));
}

std::optional<ForcingExpr> closed_antiderivative(const ForcingExpr& f) {
  auto g = antiderive(f.node());
  if (!g) return std::nullopt;
  return ForcingExpr(*g);
}

ForcingExpr chirp_forcing(const ForcingExpr& amplitude) {
  for (int i = 0; i <= 200; ++i) {
    const double t = 0.1 * i;
    double value = 0.0;
    try {
      value = amplitude(t);
    } catch (const EvalError& e) {
      throw std::invalid_argument(std::string("chirp amplitude cannot be evaluated: ") + e.what());
    }
    if (!(value > 0.0)) {
      throw std::invalid_argument("chirp amplitude is non-positive at t=" + format_param(t));
    }
  }

  std::optional<ForcingExpr> phase_closed;
  if (auto g = closed_antiderivative(amplitude)) {
    const double g0 = (*g)(0.0);
    phase_closed = *g - ForcingExpr::number(g0);
  }
  auto phase = std::make_shared<Node>();
  phase->op = Op::Phase;
  phase->phase = std::make_shared<const detail::PhaseIntegral>(amplitude, std::move(phase_closed));

  std::string spec = "chirp:A=";
  try {
    spec += amplitude.to_string();
  } catch (const std::logic_error&) {
    spec.clear();
  }
  return (amplitude * ForcingExpr(detail::make_unary(Op::Sin, std::move(phase)))).with_spec(spec);
}

void require_chirp_admissible(const ForcingExpr& amplitude, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("chirp admissibility needs a positive horizon");
  constexpr int kSamples = 256;
  double previous = 0.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = horizon * i / kSamples;
    const double value = amplitude(t);
    if (!(value > 0.0)) {
      throw std::invalid_argument("chirp amplitude is not strictly positive at t=" + format_param(t));
    }
    if (i > 0 && !(value > previous)) {
      throw std::invalid_argument("chirp amplitude is not strictly increasing near t=" +
                                  format_param(t));
    }
    previous = value;
  }
}

}  // namespace odeclass
