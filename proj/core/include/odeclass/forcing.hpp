#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace odeclass {

/// Raised by the forcing parser. `offset()` is the byte offset into the input
/// at which the problem was detected.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Domain error during evaluation (log of a non-positive number, division by
/// zero, ...). `subexpression()` names the offending node.
class EvalError : public std::domain_error {
 public:
  EvalError(const std::string& what, std::string subexpression)
      : std::domain_error(what + " in '" + subexpression + "'"),
        subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

class DifferentiationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {
struct Node;
}

/// Closed-form forcing function f(t), stored as an immutable expression tree.
///
/// Trees are shared and never mutated after construction, so a ForcingExpr
/// may be copied freely and evaluated concurrently. The one piece of shared
/// mutable state (the phase-integral cache of a quadrature chirp) is
/// internally synchronised.
class ForcingExpr {
 public:
  /// The zero forcing.
  ForcingExpr();

  static ForcingExpr number(double value);
  static ForcingExpr time();

  double operator()(double t) const;

  /// Symbolic d/dt. Throws DifferentiationError for abs, sqrt and pulse trains.
  ForcingExpr derivative() const;

  /// Text that `parse_forcing_spec` turns back into an identically-evaluating
  /// forcing. Plain expressions print in the arithmetic grammar with
  /// shortest round-trip numbers; builtins without a grammar form print as
  /// their builtin spec.
  std::string to_string() const;

  /// Discontinuity times of f in (0, horizon], sorted.
  std::vector<double> breakpoints(double horizon) const;

  /// True when the tree does not reference t.
  bool is_constant() const;

  /// Builtin spec text ("expdecay:lambda=1", ...) when this forcing was built
  /// by a builtin constructor, empty otherwise.
  const std::string& spec() const noexcept { return spec_; }
  ForcingExpr with_spec(std::string spec) const;

  friend ForcingExpr operator+(const ForcingExpr& lhs, const ForcingExpr& rhs);
  friend ForcingExpr operator-(const ForcingExpr& lhs, const ForcingExpr& rhs);
  friend ForcingExpr operator*(const ForcingExpr& lhs, const ForcingExpr& rhs);
  friend ForcingExpr operator/(const ForcingExpr& lhs, const ForcingExpr& rhs);
  friend ForcingExpr operator-(const ForcingExpr& arg);
  friend ForcingExpr pow(const ForcingExpr& base, const ForcingExpr& exponent);
  friend ForcingExpr sin(const ForcingExpr& arg);
  friend ForcingExpr cos(const ForcingExpr& arg);
  friend ForcingExpr exp(const ForcingExpr& arg);
  friend ForcingExpr log(const ForcingExpr& arg);
  friend ForcingExpr abs(const ForcingExpr& arg);
  friend ForcingExpr sqrt(const ForcingExpr& arg);

  const std::shared_ptr<const detail::Node>& node() const noexcept { return node_; }
  explicit ForcingExpr(std::shared_ptr<const detail::Node> node, std::string spec = {});

 private:
  std::shared_ptr<const detail::Node> node_;
  std::string spec_;
};

/// Parses the arithmetic grammar
///
///     expr   := term (('+'|'-') term)*
///     term   := unary (('*'|'/') unary)*
///     unary  := '-' unary | power
///     power  := atom ('^' unary)?          (right-associative)
///     atom   := number | 't' | func '(' expr ')' | '(' expr ')'
///     func   := sin | cos | exp | log | abs | sqrt
ForcingExpr parse_forcing(std::string_view text);

/// Accepts either a grammar expression or a builtin spec:
/// `constant:c=..`, `expdecay:lambda=..`, `sin:omega=..,amp=..`,
/// `ramp:slope=..`, `chirp:A=<expr>`, `paper-example-1`,
/// `pulses:start=..,width=..,gap=..`.
ForcingExpr parse_forcing_spec(std::string_view text);

double eval_forcing(const ForcingExpr& f, double t);
ForcingExpr differentiate(const ForcingExpr& f);

ForcingExpr constant_forcing(double c);
/// e^{-lambda t}
ForcingExpr exp_decay(double lambda);
/// amp * sin(omega t)
ForcingExpr sinusoid(double omega, double amp);
ForcingExpr ramp(double slope);
/// -4e^{3t}sin(e^{2t}-1) + 10e^t cos(e^{2t}-1) + 2e^{-t}sin(e^{2t}-1)
ForcingExpr explicit_example();

/// Unit-height pulses; pulse n has width `width * 2^-n` and is followed by a
/// gap of `gap * 2^n`. The forcing is integrable on [0, inf) but does not tend
/// to zero.
ForcingExpr pulse_train(double start, double width, double gap);

/// f(t) = A(t) sin(B(t)), B(t) = integral of A over [0, t].
///
/// B is taken in closed form when A has a recognised antiderivative
/// (polynomials in t, exp(c t + d), sums and constant multiples thereof);
/// otherwise it is computed by adaptive Gauss-Kronrod quadrature (absolute
/// tolerance 1e-10) cached on a fixed lattice. Throws std::invalid_argument
/// if A is non-positive at a sample point of [0, 20].
ForcingExpr chirp_forcing(const ForcingExpr& amplitude);

/// Antiderivative G with G' = f for the recognised closed-form families.
std::optional<ForcingExpr> closed_antiderivative(const ForcingExpr& f);

/// Checks the chirp hypotheses on [0, horizon]: A > 0 and strictly increasing
/// at 257 sample points. Throws std::invalid_argument naming the violation.
void require_chirp_admissible(const ForcingExpr& amplitude, double horizon);

}  // namespace odeclass
