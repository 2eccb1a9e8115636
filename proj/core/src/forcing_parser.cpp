#include <cctype>
#include <charconv>
#include <initializer_list>
#include <optional>
#include <string>

#include "forcing_node.hpp"
#include "odeclass/forcing.hpp"

namespace odeclass {
namespace {

using detail::NodePtr;
using detail::Op;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    skip_space();
    if (at_end()) throw ParseError("empty input", pos_);
    NodePtr root = expr();
    skip_space();
    if (!at_end()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return root;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = detail::make_binary(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = detail::make_binary(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = detail::make_binary(Op::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = detail::make_binary(Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return detail::make_unary(Op::Neg, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return detail::make_binary(Op::Pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip_space();
    if (at_end()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.')) {
      ++end;
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp_end = end + 1;
      if (exp_end < text_.size() && (text_[exp_end] == '+' || text_[exp_end] == '-')) ++exp_end;
      if (exp_end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp_end]))) {
        while (exp_end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp_end]))) ++exp_end;
        end = exp_end;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + end, value);
    if (ec != std::errc() || ptr != text_.data() + end) throw ParseError("malformed number", start);
    pos_ = end;
    return detail::make_number(value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "t") return detail::make_time();

    Op op;
    if (name == "sin") op = Op::Sin;
    else if (name == "cos") op = Op::Cos;
    else if (name == "exp") op = Op::Exp;
    else if (name == "log") op = Op::Log;
    else if (name == "abs") op = Op::Abs;
    else if (name == "sqrt") op = Op::Sqrt;
    else throw ParseError("unknown identifier '" + std::string(name) + "'", start);

    if (!accept('(')) throw ParseError("expected '(' after " + std::string(name), pos_);
    NodePtr arg = expr();
    if (!accept(')')) throw ParseError("expected ')'", pos_);
    return detail::make_unary(op, arg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct BuiltinParams {
  std::string_view text;
  std::size_t base_offset;

  // Looks up `key=value` among the comma-separated parameters.
  std::optional<double> get(std::string_view key) const {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t comma = text.find(',', pos);
      if (comma == std::string_view::npos) comma = text.size();
      const std::string_view item = text.substr(pos, comma - pos);
      const std::size_t eq = item.find('=');
      if (eq != std::string_view::npos && trim(item.substr(0, eq)) == key) {
        const std::string_view raw = trim(item.substr(eq + 1));
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
        if (ec != std::errc() || ptr != raw.data() + raw.size() || raw.empty()) {
          throw ParseError("malformed value for '" + std::string(key) + "'", base_offset + pos + eq + 1);
        }
        return value;
      }
      pos = comma + 1;
    }
    return std::nullopt;
  }

  void require_known(std::initializer_list<std::string_view> keys) const {
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t comma = text.find(',', pos);
      if (comma == std::string_view::npos) comma = text.size();
      const std::string_view item = text.substr(pos, comma - pos);
      const std::string_view key = trim(item.substr(0, item.find('=')));
      bool known = false;
      for (auto k : keys) known = known || k == key;
      if (!known) throw ParseError("unknown parameter '" + std::string(key) + "'", base_offset + pos);
      pos = comma + 1;
    }
  }

  double require(std::string_view key) const {
    auto v = get(key);
    if (!v) throw ParseError("missing parameter '" + std::string(key) + "'", base_offset);
    return *v;
  }
};

}  // namespace

ForcingExpr parse_forcing(std::string_view text) { return ForcingExpr(Parser(text).parse()); }

ForcingExpr parse_forcing_spec(std::string_view text) {
  const std::string_view spec = trim(text);
  if (spec == "paper-example-1") return explicit_example();

  const std::size_t colon = spec.find(':');
  if (colon != std::string_view::npos) {
    const std::string_view name = spec.substr(0, colon);
    const std::string_view rest = spec.substr(colon + 1);
    const std::size_t offset = static_cast<std::size_t>(rest.data() - text.data());
    const BuiltinParams params{rest, offset};
    if (name == "constant") {
      params.require_known({"c"});
      return constant_forcing(params.require("c"));
    }
    if (name == "expdecay") {
      params.require_known({"lambda"});
      return exp_decay(params.require("lambda"));
    }
    if (name == "sin") {
      params.require_known({"omega", "amp"});
      return sinusoid(params.require("omega"), params.get("amp").value_or(1.0));
    }
    if (name == "ramp") {
      params.require_known({"slope"});
      return ramp(params.require("slope"));
    }
    if (name == "pulses") {
      params.require_known({"start", "width", "gap"});
      return pulse_train(params.get("start").value_or(1.0), params.get("width").value_or(1.0),
                         params.get("gap").value_or(1.0));
    }
    if (name == "chirp") {
      const std::string_view body = trim(rest);
      if (body.substr(0, 2) != "A=") throw ParseError("chirp expects 'A=<expr>'", offset);
      try {
        return chirp_forcing(parse_forcing(body.substr(2)));
      } catch (const ParseError& e) {
        throw ParseError(std::string("in chirp amplitude: ") + e.what(),
                         offset + static_cast<std::size_t>(body.data() - rest.data()) + 2 + e.offset());
      }
    }
    throw ParseError("unknown builtin '" + std::string(name) + "'", static_cast<std::size_t>(spec.data() - text.data()));
  }
  return parse_forcing(text);
}

}  // namespace odeclass
