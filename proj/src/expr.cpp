#include "corral/expr.hpp"

#include <algorithm>
#include <cmath>

#include "corral/errors.hpp"

namespace corral {

auto SmoothExpr::make(Node n) -> SmoothExpr { return SmoothExpr(std::make_shared<const Node>(std::move(n))); }

auto SmoothExpr::constant(double c) -> SmoothExpr {
  Node n;
  n.c = c;
  return make(std::move(n));
}

auto SmoothExpr::var(VarKind kind, std::size_t index) -> SmoothExpr {
  Node n;
  n.op = Op::var;
  n.kind = kind;
  n.index = index;
  return make(std::move(n));
}

// Constructors fold constants and drop neutral elements so that symbolic
// b-partials stay small.
auto operator+(const SmoothExpr& a, const SmoothExpr& b) -> SmoothExpr {
  using Op = SmoothExpr::Op;
  if (a.op() == Op::constant && b.op() == Op::constant) return SmoothExpr::constant(a.value() + b.value());
  if (a.is_constant(0)) return b;
  if (b.is_constant(0)) return a;
  SmoothExpr::Node n;
  n.op = Op::add;
  n.args = {a, b};
  return SmoothExpr::make(std::move(n));
}

auto operator*(const SmoothExpr& a, const SmoothExpr& b) -> SmoothExpr {
  using Op = SmoothExpr::Op;
  if (a.op() == Op::constant && b.op() == Op::constant) return SmoothExpr::constant(a.value() * b.value());
  if (a.is_constant(0) || b.is_constant(0)) return SmoothExpr::constant(0);
  if (a.is_constant(1)) return b;
  if (b.is_constant(1)) return a;
  SmoothExpr::Node n;
  n.op = Op::mul;
  n.args = {a, b};
  return SmoothExpr::make(std::move(n));
}

auto operator-(const SmoothExpr& a) -> SmoothExpr {
  using Op = SmoothExpr::Op;
  if (a.op() == Op::constant) return SmoothExpr::constant(-a.value());
  if (a.op() == Op::neg) return a.args()[0];
  SmoothExpr::Node n;
  n.op = Op::neg;
  n.args = {a};
  return SmoothExpr::make(std::move(n));
}

auto exp(const SmoothExpr& a) -> SmoothExpr {
  if (a.op() == SmoothExpr::Op::constant && a.value() == 0) return SmoothExpr::constant(1);
  SmoothExpr::Node n;
  n.op = SmoothExpr::Op::exp;
  n.args = {a};
  return SmoothExpr::make(std::move(n));
}

auto pow(const SmoothExpr& a, unsigned k) -> SmoothExpr {
  if (k == 0) return SmoothExpr::constant(1);
  if (k == 1) return a;
  if (a.op() == SmoothExpr::Op::constant) return SmoothExpr::constant(std::pow(a.value(), k));
  SmoothExpr::Node n;
  n.op = SmoothExpr::Op::pow;
  n.power = k;
  n.args = {a};
  return SmoothExpr::make(std::move(n));
}

auto operator==(const SmoothExpr& a, const SmoothExpr& b) -> bool {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case SmoothExpr::Op::constant: return a.value() == b.value();
    case SmoothExpr::Op::var: return a.kind() == b.kind() && a.index() == b.index();
    case SmoothExpr::Op::pow:
      if (a.power() != b.power()) return false;
      break;
    default: break;
  }
  return a.args() == b.args();
}

auto SmoothExpr::eval(const RPoint& p) const -> double { return eval_and_bderiv(*this, RPoint{p.x, p.y}).value; }

auto SmoothExpr::arity(VarKind k) const -> std::size_t {
  if (op() == Op::var) return kind() == k ? index() + 1 : 0;
  std::size_t n = 0;
  for (const auto& a : args()) n = std::max(n, a.arity(k));
  return n;
}

namespace {

void check_arity(const SmoothExpr& e, const RPoint& p) {
  if (e.arity(VarKind::real) > p.x.size() || e.arity(VarKind::interior) > p.y.size())
    throw DomainError("invalid_point", "expression refers to a generator outside the point");
}

auto forward(const SmoothExpr& e, const RPoint& p) -> BDual {
  using Op = SmoothExpr::Op;
  const std::size_t n = p.size();
  BDual d;
  switch (e.op()) {
    case Op::constant:
      d.value = e.value();
      d.bgrad.assign(n, 0.0);
      return d;
    case Op::var:
      d.bgrad.assign(n, 0.0);
      if (e.kind() == VarKind::real) {
        d.value = p.x[e.index()];
        d.bgrad[e.index()] = 1.0;
      } else {
        // y·∂y/∂y = y
        d.value = p.y[e.index()];
        d.bgrad[p.x.size() + e.index()] = d.value;
      }
      return d;
    case Op::add: {
      d = forward(e.args()[0], p);
      auto b = forward(e.args()[1], p);
      d.value += b.value;
      for (std::size_t i = 0; i < n; ++i) d.bgrad[i] += b.bgrad[i];
      return d;
    }
    case Op::mul: {
      auto a = forward(e.args()[0], p);
      auto b = forward(e.args()[1], p);
      d.value = a.value * b.value;
      d.bgrad.resize(n);
      for (std::size_t i = 0; i < n; ++i) d.bgrad[i] = a.bgrad[i] * b.value + a.value * b.bgrad[i];
      return d;
    }
    case Op::neg:
      d = forward(e.args()[0], p);
      d.value = -d.value;
      for (auto& g : d.bgrad) g = -g;
      return d;
    case Op::exp:
      d = forward(e.args()[0], p);
      d.value = std::exp(d.value);
      for (auto& g : d.bgrad) g *= d.value;
      return d;
    case Op::pow: {
      d = forward(e.args()[0], p);
      const double base = d.value;
      const double dfac = e.power() * std::pow(base, e.power() - 1);
      d.value = std::pow(base, e.power());
      for (auto& g : d.bgrad) g *= dfac;
      return d;
    }
  }
  return d;
}

}  // namespace

auto eval_and_bderiv(const SmoothExpr& e, const RPoint& p) -> BDual {
  check_arity(e, p);
  return forward(e, p);
}

auto bpartial(const SmoothExpr& e, VarKind kind, std::size_t index) -> SmoothExpr {
  using Op = SmoothExpr::Op;
  switch (e.op()) {
    case Op::constant: return SmoothExpr::constant(0);
    case Op::var:
      if (e.kind() != kind || e.index() != index) return SmoothExpr::constant(0);
      return kind == VarKind::real ? SmoothExpr::constant(1) : e;
    case Op::add: return bpartial(e.args()[0], kind, index) + bpartial(e.args()[1], kind, index);
    case Op::mul:
      return bpartial(e.args()[0], kind, index) * e.args()[1] + e.args()[0] * bpartial(e.args()[1], kind, index);
    case Op::neg: return -bpartial(e.args()[0], kind, index);
    case Op::exp: return e * bpartial(e.args()[0], kind, index);
    case Op::pow:
      return SmoothExpr::constant(e.power()) * pow(e.args()[0], e.power() - 1) * bpartial(e.args()[0], kind, index);
  }
  return SmoothExpr::constant(0);
}

auto substitute(const SmoothExpr& e, const std::vector<SmoothExpr>& real, const std::vector<SmoothExpr>& interior)
    -> SmoothExpr {
  using Op = SmoothExpr::Op;
  auto sub = [&](std::size_t i) { return substitute(e.args()[i], real, interior); };
  switch (e.op()) {
    case Op::constant: return e;
    case Op::var: {
      const auto& table = e.kind() == VarKind::real ? real : interior;
      if (e.index() >= table.size()) throw DomainError("undeclared_generator", "substitution is missing a generator");
      return table[e.index()];
    }
    case Op::add: return sub(0) + sub(1);
    case Op::mul: return sub(0) * sub(1);
    case Op::neg: return -sub(0);
    case Op::exp: return exp(sub(0));
    case Op::pow: return pow(sub(0), e.power());
  }
  return e;
}

auto InteriorExpr::generator(std::size_t i, std::size_t n_interior) -> InteriorExpr {
  InteriorExpr g{IntVec(n_interior), SmoothExpr::constant(0)};
  g.alpha.at(i) = 1;
  return g;
}

auto InteriorExpr::exp_of(SmoothExpr f, std::size_t n_interior) -> InteriorExpr {
  return InteriorExpr{IntVec(n_interior), std::move(f)};
}

auto InteriorExpr::eval(const RPoint& p) const -> double {
  if (alpha.size() != p.y.size()) throw DomainError("invalid_point", "exponent vector does not match the point");
  double v = std::exp(factor.eval(p));
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] != 0) v *= std::pow(p.y[i], alpha[i].get_d());
  return v;
}

auto InteriorExpr::log_bgrad(const RPoint& p) const -> std::vector<double> {
  if (alpha.size() != p.y.size()) throw DomainError("invalid_point", "exponent vector does not match the point");
  // y·∂/∂y log y^α = α exactly, also at y = 0.
  auto g = eval_and_bderiv(factor, p).bgrad;
  for (std::size_t i = 0; i < alpha.size(); ++i) g[p.x.size() + i] += alpha[i].get_d();
  return g;
}

auto InteriorExpr::as_smooth() const -> SmoothExpr {
  auto e = exp(factor);
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] != 0) e = pow(SmoothExpr::interior(i), static_cast<unsigned>(alpha[i].get_ui())) * e;
  return e;
}

auto operator*(const InteriorExpr& a, const InteriorExpr& b) -> InteriorExpr {
  if (a.alpha.size() != b.alpha.size()) throw DomainError("arity_mismatch", "interior expressions over different rings");
  InteriorExpr c{a.alpha, a.factor + b.factor};
  for (std::size_t i = 0; i < c.alpha.size(); ++i) c.alpha[i] += b.alpha[i];
  return c;
}

auto finite_difference_check(const SmoothExpr& e, const RPoint& p, const FdOptions& opts) -> double {
  for (double y : p.y)
    if (!(y > 0)) throw DomainError("invalid_point", "finite differences need a strictly interior point");
  const auto an = eval_and_bderiv(e, p).bgrad;
  const std::size_t nx = p.x.size();
  double worst = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto shifted = [&](double t) {
      RPoint q = p;
      if (i < nx)
        q.x[i] += t;
      else
        q.y[i - nx] *= std::exp(t);
      return e.eval(q);
    };
    auto central = [&](double h) { return (shifted(h) - shifted(-h)) / (2 * h); };
    const double h = opts.step;
    const double fd = (4 * central(h / 2) - central(h)) / 3;
    worst = std::max(worst, std::abs(fd - an[i]) / std::max(1.0, std::abs(an[i])));
  }
  return worst;
}

}  // namespace corral
