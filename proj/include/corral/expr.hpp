#pragma once

#include <memory>
#include <string>
#include <vector>

#include "corral/lattice.hpp"

namespace corral {

enum class VarKind { real, interior };

// Values of the real generators x_a ∈ ℝ and interior generators y_a' ∈ [0,∞).
struct RPoint {
  std::vector<double> x, y;

  [[nodiscard]] auto size() const -> std::size_t { return x.size() + y.size(); }
  friend auto operator==(const RPoint&, const RPoint&) -> bool = default;
};

// Immutable expression over {constants, +, ×, −, exp, natural powers}.  The
// fragment has no division, so y·∂/∂y is finite everywhere including y = 0.
class SmoothExpr {
 public:
  enum class Op { constant, var, add, mul, neg, exp, pow };

  SmoothExpr() : SmoothExpr(constant(0)) {}

  static auto constant(double c) -> SmoothExpr;
  static auto var(VarKind kind, std::size_t index) -> SmoothExpr;
  static auto real(std::size_t i) -> SmoothExpr { return var(VarKind::real, i); }
  static auto interior(std::size_t i) -> SmoothExpr { return var(VarKind::interior, i); }

  friend auto operator+(const SmoothExpr& a, const SmoothExpr& b) -> SmoothExpr;
  friend auto operator*(const SmoothExpr& a, const SmoothExpr& b) -> SmoothExpr;
  friend auto operator-(const SmoothExpr& a) -> SmoothExpr;
  friend auto operator-(const SmoothExpr& a, const SmoothExpr& b) -> SmoothExpr { return a + (-b); }
  friend auto exp(const SmoothExpr& a) -> SmoothExpr;
  friend auto pow(const SmoothExpr& a, unsigned n) -> SmoothExpr;

  [[nodiscard]] auto op() const -> Op { return node_->op; }
  [[nodiscard]] auto value() const -> double { return node_->c; }  // Op::constant
  [[nodiscard]] auto kind() const -> VarKind { return node_->kind; }  // Op::var
  [[nodiscard]] auto index() const -> std::size_t { return node_->index; }
  [[nodiscard]] auto power() const -> unsigned { return node_->power; }  // Op::pow
  [[nodiscard]] auto args() const -> const std::vector<SmoothExpr>& { return node_->args; }
  [[nodiscard]] auto is_constant(double c) const -> bool { return op() == Op::constant && value() == c; }

  [[nodiscard]] auto eval(const RPoint& p) const -> double;
  // Largest variable index + 1 per kind.
  [[nodiscard]] auto arity(VarKind kind) const -> std::size_t;

  friend auto operator==(const SmoothExpr& a, const SmoothExpr& b) -> bool;

 private:
  struct Node {
    Op op = Op::constant;
    double c = 0;
    VarKind kind = VarKind::real;
    std::size_t index = 0;
    unsigned power = 0;
    std::vector<SmoothExpr> args;
  };
  explicit SmoothExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static auto make(Node n) -> SmoothExpr;

  std::shared_ptr<const Node> node_;
};

// Value and b-gradient: ∂e/∂x_a on real columns, y·∂e/∂y on interior ones.
// Columns are ordered real then interior.
struct BDual {
  double value = 0;
  std::vector<double> bgrad;
};

auto eval_and_bderiv(const SmoothExpr& e, const RPoint& p) -> BDual;

// Symbolic b-partial: ∂e/∂x for a real variable, y·∂e/∂y for an interior one.
auto bpartial(const SmoothExpr& e, VarKind kind, std::size_t index) -> SmoothExpr;

// Replaces every variable by the given expression.
auto substitute(const SmoothExpr& e, const std::vector<SmoothExpr>& real, const std::vector<SmoothExpr>& interior)
    -> SmoothExpr;

// y^alpha · exp(factor), the normal form of an interior element.
struct InteriorExpr {
  IntVec alpha;
  SmoothExpr factor;

  static auto generator(std::size_t i, std::size_t n_interior) -> InteriorExpr;
  static auto exp_of(SmoothExpr f, std::size_t n_interior) -> InteriorExpr;  // Ψ_exp: alpha = 0

  [[nodiscard]] auto eval(const RPoint& p) const -> double;
  // b-gradient of log: alpha on interior columns plus the b-gradient of the factor.
  [[nodiscard]] auto log_bgrad(const RPoint& p) const -> std::vector<double>;
  // Φ_i: the same element regarded as a smooth function.
  [[nodiscard]] auto as_smooth() const -> SmoothExpr;

  friend auto operator*(const InteriorExpr& a, const InteriorExpr& b) -> InteriorExpr;
  friend auto operator==(const InteriorExpr&, const InteriorExpr&) -> bool = default;
};

// Richardson-extrapolated central differences: in log y for interior
// generators and in x for real ones.  Returns max |fd − an| / max(1, |an|).
struct FdOptions {
  double step = 1e-3;
};

auto finite_difference_check(const SmoothExpr& e, const RPoint& p, const FdOptions& opts = {}) -> double;

}  // namespace corral
