#include <algorithm>
#include <set>

#include "corral/cone.hpp"
#include "corral/lattice.hpp"

namespace corral {

namespace {

struct BudgetExhausted {};

// Depth-first search for Σ a_i g_i = target with a strictly positive grading w
// on the generators.  With `cap` unset the grading bounds the search; with a
// cap the total coefficient sum is limited as well.
class SharpSearch {
 public:
  SharpSearch(const AbelianGroup& g, const std::vector<IntVec>& gens, const IntVec& ell,
              std::optional<Int> cap, std::size_t budget)
      : g_(g), gens_(gens), ell_(ell), cap_(std::move(cap)), budget_(budget) {
    for (const auto& x : gens_) w_.push_back(dot(ell_, g_.free_part(x)));
  }

  auto run(const IntVec& target) -> std::optional<IntVec> {
    coef_.assign(gens_.size(), Int(0));
    if (dfs(0, target, cap_.value_or(Int(0)))) return coef_;
    return std::nullopt;
  }

 private:
  auto dfs(std::size_t i, const IntVec& residual, const Int& left) -> bool {
    if (++nodes_ > budget_) throw BudgetExhausted{};
    if (is_zero(residual)) {
      for (std::size_t j = i; j < coef_.size(); ++j) coef_[j] = 0;
      return true;
    }
    if (i == gens_.size()) return false;
    auto key = std::make_tuple(i, residual, cap_ ? left : Int(0));
    if (failed_.count(key)) return false;

    const Int height = dot(ell_, g_.free_part(residual));
    if (height >= 0) {
      Int amax = height / w_[i];
      if (cap_) amax = std::min(amax, left);
      for (Int a = amax; a >= 0; --a) {
        IntVec next = g_.sub(residual, g_.scale(a, gens_[i]));
        if (dfs(i + 1, next, left - a)) {
          coef_[i] = a;
          return true;
        }
      }
    }
    failed_.insert(std::move(key));
    return false;
  }

  const AbelianGroup& g_;
  const std::vector<IntVec>& gens_;
  IntVec ell_;
  std::vector<Int> w_;
  std::optional<Int> cap_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  IntVec coef_;
  std::set<std::tuple<std::size_t, IntVec, Int>> failed_;
};

auto solve_sharp(const AbelianGroup& g, const std::vector<IntVec>& gens, const IntVec& target,
                 const std::vector<IntVec>& dual_rays, const Int& bound, std::size_t budget) -> SolveResult {
  IntVec ell(g.free_rank);
  for (const auto& r : dual_rays)
    for (std::size_t i = 0; i < ell.size(); ++i) ell[i] += r[i];
  Int wmin = -1;
  for (const auto& x : gens) {
    Int w = dot(ell, g.free_part(x));
    if (wmin < 0 || w < wmin) wmin = w;
  }
  const Int height = dot(ell, g.free_part(target));
  const Int degree_bound = height / wmin;
  const bool certified = degree_bound <= bound;

  try {
    SharpSearch s(g, gens, ell, certified ? std::nullopt : std::optional<Int>(bound), budget);
    if (auto c = s.run(target)) return {SolveStatus::found, *c};
  } catch (const BudgetExhausted&) {
    return {SolveStatus::bound_exceeded, {}};
  }
  return {certified ? SolveStatus::not_found : SolveStatus::bound_exceeded, {}};
}

}  // namespace

auto solve_nonneg(const AbelianGroup& g, const std::vector<IntVec>& gens0, const IntVec& target0,
                  const SolveOptions& opts) -> SolveResult {
  const Int bound = opts.bound.value_or(default_solve_bound(target0));
  if (bound < 1) throw std::invalid_argument("solve_nonneg: bound must be at least 1");
  std::vector<IntVec> gens;
  for (const auto& x : gens0) gens.push_back(g.canonical(x));
  const IntVec target = g.canonical(target0);
  const std::size_t n = gens.size();

  if (is_zero(target)) return {SolveStatus::found, IntVec(n)};
  if (!solve_in_group(g, gens, target)) return {SolveStatus::not_found, {}};

  std::vector<IntVec> free_gens;
  for (const auto& x : gens) free_gens.push_back(g.free_part(x));
  const auto dual = dual_cone(free_gens, g.free_rank);
  const IntVec tf = g.free_part(target);
  for (const auto& l : dual.lineality)
    if (dot(l, tf) != 0) return {SolveStatus::not_found, {}};
  for (const auto& r : dual.rays)
    if (dot(r, tf) < 0) return {SolveStatus::not_found, {}};

  std::vector<std::size_t> units, others;
  for (std::size_t i = 0; i < n; ++i) {
    bool in_lineality = std::all_of(dual.rays.begin(), dual.rays.end(),
                                    [&](const IntVec& r) { return dot(r, free_gens[i]) == 0; });
    (in_lineality ? units : others).push_back(i);
  }
  if (units.empty()) return solve_sharp(g, gens, target, dual.rays, bound, opts.node_budget);

  // Units generate a subgroup H ⊆ M; solve in G/H, then absorb the residual
  // using a strictly positive relation among the units.
  std::vector<IntVec> ugens;
  for (auto i : units) ugens.push_back(gens[i]);
  auto q = quotient_group(g, ugens);
  std::vector<IntVec> qgens;
  for (auto i : others) qgens.push_back(q.project(gens[i]));

  IntVec a_other(others.size());
  if (!others.empty()) {
    SolveOptions sub = opts;
    sub.bound = bound;
    auto r = solve_nonneg(q.group, qgens, q.project(target), sub);
    if (r.status != SolveStatus::found) return r;
    a_other = r.coefficients;
  } else if (!is_zero(q.project(target))) {
    return {SolveStatus::not_found, {}};
  }

  IntVec residual = target;
  for (std::size_t k = 0; k < others.size(); ++k)
    residual = g.sub(residual, g.scale(a_other[k], gens[others[k]]));
  auto z = solve_in_group(g, ugens, residual);
  if (!z) throw std::logic_error("solve_nonneg: residual not in unit subgroup");

  // Strictly positive λ with Σ λ_j f_j = 0 on the free parts of the units.
  const std::size_t k = ugens.size();
  std::vector<IntVec> cons;
  for (std::size_t j = 0; j < k; ++j) {
    IntVec e(k);
    e[j] = 1;
    cons.push_back(std::move(e));
  }
  for (std::size_t row = 0; row < g.free_rank; ++row) {
    IntVec p(k), m(k);
    for (std::size_t j = 0; j < k; ++j) {
      p[j] = ugens[j][row];
      m[j] = -ugens[j][row];
    }
    cons.push_back(std::move(p));
    cons.push_back(std::move(m));
  }
  auto rel = dual_cone(cons, k);
  IntVec c(k);
  for (const auto& r : rel.rays)
    for (std::size_t j = 0; j < k; ++j) c[j] += r[j];
  const Int e = g.exponent();
  for (auto& x : c) x *= e;
  Int shift = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (c[j] <= 0) throw std::logic_error("solve_nonneg: unit relation not strictly positive");
    if ((*z)[j] < 0) {
      Int need = (-(*z)[j] + c[j] - 1) / c[j];
      shift = std::max(shift, need);
    }
  }
  IntVec coef(n);
  for (std::size_t j = 0; j < k; ++j) coef[units[j]] = (*z)[j] + shift * c[j];
  for (std::size_t t = 0; t < others.size(); ++t) coef[others[t]] = a_other[t];
  return {SolveStatus::found, coef};
}

}  // namespace corral
