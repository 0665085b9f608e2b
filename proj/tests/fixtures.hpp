#pragma once

// Shared example objects for the unit tests and the acceptance runner.

#include <string>
#include <vector>

#include "corral/bcotangent.hpp"
#include "corral/transverse.hpp"

namespace fixture {

using namespace corral;

inline auto pyramid() -> AffineMonoid {
  return integralize(MonoidPresentation{{"p1", "p2", "p3", "p4"}, {{ivec({1, 1, 0, 0}), ivec({0, 0, 1, 1})}}});
}

// ℕ^k × ℤ^{n−k} by e_1..e_n and −(e_{k+1} + … + e_n).
inline auto rnk(std::size_t n, std::size_t k) -> AffineMonoid {
  AffineMonoid m;
  m.ambient = AbelianGroup::free(n);
  m.gens = IntMatrix::identity(n).row_list();
  if (k < n) {
    IntVec last(n);
    for (std::size_t i = k; i < n; ++i) last[i] = -1;
    m.gens.push_back(last);
  }
  m.labels = default_labels(m.gens.size(), "x");
  return m;
}

// ---- germs ----

inline auto side(const std::string& name, AffineMonoid m, std::size_t l = 0) -> GermSide {
  return GermSide{name, std::move(m), l};
}

inline auto rat(std::initializer_list<std::initializer_list<long>> rows) -> RatMatrix {
  RatMatrix out;
  for (auto r : rows) {
    std::vector<Rat> row;
    for (auto v : r) row.emplace_back(v);
    out.push_back(std::move(row));
  }
  return out;
}

inline auto germ(GermSide src, GermSide tgt, std::vector<IntVec> phi, RatMatrix jac) -> GermMap {
  return GermMap{std::move(src), std::move(tgt), std::move(phi), std::move(jac)};
}

inline auto n(std::size_t k) { return AffineMonoid::free(k); }

struct Pair {
  std::string name;
  GermMap g, h;
};

// g(x) = (x, x), h(y) = (y, y²) into [0,∞)².
inline auto ex68() -> Pair {
  return {"ex68", germ(side("x", n(1)), side("z", n(2)), {ivec({1}), ivec({1})}, rat({{1}, {1}})),
          germ(side("y", n(1)), side("z", n(2)), {ivec({1}), ivec({2})}, rat({{1}, {2}}))};
}

// g(x1, x2) = (x1, x1 e^{x2}) on [0,∞) × ℝ, h(y) = (y, y).
inline auto ex69() -> Pair {
  return {"ex69", germ(side("x", n(1), 1), side("z", n(2)), {ivec({1}), ivec({1})}, rat({{1, 0}, {1, 1}})),
          germ(side("y", n(1)), side("z", n(2)), {ivec({1}), ivec({1})}, rat({{1}, {1}}))};
}

inline auto identity_pair() -> Pair {
  auto id = germ(side("x", n(1)), side("z", n(1)), {ivec({1})}, rat({{1}}));
  return {"identity", id, id};
}

inline auto multiply_pair() -> Pair {
  auto mul = germ(side("x", n(2)), side("z", n(1)), {ivec({1, 1})}, rat({{1, 1}}));
  return {"multiply", mul, mul};
}

inline auto square_pair() -> Pair {
  auto sq = germ(side("x", n(1)), side("z", n(1)), {ivec({2})}, rat({{2}}));
  return {"square", sq, sq};
}

inline auto diagonal_pair() -> Pair {
  auto id2 = germ(side("x", n(2)), side("z", n(2)), {ivec({1, 0}), ivec({0, 1})}, rat({{1, 0}, {0, 1}}));
  auto diag = germ(side("y", n(1)), side("z", n(2)), {ivec({1}), ivec({1})}, rat({{1}, {1}}));
  return {"diagonal", id2, diag};
}

// g(x1, x2) = x1 e^{x2} on [0,∞) × ℝ against the identity on [0,∞).
inline auto free_factor_pair() -> Pair {
  return {"free factor", germ(side("x", n(1), 1), side("z", n(1)), {ivec({1})}, rat({{1, 1}})),
          germ(side("y", n(1)), side("z", n(1)), {ivec({1})}, rat({{1}}))};
}

inline auto germ_corpus() -> std::vector<Pair> {
  return {ex68(), ex69(), identity_pair(), multiply_pair(), square_pair(), diagonal_pair(), free_factor_pair()};
}

// ---- C∞-rings with corners ----

inline auto x(std::size_t i) { return SmoothExpr::real(i); }
inline auto y(std::size_t i) { return SmoothExpr::interior(i); }

// y^alpha · exp(f)
inline auto mono(std::initializer_list<long> alpha, SmoothExpr f = SmoothExpr::constant(0)) -> InteriorExpr {
  return InteriorExpr{ivec(alpha), std::move(f)};
}

// ℝ(x)[y]/[y = y², e^x y = y]
inline auto ex75() -> CRingPresentation {
  auto c = free_cring("ex75", {"x"}, {"y"});
  c.relations = {{mono({1}), mono({2})}, {mono({1}, x(0)), mono({1})}};
  return c;
}

// Interior y with the real relation y^n = 0.
inline auto ex74(unsigned k) -> CRingPresentation {
  auto c = free_cring("ex74", {}, {"y"});
  c.zeros = {pow(y(0), k)};
  return c;
}

// Real x_{k+1..n}, interior y_1..y_k.
inline auto rnk_ring(std::size_t n, std::size_t k) -> CRingPresentation {
  std::vector<std::string> real, interior;
  for (std::size_t i = 0; i < k; ++i) interior.push_back("y" + std::to_string(i + 1));
  for (std::size_t i = k; i < n; ++i) real.push_back("x" + std::to_string(i + 1));
  return free_cring("R" + std::to_string(n) + "_" + std::to_string(k), real, interior);
}

// [0,∞)^4 / [p1 p2 = p3 p4]
inline auto pyramid_ring() -> CRingPresentation {
  auto c = free_cring("pyramid", {}, {"p1", "p2", "p3", "p4"});
  c.relations = {{mono({1, 1, 0, 0}), mono({0, 0, 1, 1})}};
  return c;
}

struct Span {
  std::string name;
  CRingMorphism alpha, beta;
  RPoint point;  // on the pushout
};

inline auto morphism(std::string name, CRingPresentation s, CRingPresentation t, std::vector<SmoothExpr> real,
                     std::vector<InteriorExpr> interior) -> CRingMorphism {
  return CRingMorphism{std::move(name), std::move(s), std::move(t), std::move(real), std::move(interior)};
}

// Z = [0,∞)² with g(x) = (x, x) and h(y) = (y, y²): the rings of the germs ex68.
inline auto ex68_span() -> Span {
  auto z = free_cring("Z", {}, {"z1", "z2"});
  auto g = morphism("g", z, free_cring("X", {}, {"x"}), {}, {mono({1}), mono({1})});
  auto h = morphism("h", z, free_cring("Y", {}, {"y"}), {}, {mono({1}), mono({2})});
  return {"ex68", g, h, RPoint{{}, {1.0, 1.0}}};
}

inline auto multiply_span() -> Span {
  auto z = free_cring("Z", {}, {"z"});
  auto g = morphism("g", z, free_cring("X", {}, {"x1", "x2"}), {}, {mono({1, 1})});
  auto h = morphism("h", z, free_cring("Y", {}, {"y1", "y2"}), {}, {mono({1, 1})});
  return {"multiply", g, h, RPoint{{}, {1.0, 1.0, 1.0, 1.0}}};
}

inline auto identity_span() -> Span {
  auto g = ex68_span().alpha;
  return {"identity", g, identity_morphism(g.source), RPoint{{}, {1.0, 1.0, 1.0}}};
}

// X = [0,∞) → Z = ℝ by x^3, against the point * → 0; at the boundary.
inline auto ex74_span() -> Span {
  auto z = free_cring("Z", {"z"}, {});
  auto g = morphism("g", z, free_cring("X", {}, {"x"}), {pow(y(0), 3)}, {});
  auto h = morphism("h", z, free_cring("Y", {}, {}), {SmoothExpr::constant(0)}, {});
  return {"ex74", g, h, RPoint{{}, {0.0}}};
}

// Real generators only: t ↦ ab + e^a against t ↦ s.
inline auto real_span() -> Span {
  auto c = free_cring("T", {"t"}, {});
  auto g = morphism("g", c, free_cring("D", {"a", "b"}, {}), {x(0) * x(1) + exp(x(0))}, {});
  auto h = morphism("h", c, free_cring("E", {"s"}, {}), {x(0)}, {});
  const double a = 0.3, b = -0.7;
  return {"real", g, h, RPoint{{a, b, a * b + std::exp(a)}, {}}};
}

// Mixed: an interior generator mapped with an exponential factor.
inline auto mixed_span() -> Span {
  auto c = free_cring("C", {"t"}, {"u"});
  auto d = free_cring("D", {"a"}, {"v"});
  auto g = morphism("g", c, d, {x(0)}, {mono({2}, x(0))});
  auto h = morphism("h", c, free_cring("E", {"s"}, {"w"}), {x(0)}, {mono({1})});
  const double a = 0.4, v = 1.5;
  return {"mixed", g, h, RPoint{{a, a}, {v, v * v * std::exp(a)}}};
}

inline auto span_corpus() -> std::vector<Span> {
  return {identity_span(), ex68_span(), multiply_span(), ex74_span(), real_span(), mixed_span()};
}

}  // namespace fixture
