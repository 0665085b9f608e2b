#include <cmath>
#include <random>

#include "corral/bcotangent.hpp"
#include "corral/faces.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace corral;
using namespace fixture;

namespace {

auto random_point(std::mt19937& rng, std::size_t nx, std::size_t ny) -> RPoint {
  std::uniform_real_distribution<double> ux(-1.0, 1.0), uy(0.5, 2.0);
  RPoint p;
  for (std::size_t i = 0; i < nx; ++i) p.x.push_back(ux(rng));
  for (std::size_t i = 0; i < ny; ++i) p.y.push_back(uy(rng));
  return p;
}

// b-gradient of log g by differentiating g itself: bgrad(g) / g.
auto generic_log_row(const InteriorExpr& e, const RPoint& p) -> std::vector<double> {
  auto d = eval_and_bderiv(e.as_smooth(), p);
  for (auto& v : d.bgrad) v /= d.value;
  return d.bgrad;
}

}  // namespace

TEST_CASE("b-gradients of examples") {
  // x1 interior, x2 real: columns are (x2, x1).
  auto e = y(0) * exp(x(0));
  auto d = eval_and_bderiv(e, RPoint{{3.0}, {2.0}});
  const double v = 2 * std::exp(3.0);
  CHECK(d.value == doctest::Approx(v));
  CHECK(d.bgrad[0] == doctest::Approx(v));
  CHECK(d.bgrad[1] == doctest::Approx(v));
  auto fd = oracle::five_point_bgrad(e, RPoint{{3.0}, {2.0}}, 1e-3);
  CHECK(fd[1] == doctest::Approx(v).epsilon(1e-8));

  auto c = eval_and_bderiv(SmoothExpr::constant(4.5), RPoint{{1.0}, {2.0}});
  CHECK(c.bgrad == std::vector<double>{0.0, 0.0});

  CHECK(eval_and_bderiv(pow(y(0), 2), RPoint{{}, {4.0}}).bgrad[0] == doctest::Approx(32.0));
  CHECK(eval_and_bderiv(y(0) * y(0), RPoint{{}, {4.0}}).bgrad[0] == doctest::Approx(32.0));

  // At the boundary the b-partial of y^n is the exact limit 0 and of y·e^y is 0.
  CHECK(eval_and_bderiv(pow(y(0), 3), RPoint{{}, {0.0}}).bgrad[0] == 0.0);
  CHECK(eval_and_bderiv(y(0) * exp(y(0)), RPoint{{}, {0.0}}).bgrad[0] == 0.0);
  // log-type rows keep the exponent at y = 0.
  CHECK(mono({3}, y(0)).log_bgrad(RPoint{{}, {0.0}})[0] == 3.0);

  CHECK_THROWS_AS(eval_and_bderiv(y(2), RPoint{{}, {1.0}}), DomainError);
}

TEST_CASE("symbolic b-partials agree with forward mode") {
  std::mt19937 rng(11);
  for (int t = 0; t < 60; ++t) {
    auto e = oracle::random_expr(rng, 4, 2, 2);
    auto p = random_point(rng, 2, 2);
    if (t % 3 == 0) p.y[0] = 0.0;  // boundary points too
    auto d = eval_and_bderiv(e, p);
    for (std::size_t i = 0; i < 4; ++i) {
      auto s = i < 2 ? bpartial(e, VarKind::real, i) : bpartial(e, VarKind::interior, i - 2);
      CHECK(s.eval(p) == doctest::Approx(d.bgrad[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("Leibniz rule and linearity") {
  std::mt19937 rng(5);
  for (int t = 0; t < 100; ++t) {
    auto a = oracle::random_expr(rng, 3, 2, 2), b = oracle::random_expr(rng, 3, 2, 2);
    auto p = random_point(rng, 2, 2);
    auto da = eval_and_bderiv(a, p), db = eval_and_bderiv(b, p);
    auto prod = eval_and_bderiv(a * b, p), sum = eval_and_bderiv(a + SmoothExpr::constant(2) * b, p);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(prod.bgrad[i] == doctest::Approx(db.value * da.bgrad[i] + da.value * db.bgrad[i]));
      CHECK(sum.bgrad[i] == doctest::Approx(da.bgrad[i] + 2 * db.bgrad[i]));
    }
  }
}

TEST_CASE("finite-difference check") {
  std::mt19937 rng(3);
  auto e = x(0) * exp(y(0));
  for (int t = 0; t < 10; ++t) CHECK(finite_difference_check(e, random_point(rng, 1, 1)) <= 1e-6);
  CHECK(finite_difference_check(SmoothExpr::constant(3), RPoint{{0.2}, {1.0}}) == 0.0);
  CHECK(eval_and_bderiv(pow(y(0), 3), RPoint{{}, {2.0}}).bgrad[0] == doctest::Approx(24.0));
  CHECK(finite_difference_check(pow(y(0), 3), RPoint{{}, {2.0}}) <= 1e-6);
  CHECK_THROWS_AS(finite_difference_check(e, RPoint{{1.0}, {0.0}}), DomainError);

  // The library's Richardson estimate against an independent five-point stencil.
  for (int t = 0; t < 30; ++t) {
    auto f = oracle::random_expr(rng, 4, 2, 2);
    auto p = random_point(rng, 2, 2);
    auto an = eval_and_bderiv(f, p).bgrad;
    auto fd = oracle::five_point_bgrad(f, p, 1e-3);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(fd[i] - an[i]) <= 1e-6 * std::max(1.0, std::abs(an[i])));
    CHECK(finite_difference_check(f, p) <= 1e-6);
  }
}

TEST_CASE("substitution and symbolic closure") {
  auto e = pow(x(0), 2) * exp(y(0));
  auto s = substitute(e, {y(1) + SmoothExpr::constant(1)}, {x(0)});
  RPoint p{{0.5}, {0.0, 2.0}};
  CHECK(s.eval(p) == doctest::Approx(9 * std::exp(0.5)));
  CHECK(s == substitute(e, {y(1) + SmoothExpr::constant(1)}, {x(0)}));
  CHECK_FALSE(s == e);
  auto g = mono({2, 1}, x(0));
  CHECK(g.as_smooth().eval(RPoint{{0.3}, {1.5, 2.0}}) == doctest::Approx(1.5 * 1.5 * 2.0 * std::exp(0.3)));
  CHECK((g * mono({0, 1})).alpha == ivec({2, 2}));
}

TEST_CASE("sharpened monoids") {
  auto c = free_cring("xy", {}, {"x", "y"});
  c.relations = {{mono({2, 0}), mono({0, 2})}};
  auto s = sharpened_monoid(c);
  CHECK(s.names == std::vector<std::string>{"x", "y"});
  REQUIRE(s.relations.size() == 1);
  CHECK(s.relations[0].first == ivec({2, 0}));
  auto g = groupify(s);
  CHECK(g.group.free_rank == 1);
  CHECK(g.group.torsion == std::vector<Int>{2});

  CHECK(sharpened_monoid(free_cring("F", {"a", "b"}, {"u", "v", "w"})).relations.empty());
  CHECK(integralize(sharpened_monoid(free_cring("F", {"a"}, {"u", "v"}))).rank() == 2);
  CHECK(sharpened_monoid(free_cring("R", {"a"}, {})).names.empty());

  // Exponential factors vanish in the sharpening.
  auto e = free_cring("E", {"t"}, {"u", "v"});
  e.relations = {{mono({1, 0}, x(0)), mono({0, 1})}};
  CHECK(classify(sharpened_monoid(e)).toric == Tri::yes);
  CHECK(isomorphic(integralize(sharpened_monoid(e)), AffineMonoid::free(1)) == Tri::yes);
}

TEST_CASE("fibres of examples") {
  for (std::size_t n = 0; n <= 4; ++n)
    for (std::size_t k = 0; k <= n; ++k) {
      auto c = rnk_ring(n, k);
      RPoint p{std::vector<double>(n - k, 0.25), std::vector<double>(k, 0.0)};
      CHECK(bcotangent_fibre(c, p).fibre_dim == n);
    }

  auto f75 = bcotangent_fibre(ex75(), RPoint{{0.0}, {1.0}});
  CHECK(f75.gamma.rows() == 2);
  CHECK(f75.gamma(0, 0) == 0.0);
  CHECK(f75.gamma(0, 1) == -1.0);
  CHECK(f75.gamma(1, 0) == 1.0);
  CHECK(f75.gamma(1, 1) == 0.0);
  CHECK(f75.fibre_dim == 0);
  CHECK(f75.rank.stable());
  CHECK(f75.labels == std::vector<std::string>{"x", "y"});
  // y = 0 also solves y = y², e^x y = y, for every x.
  CHECK(bcotangent_fibre(ex75(), RPoint{{0.7}, {0.0}}).fibre_dim == 0);
  CHECK_THROWS_AS(bcotangent_fibre(ex75(), RPoint{{0.7}, {1.0}}), DomainError);

  for (unsigned k = 1; k <= 4; ++k) {
    auto f = bcotangent_fibre(ex74(k), RPoint{{}, {0.0}});
    CHECK(f.gamma.rows() == 1);
    CHECK(f.gamma(0, 0) == 0.0);
    CHECK(f.fibre_dim == 1);
    CHECK(f.rank.stable());
  }

  auto pyr = bcotangent_fibre(pyramid_ring(), RPoint{{}, {1.0, 2.0, 0.5, 4.0}});
  CHECK(pyr.fibre_dim == 3);
  CHECK(bcotangent_fibre(pyramid_ring(), RPoint{{}, {0.0, 0.0, 0.0, 0.0}}).fibre_dim == 3);
}

TEST_CASE("interior rows: normal form against generic differentiation") {
  std::mt19937 rng(17);
  for (int t = 0; t < 40; ++t) {
    std::uniform_int_distribution<long> ex(0, 3);
    InteriorExpr g{ivec({ex(rng), ex(rng)}), oracle::random_expr(rng, 3, 1, 2)};
    InteriorExpr h{ivec({ex(rng), ex(rng)}), oracle::random_expr(rng, 3, 1, 2)};
    auto p = random_point(rng, 1, 2);
    auto a = g.log_bgrad(p), b = h.log_bgrad(p);
    auto ga = generic_log_row(g, p), gb = generic_log_row(h, p);
    for (std::size_t i = 0; i < 3; ++i) CHECK(a[i] - b[i] == doctest::Approx(ga[i] - gb[i]).epsilon(1e-9));
  }
}

TEST_CASE("fibre dimension is invariant under redundant generators") {
  std::mt19937 rng(23);
  std::vector<std::pair<CRingPresentation, RPoint>> corpus = {
      {ex75(), RPoint{{0.0}, {1.0}}},
      {ex74(2), RPoint{{}, {0.0}}},
      {pyramid_ring(), RPoint{{}, {1.0, 2.0, 0.5, 4.0}}},
      {pyramid_ring(), RPoint{{}, {0.0, 2.0, 0.0, 4.0}}},
      {rnk_ring(3, 1), RPoint{{0.1, 0.2}, {0.0}}},
  };
  for (const auto& [c, p] : corpus) {
    const auto base = bcotangent_fibre(c, p).fibre_dim;
    for (int t = 0; t < 5; ++t) {
      // y_new = y^α exp(f) with α over the old interior generators.
      auto d = c;
      d.interior.push_back("ynew");
      for (auto& [g, h] : d.relations) {
        g.alpha.push_back(0);
        h.alpha.push_back(0);
      }
      InteriorExpr def{IntVec(c.interior.size() + 1), oracle::random_expr(rng, 2, c.real.size(), 0)};
      for (std::size_t i = 0; i < c.interior.size(); ++i) def.alpha[i] = std::uniform_int_distribution<long>(0, 2)(rng);
      d.relations.emplace_back(InteriorExpr::generator(c.interior.size(), c.interior.size() + 1), def);
      auto q = p;
      q.y.push_back(0.0);
      q.y.back() = def.eval(q);
      CAPTURE(c.name);
      CHECK(bcotangent_fibre(d, q).fibre_dim == base);
    }
  }
}

TEST_CASE("fibre dimension is invariant under saturation") {
  // ⟨u, v | 2u = 3v⟩ ≅ ⟨2, 3⟩ ⊂ ℕ, saturated to ℕ = ⟨t⟩ with u = t³, v = t².
  auto c = free_cring("cusp", {}, {"u", "v"});
  c.relations = {{mono({2, 0}), mono({0, 3})}};
  auto s = free_cring("cusp_sat", {}, {"t", "u", "v"});
  s.relations = {{mono({0, 1, 0}), mono({3, 0, 0})}, {mono({0, 0, 1}), mono({2, 0, 0})}};
  REQUIRE(classify(sharpened_monoid(c)).saturated == Tri::no);
  REQUIRE(classify(sharpened_monoid(s)).saturated == Tri::yes);
  for (double t : {0.0, 0.5, 1.0, 3.0}) {
    RPoint pc{{}, {t * t * t, t * t}}, ps{{}, {t, t * t * t, t * t}};
    CHECK(bcotangent_fibre(c, pc).fibre_dim == bcotangent_fibre(s, ps).fibre_dim);
  }

  // With exponential factors and a real generator: u² = v³ e^a.
  auto e = free_cring("cusp_exp", {"a"}, {"u", "v"});
  e.relations = {{mono({2, 0}), mono({0, 3}, x(0))}};
  auto es = free_cring("cusp_exp_sat", {"a"}, {"t", "u", "v"});
  es.relations = {{mono({0, 1, 0}), mono({3, 0, 0}, SmoothExpr::constant(2) * x(0))},
                  {mono({0, 0, 1}), mono({2, 0, 0}, x(0))}};
  for (double t : {0.0, 0.7, 2.0}) {
    const double a = 0.3;
    const double u = t * t * t * std::exp(2 * a), v = t * t * std::exp(a);
    CHECK(bcotangent_fibre(e, RPoint{{a}, {u, v}}).fibre_dim == bcotangent_fibre(es, RPoint{{a}, {t, u, v}}).fibre_dim);
  }
}

TEST_CASE("numeric rank") {
  RealMatrix m(2, 2);
  m << 1, 2, 2, 4;
  auto r = numeric_rank(m);
  CHECK(r.rank == 1);
  CHECK(r.stable());
  CHECK(r.singular_values.size() == 2);
  CHECK(numeric_rank(RealMatrix(0, 3)).rank == 0);
  RealMatrix z = RealMatrix::Zero(2, 2);
  CHECK(numeric_rank(z).rank == 0);
  // A gap between the two tolerances is reported as unstable.
  m << 1, 0, 0, 1e-9;
  auto b = numeric_rank(m);
  CHECK(b.rank == 1);
  CHECK_FALSE(b.stable());
}

TEST_CASE("pushout sequences") {
  for (const auto& s : span_corpus()) {
    CAPTURE(s.name);
    auto r = pushout_sequence_check(s.alpha, s.beta, s.point);
    CHECK(r.exact());
    CHECK(r.stable);
    // Swapping the two sides gives the same numbers.
    auto [pd, pe] = split_pushout_point(s.alpha, s.beta, s.point);
    RPoint swapped{pe.x, pe.y};
    swapped.x.insert(swapped.x.end(), pd.x.begin(), pd.x.end());
    swapped.y.insert(swapped.y.end(), pd.y.begin(), pd.y.end());
    auto t = pushout_sequence_check(s.beta, s.alpha, swapped);
    CHECK(t.exact());
    CHECK(t.first_rank == r.first_rank);
    CHECK(t.dim_f == r.dim_f);
  }

  auto id = pushout_sequence_check(identity_span().alpha, identity_span().beta, identity_span().point);
  CHECK(id.dim_c == 2);
  CHECK(id.dim_d == 1);
  CHECK(id.dim_e == 2);
  CHECK(id.dim_f == 1);

  auto e68 = pushout_sequence_check(ex68_span().alpha, ex68_span().beta, ex68_span().point);
  CHECK(e68.dim_c == 2);
  CHECK(e68.dim_d + e68.dim_e == 2);
  CHECK(e68.dim_f == 0);
  CHECK(e68.first_rank == 2);

  auto mul = pushout_sequence_check(multiply_span().alpha, multiply_span().beta, multiply_span().point);
  CHECK(mul.dim_c == 1);
  CHECK(mul.dim_d == 2);
  CHECK(mul.dim_e == 2);
  CHECK(mul.dim_f == 3);
  CHECK(mul.first_rank == 1);

  // W = {x³ = 0}: the b-cotangent fibre stays 1-dimensional.
  auto e74 = pushout_sequence_check(ex74_span().alpha, ex74_span().beta, ex74_span().point);
  CHECK(e74.dim_f == 1);
  CHECK(e74.first_rank == 0);

  // The pushout of the multiply span is the pyramid ring.
  auto f = pushout(multiply_span().alpha, multiply_span().beta);
  CHECK(isomorphic(integralize(sharpened_monoid(f)), pyramid()) == Tri::yes);

  // Points off the pushout are rejected.
  CHECK_THROWS_AS(pushout_sequence_check(ex68_span().alpha, ex68_span().beta, RPoint{{}, {1.0, 2.0}}), DomainError);
  auto other = ex68_span().beta;
  other.source.name = "Z2";
  CHECK_THROWS_AS(pushout(ex68_span().alpha, other), DomainError);
}

TEST_CASE("pushout labels") {
  auto s = identity_span();
  auto f = pushout(s.alpha, s.beta);
  CHECK(f.interior == std::vector<std::string>{"x", "z1", "z2"});
  auto g = ex68_span();
  g.beta.target.interior = {"x"};
  CHECK(pushout(g.alpha, g.beta).interior == std::vector<std::string>{"X.x", "Y.x"});
}

TEST_CASE("corner sequences") {
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t k = 0; k <= n; ++k) {
      auto c = rnk_ring(n, k);
      for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::vector<std::size_t> prime;
        RPoint p{std::vector<double>(n - k, -0.5), std::vector<double>(k, 2.0)};
        for (std::size_t i = 0; i < k; ++i)
          if (mask >> i & 1) {
            prime.push_back(i);
            p.y[i] = 0.0;
          }
        auto r = corner_sequence_check(c, prime, p);
        CAPTURE(n);
        CAPTURE(k);
        CAPTURE(mask);
        CHECK(r.exact());
        CHECK(r.stable);
        CHECK(r.dim_d == n - prime.size());
        CHECK(r.dim_c == n);
        CHECK(r.dim_corner == prime.size());
      }
    }

  auto pyr = pyramid_ring();
  const auto m = integralize(sharpened_monoid(pyr));
  const auto ps = primes(m, true);
  REQUIRE(ps.size() == 10);
  for (const auto& q : ps) {
    RPoint p{{}, {1.0, 1.0, 1.0, 1.0}};
    for (auto i : q.generators) p.y[i] = 0.0;
    auto r = corner_sequence_check(pyr, q.generators, p);
    CHECK(r.exact());
    CHECK(r.stable);
    CHECK(r.dim_c == 3);
    CHECK(r.dim_corner == corner_fiber(m, q).rank());
    CHECK(r.dim_d + r.dim_corner == 3);
  }
  auto vertex = corner_sequence_check(pyr, {0, 1, 2, 3}, RPoint{{}, {0, 0, 0, 0}});
  CHECK(vertex.dim_d == 0);
  CHECK(vertex.dim_corner == 3);

  // Not a prime, or a point off the stratum.
  CHECK_THROWS_AS(corner_sequence_check(pyr, {0, 1}, RPoint{{}, {0, 0, 1, 1}}), DomainError);
  CHECK_THROWS_AS(corner_sequence_check(pyr, {0}, RPoint{{}, {0, 1, 1, 1}}), DomainError);
  CHECK_THROWS_AS(corner_sequence_check(pyr, {0, 3}, RPoint{{}, {0, 1, 1, 1}}), DomainError);
}

TEST_CASE("corner sequence needs a toric ring") {
  CHECK(cring_toric(ex75()) == Tri::no);
  CHECK_THROWS_AS(corner_sequence_check(ex75(), {0}, RPoint{{0.0}, {0.0}}), DomainError);
  CornerSequenceOptions opts;
  opts.require_toric = false;
  // Ω_D = ℝ·dx maps to Ω_C ⊗ D = 0: exact except on the left.
  auto r = corner_sequence_check(ex75(), {0}, RPoint{{0.0}, {0.0}}, opts);
  CHECK(r.dim_d == 1);
  CHECK(r.dim_c == 0);
  CHECK(r.dim_corner == 0);
  CHECK_FALSE(r.left_exact);
  CHECK(r.middle_exact);
  CHECK(r.right_exact);
  CHECK(r.composition_zero);

  auto d = corner_quotient(ex75(), {0});
  CHECK(d.interior.empty());
  CHECK(d.relations.empty());
  CHECK(d.real == std::vector<std::string>{"x"});
}
