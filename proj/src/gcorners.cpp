#include "corral/gcorners.hpp"

#include <algorithm>
#include <cmath>

namespace corral {

auto build_local_model(const AffineMonoid& p) -> LocalModel {
  p.validate();
  if (classify(p).weakly_toric != Tri::yes)
    throw DomainError("not_weakly_toric", "local models need a weakly toric monoid");
  LocalModel m;
  m.monoid = p;
  const std::size_t n = p.size();
  if (n > 0 && p.ambient.free_rank > 0) {
    auto ker = kernel_lattice(IntMatrix::from_cols(p.gens, p.ambient.free_rank));
    for (std::size_t k = 0; k < ker.rows(); ++k) {
      IntVec u(n), v(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (ker(k, i) > 0) u[i] = ker(k, i);
        if (ker(k, i) < 0) v[i] = -ker(k, i);
      }
      m.relations.emplace_back(std::move(u), std::move(v));
    }
  } else {
    // Every generator is 0: x_i = 1.
    for (std::size_t i = 0; i < n; ++i) {
      IntVec u(n);
      u[i] = 1;
      m.relations.emplace_back(std::move(u), IntVec(n));
    }
  }
  m.split = sharpen_split(p);
  m.free_rank = m.split.split_rank;
  m.dim = p.ambient.free_rank;
  return m;
}

namespace {

auto monomial(const std::vector<double>& x, const IntVec& e) -> double {
  double r = 1;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (e[i] != 0) r *= std::pow(x[i], e[i].get_d());
  return r;
}

}  // namespace

auto validate_point(const LocalModel& m, const std::vector<double>& x, const ModelTolerance& tol) -> PointCheck {
  PointCheck c;
  if (x.size() != m.size()) {
    c.ok = false;
    c.reason = "expected " + std::to_string(m.size()) + " coordinates";
    return c;
  }
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] >= 0) || !std::isfinite(x[i])) {
      c.ok = false;
      c.reason = "coordinate " + m.monoid.labels[i] + " is not a finite nonnegative number";
      return c;
    }
  for (std::size_t j = 0; j < m.relations.size(); ++j) {
    const double a = monomial(x, m.relations[j].first), b = monomial(x, m.relations[j].second);
    const double res = std::abs(a - b);
    if (res > tol.relative * (1 + std::max(std::abs(a), std::abs(b)))) {
      c.ok = false;
      c.relation = j;
      c.residual = res;
      c.reason = "binomial relation " + std::to_string(j + 1) + " violated";
      return c;
    }
    c.residual = std::max(c.residual, res);
  }
  return c;
}

auto depth_at(const LocalModel& m, const std::vector<double>& x, const ModelTolerance& tol) -> Depth {
  auto check = validate_point(m, x, tol);
  if (!check.ok) throw DomainError("invalid_point", check.reason);
  std::vector<std::size_t> vanishing;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] <= tol.zero) vanishing.push_back(i);
  for (auto& p : primes(m.monoid, true)) {
    if (p.generators != vanishing) continue;
    return Depth{m.dim - p.complement.rank, std::move(p)};
  }
  throw DomainError("invalid_point", "vanishing coordinates do not form a prime ideal");
}

auto corner_decomposition(const LocalModel& m) -> CornerDecomposition {
  CornerDecomposition d;
  d.grading.assign(m.sharp_rank() + 1, 0);
  for (auto& p : primes(m.monoid, true)) {
    CornerStratum s;
    s.face = p.complement;
    s.key = p.complement.support;
    s.codim = m.dim - p.complement.rank;
    s.fiber = corner_fiber(m.monoid, p);
    s.prime = std::move(p);
    ++d.grading[s.codim];
    d.strata.push_back(std::move(s));
  }
  return d;
}

auto CornerDecomposition::boundary() const -> std::vector<std::size_t> {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < strata.size(); ++i)
    if (strata[i].codim == 1) out.push_back(i);
  return out;
}

auto CornerDecomposition::stratum_of(const PrimeIdeal& p) const -> std::optional<std::size_t> {
  for (std::size_t i = 0; i < strata.size(); ++i)
    if (strata[i].prime.generators == p.generators) return i;
  return std::nullopt;
}

}  // namespace corral
