#include "corral/cone.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace corral {

namespace {

auto combine(const Int& s, const IntVec& x, const Int& t, const IntVec& y) -> IntVec {
  IntVec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = s * x[i] + t * y[i];
  return primitive(std::move(out));
}

auto negate(IntVec v) -> IntVec {
  for (auto& x : v) x = -x;
  return v;
}

void sort_unique(std::vector<IntVec>& vs) {
  std::sort(vs.begin(), vs.end(), lex_less);
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

}  // namespace

auto dual_cone(const std::vector<IntVec>& constraints, std::size_t dim) -> DualDescription {
  std::vector<IntVec> lin = IntMatrix::identity(dim).row_list();
  std::vector<IntVec> rays;
  std::vector<IntVec> processed;

  for (const auto& a0 : constraints) {
    if (a0.size() != dim) throw std::invalid_argument("dual_cone: constraint has wrong length");
    if (is_zero(a0)) continue;
    const IntVec a = primitive(a0);

    auto hit = std::find_if(lin.begin(), lin.end(), [&](const IntVec& l) { return dot(a, l) != 0; });
    if (hit != lin.end()) {
      IntVec l = *hit;
      Int s = dot(a, l);
      if (s < 0) {
        l = negate(l);
        s = -s;
      }
      std::vector<IntVec> next_lin;
      for (auto it = lin.begin(); it != lin.end(); ++it) {
        if (it == hit) continue;
        next_lin.push_back(combine(s, *it, -dot(a, *it), l));
      }
      for (auto& r : rays) r = combine(s, r, -dot(a, r), l);
      rays.push_back(primitive(l));
      lin = std::move(next_lin);
      processed.push_back(a);
      continue;
    }

    std::vector<Int> val;
    val.reserve(rays.size());
    bool any_neg = false;
    for (const auto& r : rays) {
      val.push_back(dot(a, r));
      if (val.back() < 0) any_neg = true;
    }
    if (!any_neg) {
      processed.push_back(a);
      continue;
    }

    // Tight sets over the constraints processed so far.
    std::vector<std::vector<bool>> tight(rays.size(), std::vector<bool>(processed.size()));
    for (std::size_t i = 0; i < rays.size(); ++i)
      for (std::size_t c = 0; c < processed.size(); ++c) tight[i][c] = dot(processed[c], rays[i]) == 0;

    const std::size_t free_dim = dim - lin.size();
    const std::size_t need = free_dim >= 2 ? free_dim - 2 : 0;
    std::vector<IntVec> next;
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (val[i] >= 0) next.push_back(rays[i]);
    for (std::size_t p = 0; p < rays.size(); ++p) {
      if (val[p] <= 0) continue;
      for (std::size_t n = 0; n < rays.size(); ++n) {
        if (val[n] >= 0) continue;
        std::vector<IntVec> common;
        for (std::size_t c = 0; c < processed.size(); ++c)
          if (tight[p][c] && tight[n][c]) common.push_back(processed[c]);
        if (common.size() < need) continue;
        if (rank_of(common, dim) != need) continue;
        next.push_back(combine(val[p], rays[n], -val[n], rays[p]));
      }
    }
    rays = std::move(next);
    sort_unique(rays);
    processed.push_back(a);
  }

  DualDescription out;
  if (!lin.empty()) out.lineality = hermite_rows(IntMatrix::from_rows(lin, dim)).row_list();
  out.rays = std::move(rays);
  sort_unique(out.rays);
  return out;
}

auto ConeDescription::contains(const IntVec& x) const -> bool {
  for (const auto& e : equations)
    if (dot(e, x) != 0) return false;
  for (const auto& f : facets)
    if (dot(f, x) < 0) return false;
  return true;
}

auto ConeDescription::in_interior(const IntVec& x) const -> bool {
  for (const auto& e : equations)
    if (dot(e, x) != 0) return false;
  for (const auto& f : facets)
    if (dot(f, x) <= 0) return false;
  return true;
}

auto describe_cone(const std::vector<IntVec>& gens, std::size_t dim) -> ConeDescription {
  auto d = dual_cone(gens, dim);
  return ConeDescription{dim, d.lineality, d.rays};
}

auto cone_lineality(const ConeDescription& c) -> std::vector<IntVec> {
  std::vector<IntVec> rows = c.equations;
  rows.insert(rows.end(), c.facets.begin(), c.facets.end());
  if (rows.empty()) return IntMatrix::identity(c.dim).row_list();
  return kernel_lattice(IntMatrix::from_rows(rows, c.dim)).row_list();
}

auto extreme_rays(const ConeDescription& c) -> std::vector<IntVec> {
  std::vector<IntVec> cons = c.facets;
  for (const auto& e : c.equations) {
    cons.push_back(e);
    cons.push_back(negate(e));
  }
  auto d = dual_cone(cons, c.dim);
  if (!d.lineality.empty()) throw std::invalid_argument("extreme_rays: cone is not pointed");
  return d.rays;
}

namespace {

using RayIndexSet = std::vector<std::size_t>;

struct Triangulator {
  const std::vector<IntVec>& rays;
  std::vector<std::vector<bool>> on_facet;  // facet × ray
  std::size_t dim;

  auto run(const RayIndexSet& s, std::size_t k) -> std::vector<RayIndexSet> {
    if (s.size() == k) return {s};
    const std::size_t r0 = s.front();
    std::set<RayIndexSet> faces;
    for (const auto& row : on_facet) {
      if (row[r0]) continue;
      RayIndexSet t;
      for (auto i : s)
        if (row[i]) t.push_back(i);
      if (t.size() + 1 < k) continue;
      std::vector<IntVec> vs;
      for (auto i : t) vs.push_back(rays[i]);
      if (rank_of(vs, dim) != k - 1) continue;
      faces.insert(std::move(t));
    }
    std::vector<RayIndexSet> out;
    for (const auto& t : faces)
      for (auto simplex : run(t, k - 1)) {
        simplex.insert(simplex.begin(), r0);
        out.push_back(std::move(simplex));
      }
    return out;
  }
};

// Nonzero lattice points Σ q_i v_i with q_i ∈ [0,1) of a unimodular-or-not simplicial cone.
void parallelepiped_points(const std::vector<IntVec>& v, std::size_t dim, std::size_t cap,
                           std::set<IntVec, bool (*)(const IntVec&, const IntVec&)>& out) {
  IntMatrix vm = IntMatrix::from_cols(v, dim);
  Int det = abs(determinant(vm));
  if (det == 1) return;
  if (det > cap) throw HilbertBoundExceeded("hilbert basis: simplicial cone volume " + det.get_str() + " exceeds cap");
  auto snf = smith_normal_form(vm);
  IntMatrix uinv = inverse_unimodular(snf.U);

  // Rational inverse of V for barycentric coordinates.
  std::vector<std::vector<Rat>> inv(dim, std::vector<Rat>(dim));
  {
    std::vector<std::vector<Rat>> m(dim, std::vector<Rat>(2 * dim));
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) m[i][j] = vm(i, j);
      m[i][dim + i] = 1;
    }
    for (std::size_t c = 0; c < dim; ++c) {
      std::size_t p = c;
      while (m[p][c] == 0) ++p;
      std::swap(m[p], m[c]);
      Rat s = 1 / m[c][c];
      for (auto& x : m[c]) x *= s;
      for (std::size_t i = 0; i < dim; ++i) {
        if (i == c || m[i][c] == 0) continue;
        Rat f = m[i][c];
        for (std::size_t j = 0; j < 2 * dim; ++j) m[i][j] -= f * m[c][j];
      }
    }
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) inv[i][j] = m[i][dim + j];
  }

  IntVec c(dim);
  while (true) {
    IntVec y = uinv * c;
    std::vector<Rat> q(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) q[i] += inv[i][j] * y[j];
    std::vector<Rat> frac(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      Int fl;
      mpz_fdiv_q(fl.get_mpz_t(), q[i].get_num_mpz_t(), q[i].get_den_mpz_t());
      frac[i] = q[i] - fl;
    }
    std::vector<Rat> x(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) x[i] += frac[j] * vm(i, j);
    IntVec xi(dim);
    for (std::size_t i = 0; i < dim; ++i) xi[i] = x[i].get_num();
    if (!is_zero(xi)) {
      out.insert(xi);
      if (out.size() > cap) throw HilbertBoundExceeded("hilbert basis: candidate count exceeds cap");
    }
    // Odometer over ⊕ ℤ/d_i.
    std::size_t i = 0;
    for (; i < dim; ++i) {
      c[i] += 1;
      if (c[i] < snf.diagonal[i]) break;
      c[i] = 0;
    }
    if (i == dim) break;
  }
}

auto hilbert_pointed(const std::vector<IntVec>& gens, std::size_t dim, const HilbertOptions& opts)
    -> std::vector<IntVec> {
  ConeDescription desc = describe_cone(gens, dim);
  const auto rays = extreme_rays(desc);
  Triangulator tri{rays, {}, dim};
  for (const auto& f : desc.facets) {
    std::vector<bool> row(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) row[i] = dot(f, rays[i]) == 0;
    tri.on_facet.push_back(std::move(row));
  }
  RayIndexSet all(rays.size());
  for (std::size_t i = 0; i < rays.size(); ++i) all[i] = i;

  std::set<IntVec, bool (*)(const IntVec&, const IntVec&)> cand(lex_less);
  for (const auto& r : rays) cand.insert(r);
  for (const auto& simplex : tri.run(all, dim)) {
    std::vector<IntVec> v;
    for (auto i : simplex) v.push_back(rays[i]);
    parallelepiped_points(v, dim, opts.cap, cand);
  }

  // Irreducibles: process by degree under a strictly positive functional and
  // compare only against accepted elements of smaller degree.
  IntVec grading(dim);
  for (const auto& f : desc.facets)
    for (std::size_t i = 0; i < dim; ++i) grading[i] += f[i];
  std::vector<std::pair<Int, IntVec>> order;
  for (const auto& x : cand) order.emplace_back(dot(grading, x), x);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : lex_less(a.second, b.second);
  });
  std::vector<std::pair<Int, IntVec>> basis;
  for (const auto& [deg, x] : order) {
    bool reducible = false;
    for (const auto& [hd, h] : basis) {
      if (hd >= deg) break;
      IntVec diff(dim);
      for (std::size_t i = 0; i < dim; ++i) diff[i] = x[i] - h[i];
      if (desc.contains(diff)) {
        reducible = true;
        break;
      }
    }
    if (!reducible) basis.emplace_back(deg, x);
  }
  std::vector<IntVec> out;
  for (auto& [d, x] : basis) out.push_back(std::move(x));
  sort_unique(out);
  return out;
}

// Full-dimensional cone in ℤ^dim, possibly with lineality.
auto hilbert_full(const std::vector<IntVec>& gens, std::size_t dim, const HilbertOptions& opts)
    -> std::vector<IntVec> {
  ConeDescription desc = describe_cone(gens, dim);
  auto lin = cone_lineality(desc);
  if (lin.empty()) return hilbert_pointed(gens, dim, opts);
  if (lin.size() == dim) {
    std::vector<IntVec> out;
    for (const auto& u : lin) {
      out.push_back(u);
      out.push_back(negate(u));
    }
    sort_unique(out);
    return out;
  }
  auto q = cokernel_group(IntMatrix::from_cols(lin, dim));
  std::vector<IntVec> proj;
  for (const auto& g : gens) {
    auto p = q.project(g);
    if (!is_zero(p)) proj.push_back(std::move(p));
  }
  auto hb = hilbert_pointed(proj, q.group.free_rank, opts);
  std::vector<IntVec> out;
  for (const auto& h : hb) {
    auto lift = solve_integer(q.projection, h);
    if (!lift) throw std::logic_error("hilbert basis: lift failed");
    out.push_back(*lift);
  }
  for (const auto& u : lin) {
    out.push_back(u);
    out.push_back(negate(u));
  }
  sort_unique(out);
  return out;
}

}  // namespace

auto hilbert_basis(const std::vector<IntVec>& gens, std::size_t dim, const HilbertOptions& opts)
    -> std::vector<IntVec> {
  std::vector<IntVec> nz;
  for (const auto& g : gens) {
    if (g.size() != dim) throw std::invalid_argument("hilbert_basis: generator has wrong length");
    if (!is_zero(g)) nz.push_back(g);
  }
  if (nz.empty()) return {};

  // Restrict to the saturated lattice span(gens) ∩ ℤ^dim.
  auto normals = kernel_lattice(IntMatrix::from_rows(nz, dim));
  IntMatrix basis = normals.rows() == 0 ? IntMatrix::identity(dim) : kernel_lattice(normals);
  const std::size_t s = basis.rows();
  IntMatrix bt = basis.transpose();
  std::vector<IntVec> coords;
  for (const auto& g : nz) {
    auto c = solve_integer(bt, g);
    if (!c) throw std::logic_error("hilbert basis: generator outside its span lattice");
    coords.push_back(std::move(*c));
  }
  std::vector<IntVec> out;
  for (const auto& h : hilbert_full(coords, s, opts)) out.push_back(bt * h);
  sort_unique(out);
  return out;
}

auto hilbert_basis_of_inequalities(const std::vector<IntVec>& constraints, std::size_t dim,
                                   const HilbertOptions& opts) -> std::vector<IntVec> {
  auto d = dual_cone(constraints, dim);
  std::vector<IntVec> gens = d.rays;
  for (const auto& l : d.lineality) {
    gens.push_back(l);
    gens.push_back(negate(l));
  }
  return hilbert_basis(gens, dim, opts);
}

}  // namespace corral
