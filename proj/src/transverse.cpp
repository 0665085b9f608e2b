#include "corral/transverse.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace corral {

namespace {

void require_toric(const AffineMonoid& m, const std::string& what) {
  m.validate();
  if (classify(m).toric != Tri::yes) throw DomainError("not_toric", what + " must be a sharp toric monoid");
}

auto same_side(const GermSide& a, const GermSide& b) -> bool {
  return a.monoid.ambient == b.monoid.ambient && a.monoid.gens == b.monoid.gens && a.free_rank == b.free_rank;
}

void require_pair(const GermMap& g, const GermMap& h) {
  g.validate();
  h.validate();
  if (!same_side(g.target, h.target)) throw DomainError("target_mismatch", "germs must share their target");
}

auto support_where_zero(const IntVec& ell, const std::vector<IntVec>& gens) -> std::vector<std::size_t> {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (dot(ell, gens[i]) == 0) s.push_back(i);
  return s;
}

auto rank_of_support(const std::vector<IntVec>& gens, const std::vector<std::size_t>& s, std::size_t dim)
    -> std::size_t {
  std::vector<IntVec> v;
  for (auto i : s) v.push_back(gens[i]);
  return rank_of(v, dim);
}

auto slice(const IntVec& v, std::size_t from, std::size_t len) -> IntVec {
  return IntVec(v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(from + len));
}

}  // namespace

auto GermMap::phi_matrix() const -> IntMatrix {
  const std::size_t rx = source.rank(), rz = target.rank();
  if (phi.size() != target.monoid.size())
    throw DomainError("not_a_morphism", "one image per target generator is required");
  for (const auto& p : phi)
    if (p.size() != rx) throw DomainError("not_a_morphism", "image " + to_string(p) + " has the wrong length");
  IntMatrix out(rx, rz);
  if (rz == 0) {
    for (const auto& p : phi)
      if (!is_zero(p)) throw DomainError("not_a_morphism", "generator relations are not preserved");
    return out;
  }
  const IntMatrix tt = IntMatrix::from_cols(target.monoid.gens, rz).transpose();
  for (std::size_t i = 0; i < rx; ++i) {
    IntVec rhs;
    for (const auto& p : phi) rhs.push_back(p[i]);
    auto row = solve_integer(tt, rhs);
    if (!row) throw DomainError("not_a_morphism", "generator relations are not preserved");
    for (std::size_t j = 0; j < rz; ++j) out(i, j) = (*row)[j];
  }
  return out;
}

void GermMap::validate() const {
  require_toric(source.monoid, "germ source '" + source.name + "'");
  require_toric(target.monoid, "germ target '" + target.name + "'");
  const IntMatrix f = phi_matrix();
  for (std::size_t j = 0; j < phi.size(); ++j)
    if (membership(source.monoid, phi[j]) != Tri::yes)
      throw DomainError("not_a_morphism", "image of " + target.monoid.labels[j] + " is not in the source monoid");
  const std::size_t rows = target.dim(), cols = source.dim();
  if (jacobian.size() != rows || std::any_of(jacobian.begin(), jacobian.end(),
                                             [&](const std::vector<Rat>& r) { return r.size() != cols; }))
    throw DomainError("bad_jacobian", "b-Jacobian must be " + std::to_string(rows) + "×" + std::to_string(cols));
  const std::size_t rz = target.rank(), rx = source.rank();
  for (std::size_t a = 0; a < rz; ++a)
    for (std::size_t b = 0; b < rx; ++b)
      if (jacobian[a][b] != Rat(f(b, a)))
        throw DomainError("bad_jacobian", "corner block of the b-Jacobian must equal the transpose of the monoid map");
  // Free coordinates of the target are smooth in x, so x·∂/∂x vanishes at the corner.
  for (std::size_t a = rz; a < rows; ++a)
    for (std::size_t b = 0; b < rx; ++b)
      if (jacobian[a][b] != 0)
        throw DomainError("bad_jacobian", "free rows of the b-Jacobian must vanish on corner columns");
}

auto dual_monoid(const AffineMonoid& p, const HilbertOptions& opts) -> DualData {
  require_toric(p, "dual_monoid input");
  const std::size_t r = p.rank();
  DualData d;
  d.dual.ambient = AbelianGroup::free(r);
  d.dual.gens = hilbert_basis_of_inequalities(p.gens, r, opts);
  d.dual.labels = default_labels(d.dual.gens.size(), "n");
  d.pairing = IntMatrix(d.dual.gens.size(), p.size());
  for (std::size_t i = 0; i < d.dual.gens.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) d.pairing(i, j) = dot(d.dual.gens[i], p.gens[j]);
  return d;
}

auto b_transverse(const GermMap& g, const GermMap& h) -> bool {
  require_pair(g, h);
  RatMatrix m = g.jacobian;
  for (std::size_t a = 0; a < m.size(); ++a) m[a].insert(m[a].end(), h.jacobian[a].begin(), h.jacobian[a].end());
  return rational_rank(m) == g.target.dim();
}

auto to_string(CFailure f) -> std::string {
  switch (f) {
    case CFailure::none: return "none";
    case CFailure::not_b_transverse: return "not b-transverse";
    case CFailure::normal_map: return "normal map";
    default: return "face condition";
  }
}

namespace {

// Hilbert basis of K = {(λ, μ) ∈ P_x^∨ × P_y^∨ : Φ_g^T λ = Φ_h^T μ}.
auto equalizer_basis(const GermMap& g, const GermMap& h, const HilbertOptions& opts) -> std::vector<IntVec> {
  const std::size_t rx = g.source.rank(), ry = h.source.rank(), rz = g.target.rank();
  const IntMatrix fg = g.phi_matrix(), fh = h.phi_matrix();
  IntMatrix m(rz, rx + ry);
  for (std::size_t a = 0; a < rz; ++a) {
    for (std::size_t b = 0; b < rx; ++b) m(a, b) = fg(b, a);
    for (std::size_t b = 0; b < ry; ++b) m(a, rx + b) = -fh(b, a);
  }
  const IntMatrix lat = rz == 0 ? IntMatrix::identity(rx + ry) : kernel_lattice(m);
  const std::size_t k = lat.rows();
  if (k == 0) return {};
  std::vector<IntVec> constraints;
  for (const auto& gx : g.source.monoid.gens) {
    IntVec c(k);
    for (std::size_t t = 0; t < k; ++t)
      for (std::size_t i = 0; i < rx; ++i) c[t] += lat(t, i) * gx[i];
    constraints.push_back(std::move(c));
  }
  for (const auto& gy : h.source.monoid.gens) {
    IntVec c(k);
    for (std::size_t t = 0; t < k; ++t)
      for (std::size_t i = 0; i < ry; ++i) c[t] += lat(t, rx + i) * gy[i];
    constraints.push_back(std::move(c));
  }
  std::vector<IntVec> out;
  for (const auto& t : hilbert_basis_of_inequalities(constraints, k, opts)) {
    IntVec v(rx + ry);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < rx + ry; ++b) v[b] += t[a] * lat(a, b);
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

}  // namespace

auto c_transverse(const GermMap& g, const GermMap& h, const HilbertOptions& opts) -> CTransverse {
  CTransverse c;
  if (!b_transverse(g, h)) {
    c.failure = CFailure::not_b_transverse;
    return c;
  }
  const std::size_t rx = g.source.rank(), ry = h.source.rank(), rz = g.target.rank();
  RatMatrix corner(rz);
  for (std::size_t a = 0; a < rz; ++a) {
    corner[a].assign(g.jacobian[a].begin(), g.jacobian[a].begin() + static_cast<long>(rx));
    corner[a].insert(corner[a].end(), h.jacobian[a].begin(), h.jacobian[a].begin() + static_cast<long>(ry));
  }
  if (rational_rank(corner) != rz) {
    c.failure = CFailure::normal_map;
    return c;
  }
  c.k_basis = equalizer_basis(g, h, opts);
  c.k_sum = IntVec(rx + ry);
  for (const auto& v : c.k_basis)
    for (std::size_t i = 0; i < v.size(); ++i) c.k_sum[i] += v[i];
  // K lies in no proper face iff the sum of its generators is interior.
  const IntVec lam = slice(c.k_sum, 0, rx), mu = slice(c.k_sum, rx, ry);
  const bool interior =
      std::all_of(g.source.monoid.gens.begin(), g.source.monoid.gens.end(),
                  [&](const IntVec& v) { return dot(lam, v) > 0; }) &&
      std::all_of(h.source.monoid.gens.begin(), h.source.monoid.gens.end(),
                  [&](const IntVec& v) { return dot(mu, v) > 0; });
  c.ok = interior;
  c.failure = interior ? CFailure::none : CFailure::face_condition;
  return c;
}

auto fibre_product_germ(const GermMap& g, const GermMap& h, const HilbertOptions& opts) -> FibreProductGerm {
  if (!b_transverse(g, h)) throw DomainError("not_b_transverse", "fibre products need b-transverse germs");
  FibreProductGerm f;
  const std::size_t rx = g.source.rank(), ry = h.source.rank();
  f.k_basis = equalizer_basis(g, h, opts);
  f.k = AffineMonoid::from_vectors(f.k_basis, rx + ry, default_labels(f.k_basis.size(), "k"));
  f.w = dual_monoid(f.k, opts).dual;
  f.w.labels = default_labels(f.w.size(), "w");
  RatMatrix m = g.jacobian;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (const auto& v : h.jacobian[a]) m[a].push_back(-v);
  f.dim_w = g.source.dim() + h.source.dim() - rational_rank(m);
  return f;
}

auto corner_grading_check(const GermMap& g, const GermMap& h, const HilbertOptions& opts) -> GradingReport {
  auto ct = c_transverse(g, h, opts);
  if (ct.failure == CFailure::not_b_transverse)
    throw DomainError("not_b_transverse", "grading check needs b-transverse germs");
  if (!ct.ok) throw DomainError("not_c_transverse", "grading check needs c-transverse germs (" + to_string(ct.failure) + ")");
  const auto& px = g.source.monoid;
  const auto& py = h.source.monoid;
  const auto& pz = g.target.monoid;
  const std::size_t rx = px.rank(), ry = py.rank(), rz = pz.rank();
  const IntMatrix fg = g.phi_matrix(), fh = h.phi_matrix();
  auto pull = [&](const IntMatrix& f, const IntVec& lam) {
    IntVec nu(rz);
    for (std::size_t a = 0; a < rz; ++a)
      for (std::size_t b = 0; b < lam.size(); ++b) nu[a] += f(b, a) * lam[b];
    return nu;
  };

  GradingReport rep;
  auto k = AffineMonoid::from_vectors(ct.k_basis, rx + ry);
  auto klat = enumerate_faces(k);
  rep.w_counts.assign(k.rank() + 1, 0);
  std::set<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> seen;
  for (const auto& face : klat.faces) {
    GradingRow row;
    row.k_face = face.support;
    IntVec s(rx + ry);
    for (auto i : face.support)
      for (std::size_t a = 0; a < rx + ry; ++a) s[a] += ct.k_basis[i][a];
    const IntVec lam = slice(s, 0, rx), mu = slice(s, rx, ry);
    const IntVec nu = pull(fg, lam);
    if (nu != pull(fh, mu)) throw std::logic_error("equalizer element does not equalize");
    row.x_face = support_where_zero(lam, px.gens);
    row.y_face = support_where_zero(mu, py.gens);
    row.z_face = support_where_zero(nu, pz.gens);
    row.i = face.rank;
    row.j = rx - rank_of_support(px.gens, row.x_face, rx);
    row.k = ry - rank_of_support(py.gens, row.y_face, ry);
    row.l = rz - rank_of_support(pz.gens, row.z_face, rz);
    if (row.i + row.l != row.j + row.k) rep.law_holds = false;
    ++rep.w_counts[row.i];
    if (!seen.insert({row.x_face, row.y_face}).second) rep.bijective = false;
    rep.rows.push_back(std::move(row));
  }

  // Compatible stratum pairs: faces of P_x and P_y with the same preimage in P_z.
  auto preimage = [&](const IntMatrix& f, const Face& face) {
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < pz.size(); ++j)
      if (dot(face.certificate, f * pz.gens[j]) == 0) s.push_back(j);
    return s;
  };
  const auto fx = enumerate_faces(px), fy = enumerate_faces(py), fz = enumerate_faces(pz);
  std::map<std::vector<std::size_t>, std::size_t> zrank;
  for (const auto& f : fz.faces) zrank[f.support] = f.rank;
  rep.pair_counts.assign(rep.w_counts.size(), 0);
  std::size_t pairs = 0;
  for (const auto& a : fx.faces)
    for (const auto& b : fy.faces) {
      auto za = preimage(fg, a);
      if (za != preimage(fh, b)) continue;
      ++pairs;
      const long i = static_cast<long>(rx - a.rank) + static_cast<long>(ry - b.rank) -
                     static_cast<long>(rz - zrank.at(za));
      if (i < 0 || i >= static_cast<long>(rep.pair_counts.size()) || !seen.count({a.support, b.support})) {
        rep.bijective = false;
        continue;
      }
      ++rep.pair_counts[static_cast<std::size_t>(i)];
    }
  if (pairs != rep.rows.size()) rep.bijective = false;
  return rep;
}

auto strict_corner_check(const GermMap& g, const GermMap& h, const HilbertOptions& opts) -> StrictReport {
  auto ct = c_transverse(g, h, opts);
  if (!ct.ok)
    throw DomainError(ct.failure == CFailure::not_b_transverse ? "not_b_transverse" : "not_c_transverse",
                      "strictness check needs c-transverse germs (" + to_string(ct.failure) + ")");
  auto w = fibre_product_germ(g, h, opts).w;
  auto d = corner_decomposition(build_local_model(w));
  StrictReport rep;
  for (const auto& s : d.strata) {
    rep.keys.push_back(s.key);
    const bool f = classify(s.fiber).free == Tri::yes;
    rep.free.push_back(f);
    rep.sc = rep.sc && f;
  }
  return rep;
}

}  // namespace corral
