#include "corral/bcotangent.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "corral/faces.hpp"

namespace corral {

auto CRingPresentation::labels() const -> std::vector<std::string> {
  auto out = real;
  out.insert(out.end(), interior.begin(), interior.end());
  return out;
}

namespace {

void check_expr(const SmoothExpr& e, const CRingPresentation& c, const std::string& where) {
  if (e.arity(VarKind::real) > c.real.size() || e.arity(VarKind::interior) > c.interior.size())
    throw DomainError("undeclared_generator", where + " refers to an undeclared generator");
}

void check_interior(const InteriorExpr& e, const CRingPresentation& c, const std::string& where) {
  if (e.alpha.size() != c.interior.size())
    throw DomainError("arity_mismatch", where + " has an exponent vector of the wrong length");
  for (const auto& a : e.alpha)
    if (a < 0) throw DomainError("arity_mismatch", where + " has a negative exponent");
  check_expr(e.factor, c, where);
}

}  // namespace

void CRingPresentation::validate() const {
  std::set<std::string> seen;
  for (const auto& l : labels())
    if (!seen.insert(l).second) throw DomainError("duplicate_generator", "generator " + l + " declared twice");
  for (std::size_t b = 0; b < zeros.size(); ++b) check_expr(zeros[b], *this, "relation " + std::to_string(b + 1));
  for (std::size_t b = 0; b < relations.size(); ++b) {
    const auto where = "interior relation " + std::to_string(b + 1);
    check_interior(relations[b].first, *this, where);
    check_interior(relations[b].second, *this, where);
  }
}

auto free_cring(std::string name, std::vector<std::string> real, std::vector<std::string> interior)
    -> CRingPresentation {
  return CRingPresentation{std::move(name), std::move(real), std::move(interior), {}, {}};
}

auto check_point(const CRingPresentation& c, const RPoint& p, const PointTolerance& tol) -> RPointCheck {
  RPointCheck r;
  auto fail = [&](std::string why) {
    r.ok = false;
    r.reason = std::move(why);
    return r;
  };
  if (p.x.size() != c.real.size() || p.y.size() != c.interior.size())
    return fail("expected " + std::to_string(c.real.size()) + " real and " + std::to_string(c.interior.size()) +
                " interior coordinates");
  for (std::size_t i = 0; i < p.x.size(); ++i)
    if (!std::isfinite(p.x[i])) return fail("coordinate " + c.real[i] + " is not finite");
  for (std::size_t i = 0; i < p.y.size(); ++i)
    if (!std::isfinite(p.y[i]) || !(p.y[i] >= 0)) return fail("coordinate " + c.interior[i] + " is not in [0,∞)");
  for (std::size_t b = 0; b < c.zeros.size(); ++b) {
    const double v = std::abs(c.zeros[b].eval(p));
    r.residuals.push_back(v);
    if (v > tol.absolute && r.ok) {
      r.ok = false;
      r.relation = b;
      r.reason = "relation " + std::to_string(b + 1) + " is not zero at the point";
    }
  }
  for (std::size_t b = 0; b < c.relations.size(); ++b) {
    const double g = c.relations[b].first.eval(p), h = c.relations[b].second.eval(p);
    const double v = std::abs(g - h);
    r.residuals.push_back(v);
    if (v > tol.relative * (1 + std::abs(g) + std::abs(h)) && r.ok) {
      r.ok = false;
      r.relation = c.zeros.size() + b;
      r.reason = "interior relation " + std::to_string(b + 1) + " fails at the point";
    }
  }
  return r;
}

auto sharpened_monoid(const CRingPresentation& c) -> MonoidPresentation {
  MonoidPresentation m;
  m.names = c.interior;
  for (const auto& [g, h] : c.relations) m.relations.emplace_back(g.alpha, h.alpha);
  return m;
}

namespace {

auto qr_rank(const RealMatrix& m, double tol) -> std::size_t {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<RealMatrix> qr(m);
  qr.setThreshold(tol);
  return static_cast<std::size_t>(qr.rank());
}

}  // namespace

auto numeric_rank(const RealMatrix& m, const RankTolerance& tol) -> RankInfo {
  RankInfo r;
  r.rank = qr_rank(m, tol.rank);
  r.rank_strict = qr_rank(m, tol.strict);
  if (m.rows() > 0 && m.cols() > 0) {
    Eigen::JacobiSVD<RealMatrix> svd(m);
    const auto& s = svd.singularValues();
    r.singular_values.assign(s.data(), s.data() + s.size());
    std::size_t svd_rank = 0;
    for (double v : r.singular_values)
      if (v > tol.rank * r.singular_values.front()) ++svd_rank;
    // A disagreement between factorizations marks the rank as unstable.
    if (svd_rank != r.rank) r.rank_strict = svd_rank;
  }
  return r;
}

auto relation_matrix(const CRingPresentation& c, const RPoint& p) -> RealMatrix {
  const auto n = static_cast<Eigen::Index>(c.size());
  RealMatrix g = RealMatrix::Zero(static_cast<Eigen::Index>(c.zeros.size() + c.relations.size()), n);
  Eigen::Index row = 0;
  for (const auto& f : c.zeros) {
    auto d = eval_and_bderiv(f, p).bgrad;
    for (Eigen::Index j = 0; j < n; ++j) g(row, j) = d[j];
    ++row;
  }
  for (const auto& [lhs, rhs] : c.relations) {
    auto a = lhs.log_bgrad(p), b = rhs.log_bgrad(p);
    for (Eigen::Index j = 0; j < n; ++j) g(row, j) = a[j] - b[j];
    ++row;
  }
  return g;
}

namespace {

void require_point(const CRingPresentation& c, const RPoint& p, const PointTolerance& tol) {
  auto chk = check_point(c, p, tol);
  if (!chk.ok) throw DomainError("invalid_point", (c.name.empty() ? "" : c.name + ": ") + chk.reason);
}

}  // namespace

auto bcotangent_fibre(const CRingPresentation& c, const RPoint& p, const RankTolerance& tol, const PointTolerance& ptol)
    -> BCotangentFibre {
  c.validate();
  require_point(c, p, ptol);
  BCotangentFibre f;
  f.labels = c.labels();
  f.gamma = relation_matrix(c, p);
  f.rank = numeric_rank(f.gamma, tol);
  f.fibre_dim = c.size() - f.rank.rank;
  f.tol = tol;
  return f;
}

void CRingMorphism::validate() const {
  source.validate();
  target.validate();
  if (real.size() != source.real.size() || interior.size() != source.interior.size())
    throw DomainError("arity_mismatch", "morphism " + name + " must map every generator of " + source.name);
  for (std::size_t i = 0; i < real.size(); ++i) check_expr(real[i], target, "image of " + source.real[i]);
  for (std::size_t i = 0; i < interior.size(); ++i)
    check_interior(interior[i], target, "image of " + source.interior[i]);
}

auto CRingMorphism::pull_point(const RPoint& q) const -> RPoint {
  RPoint p;
  for (const auto& e : real) p.x.push_back(e.eval(q));
  for (const auto& e : interior) p.y.push_back(e.eval(q));
  return p;
}

auto CRingMorphism::bjacobian(const RPoint& q) const -> RealMatrix {
  RealMatrix j(static_cast<Eigen::Index>(source.size()), static_cast<Eigen::Index>(target.size()));
  Eigen::Index row = 0;
  auto put = [&](const std::vector<double>& g) {
    for (std::size_t k = 0; k < g.size(); ++k) j(row, static_cast<Eigen::Index>(k)) = g[k];
    ++row;
  };
  for (const auto& e : real) put(eval_and_bderiv(e, q).bgrad);
  for (const auto& e : interior) put(e.log_bgrad(q));
  return j;
}

auto identity_morphism(const CRingPresentation& c) -> CRingMorphism {
  CRingMorphism m{"id", c, c, {}, {}};
  for (std::size_t i = 0; i < c.real.size(); ++i) m.real.push_back(SmoothExpr::real(i));
  for (std::size_t i = 0; i < c.interior.size(); ++i) m.interior.push_back(InteriorExpr::generator(i, c.interior.size()));
  return m;
}

namespace {

// Reindexing of one side's generators into the pushout.
struct Embedding {
  std::vector<SmoothExpr> real, interior;
  std::size_t offset = 0, total = 0;  // interior exponent placement

  [[nodiscard]] auto operator()(const SmoothExpr& e) const -> SmoothExpr { return substitute(e, real, interior); }
  [[nodiscard]] auto operator()(const InteriorExpr& e) const -> InteriorExpr {
    InteriorExpr out{IntVec(total), (*this)(e.factor)};
    for (std::size_t i = 0; i < e.alpha.size(); ++i) out.alpha[offset + i] = e.alpha[i];
    return out;
  }
};

auto embedding(const CRingPresentation& side, std::size_t real_off, std::size_t int_off, std::size_t int_total)
    -> Embedding {
  Embedding m;
  for (std::size_t i = 0; i < side.real.size(); ++i) m.real.push_back(SmoothExpr::real(real_off + i));
  for (std::size_t i = 0; i < side.interior.size(); ++i) m.interior.push_back(SmoothExpr::interior(int_off + i));
  m.offset = int_off;
  m.total = int_total;
  return m;
}

void check_span(const CRingMorphism& alpha, const CRingMorphism& beta) {
  alpha.validate();
  beta.validate();
  if (!(alpha.source == beta.source))
    throw DomainError("source_mismatch", "pushout needs two morphisms out of the same ring");
}

}  // namespace

auto pushout(const CRingMorphism& alpha, const CRingMorphism& beta) -> CRingPresentation {
  check_span(alpha, beta);
  const auto& d = alpha.target;
  const auto& e = beta.target;
  const std::size_t ni = d.interior.size() + e.interior.size();
  auto ed = embedding(d, 0, 0, ni);
  auto ee = embedding(e, d.real.size(), d.interior.size(), ni);

  auto dl = d.labels(), el = e.labels();
  std::set<std::string> shared;
  for (const auto& l : dl)
    if (std::find(el.begin(), el.end(), l) != el.end()) shared.insert(l);
  auto dn = d.name, en = e.name;
  if (dn == en) {
    dn = "left";
    en = "right";
  }
  auto qualify = [&](const std::string& ring, const std::string& l) { return shared.count(l) ? ring + "." + l : l; };

  CRingPresentation f;
  f.name = d.name + "_" + e.name;
  for (const auto& l : d.real) f.real.push_back(qualify(dn, l));
  for (const auto& l : e.real) f.real.push_back(qualify(en, l));
  for (const auto& l : d.interior) f.interior.push_back(qualify(dn, l));
  for (const auto& l : e.interior) f.interior.push_back(qualify(en, l));
  for (const auto& z : d.zeros) f.zeros.push_back(ed(z));
  for (const auto& z : e.zeros) f.zeros.push_back(ee(z));
  for (std::size_t i = 0; i < alpha.real.size(); ++i) f.zeros.push_back(ed(alpha.real[i]) - ee(beta.real[i]));
  for (const auto& [g, h] : d.relations) f.relations.emplace_back(ed(g), ed(h));
  for (const auto& [g, h] : e.relations) f.relations.emplace_back(ee(g), ee(h));
  for (std::size_t i = 0; i < alpha.interior.size(); ++i)
    f.relations.emplace_back(ed(alpha.interior[i]), ee(beta.interior[i]));
  return f;
}

auto split_pushout_point(const CRingMorphism& alpha, const CRingMorphism& beta, const RPoint& p)
    -> std::pair<RPoint, RPoint> {
  const auto& d = alpha.target;
  const auto& e = beta.target;
  if (p.x.size() != d.real.size() + e.real.size() || p.y.size() != d.interior.size() + e.interior.size())
    throw DomainError("invalid_point", "point does not match the pushout's generators");
  auto nx = static_cast<std::ptrdiff_t>(d.real.size()), ny = static_cast<std::ptrdiff_t>(d.interior.size());
  RPoint pd{{p.x.begin(), p.x.begin() + nx}, {p.y.begin(), p.y.begin() + ny}};
  RPoint pe{{p.x.begin() + nx, p.x.end()}, {p.y.begin() + ny, p.y.end()}};
  return {pd, pe};
}

namespace {

auto vstack(const RealMatrix& a, const RealMatrix& b) -> RealMatrix {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  RealMatrix s(a.rows() + b.rows(), a.cols());
  s << a, b;
  return s;
}

// ℝ^n / rowspace(rel) and ranks of maps into it, all at one tolerance.
struct QuotientSpace {
  RealMatrix rel;
  double tol;
  [[nodiscard]] auto n() const -> std::size_t { return static_cast<std::size_t>(rel.cols()); }
  [[nodiscard]] auto rel_rank() const -> std::size_t { return qr_rank(rel, tol); }
  [[nodiscard]] auto dim() const -> std::size_t { return n() - rel_rank(); }
  // Rank of the map whose rows are images of a spanning set.
  [[nodiscard]] auto image_rank(const RealMatrix& images) const -> std::size_t {
    return qr_rank(vstack(rel, images), tol) - rel_rank();
  }
  [[nodiscard]] auto contains(const RealMatrix& images) const -> bool { return image_rank(images) == 0; }
};

auto block_diag(const RealMatrix& a, const RealMatrix& b) -> RealMatrix {
  RealMatrix m = RealMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

}  // namespace

auto pushout_sequence_check(const CRingMorphism& alpha, const CRingMorphism& beta, const RPoint& p,
                            const RankTolerance& tol, const PointTolerance& ptol) -> PushoutReport {
  auto f = pushout(alpha, beta);
  const auto& c = alpha.source;
  const auto& d = alpha.target;
  const auto& e = beta.target;
  require_point(f, p, ptol);
  auto [pd, pe] = split_pushout_point(alpha, beta, p);
  require_point(d, pd, ptol);
  require_point(e, pe, ptol);
  auto pc = alpha.pull_point(pd);
  require_point(c, pc, ptol);

  const auto gc = relation_matrix(c, pc), gd = relation_matrix(d, pd), ge = relation_matrix(e, pe);
  const auto gf = relation_matrix(f, p);

  // First map: d_in c ↦ (d_in α(c), −d_in β(c)).
  const auto ja = alpha.bjacobian(pd), jb = beta.bjacobian(pe);
  RealMatrix m1(ja.rows(), ja.cols() + jb.cols());
  m1 << ja, -jb;

  // Second map: generators of D and E to their copies in F.
  const auto nd = static_cast<Eigen::Index>(d.size()), ne = static_cast<Eigen::Index>(e.size());
  RealMatrix m2 = RealMatrix::Zero(nd + ne, nd + ne);
  const auto dr = static_cast<Eigen::Index>(d.real.size()), er = static_cast<Eigen::Index>(e.real.size());
  const auto di = static_cast<Eigen::Index>(d.interior.size());
  for (Eigen::Index i = 0; i < dr; ++i) m2(i, i) = 1;
  for (Eigen::Index i = 0; i < di; ++i) m2(dr + i, dr + er + i) = 1;
  for (Eigen::Index i = 0; i < er; ++i) m2(nd + i, dr + i) = 1;
  for (Eigen::Index i = 0; i < ne - er; ++i) m2(nd + er + i, dr + er + di + i) = 1;

  auto at = [&](double t) {
    QuotientSpace vc{gc, t}, v2{block_diag(gd, ge), t}, vf{gf, t};
    PushoutReport r;
    r.dim_c = vc.dim();
    r.dim_d = QuotientSpace{gd, t}.dim();
    r.dim_e = QuotientSpace{ge, t}.dim();
    r.dim_f = vf.dim();
    r.well_defined = v2.contains(gc * m1) && vf.contains(block_diag(gd, ge) * m2);
    r.first_rank = v2.image_rank(m1);
    r.second_rank = vf.image_rank(m2);
    r.composition_zero = vf.contains(m1 * m2);
    r.middle_exact = v2.dim() - r.second_rank == r.first_rank;
    r.right_exact = r.second_rank == r.dim_f;
    return r;
  };
  auto r = at(tol.rank);
  auto s = at(tol.strict);
  r.stable = r.dim_c == s.dim_c && r.dim_d == s.dim_d && r.dim_e == s.dim_e && r.dim_f == s.dim_f &&
             r.first_rank == s.first_rank && r.second_rank == s.second_rank && r.exact() == s.exact();
  return r;
}

auto cring_toric(const CRingPresentation& c) -> Tri { return classify(sharpened_monoid(c)).toric; }

namespace {

auto in_prime(const InteriorExpr& e, const std::vector<bool>& mask) -> bool {
  for (std::size_t i = 0; i < e.alpha.size(); ++i)
    if (e.alpha[i] != 0 && mask[i]) return true;
  return false;
}

auto prime_mask(const CRingPresentation& c, const std::vector<std::size_t>& prime) -> std::vector<bool> {
  std::vector<bool> mask(c.interior.size(), false);
  for (auto i : prime) {
    if (i >= c.interior.size()) throw DomainError("not_a_prime", "prime refers to an undeclared generator");
    mask[i] = true;
  }
  for (const auto& [g, h] : c.relations)
    if (in_prime(g, mask) != in_prime(h, mask))
      throw DomainError("not_a_prime", "an interior relation joins an element of the ideal to one outside it");
  return mask;
}

}  // namespace

auto corner_quotient(const CRingPresentation& c, const std::vector<std::size_t>& prime) -> CRingPresentation {
  c.validate();
  const auto mask = prime_mask(c, prime);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < c.interior.size(); ++i)
    if (!mask[i]) keep.push_back(i);

  Embedding sub;
  for (std::size_t i = 0; i < c.real.size(); ++i) sub.real.push_back(SmoothExpr::real(i));
  sub.interior.assign(c.interior.size(), SmoothExpr::constant(0));
  for (std::size_t k = 0; k < keep.size(); ++k) sub.interior[keep[k]] = SmoothExpr::interior(k);

  CRingPresentation d;
  d.name = c.name + "/P";
  d.real = c.real;
  for (auto i : keep) d.interior.push_back(c.interior[i]);
  for (const auto& z : c.zeros) d.zeros.push_back(sub(z));
  for (const auto& [g, h] : c.relations) {
    if (in_prime(g, mask)) continue;  // 0 = 0 in D
    auto restrict = [&](const InteriorExpr& e) {
      InteriorExpr out{IntVec(keep.size()), sub(e.factor)};
      for (std::size_t k = 0; k < keep.size(); ++k) out.alpha[k] = e.alpha[keep[k]];
      return out;
    };
    d.relations.emplace_back(restrict(g), restrict(h));
  }
  return d;
}

auto corner_sequence_check(const CRingPresentation& c, const std::vector<std::size_t>& prime, const RPoint& p,
                           const CornerSequenceOptions& opts) -> CornerSequenceReport {
  CornerSequenceReport r;
  auto d = corner_quotient(c, prime);
  require_point(c, p, opts.point);
  const auto mask = prime_mask(c, prime);
  for (std::size_t i = 0; i < p.y.size(); ++i)
    if ((p.y[i] <= opts.point.absolute) != mask[i])
      throw DomainError("invalid_point", "the point is not on the stratum of the prime: check " + c.interior[i]);

  r.toric = cring_toric(c);
  if (opts.require_toric && r.toric != Tri::yes)
    throw DomainError("not_toric", "the corner sequence needs a toric ring");
  if (r.toric == Tri::yes) {
    std::vector<std::size_t> gens(prime.begin(), prime.end());
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    const auto m = integralize(sharpened_monoid(c));
    const auto ps = primes(m, true);
    if (std::none_of(ps.begin(), ps.end(), [&](const PrimeIdeal& q) { return q.generators == gens; }))
      throw DomainError("not_a_prime", "the generator set is not a prime ideal of the sharpened monoid");
  }

  RPoint pd{p.x, {}};
  for (std::size_t i = 0; i < p.y.size(); ++i)
    if (!mask[i]) pd.y.push_back(p.y[i]);
  require_point(d, pd, opts.point);

  const auto nx = static_cast<Eigen::Index>(c.real.size());
  const auto ny = static_cast<Eigen::Index>(c.interior.size());
  const auto gc = relation_matrix(c, p), gd = relation_matrix(d, pd);

  // π: generators of D to the same generators of C.
  RealMatrix pi = RealMatrix::Zero(static_cast<Eigen::Index>(d.size()), nx + ny);
  for (Eigen::Index i = 0; i < nx; ++i) pi(i, i) = 1;
  {
    Eigen::Index row = nx;
    for (Eigen::Index i = 0; i < ny; ++i)
      if (!mask[static_cast<std::size_t>(i)]) pi(row++, nx + i) = 1;
  }

  // C_in^P ⊗ ℝ = ℝ^{A_in} / (α_g − α_h, e_j for j ∉ P); i: d_in y ↦ [y], d x ↦ 0.
  RealMatrix corner_rel = RealMatrix::Zero(static_cast<Eigen::Index>(c.relations.size()) + ny, ny);
  for (std::size_t b = 0; b < c.relations.size(); ++b)
    for (Eigen::Index j = 0; j < ny; ++j)
      corner_rel(static_cast<Eigen::Index>(b), j) =
          Int(c.relations[b].first.alpha[j] - c.relations[b].second.alpha[j]).get_d();
  for (Eigen::Index j = 0; j < ny; ++j)
    if (!mask[static_cast<std::size_t>(j)]) corner_rel(static_cast<Eigen::Index>(c.relations.size()) + j, j) = 1;
  RealMatrix ii = RealMatrix::Zero(nx + ny, ny);
  for (Eigen::Index j = 0; j < ny; ++j) ii(nx + j, j) = 1;

  auto at = [&](double t) {
    QuotientSpace vd{gd, t}, vc{gc, t}, vn{corner_rel, t};
    CornerSequenceReport s;
    s.dim_d = vd.dim();
    s.dim_c = vc.dim();
    s.dim_corner = vn.dim();
    s.well_defined = vc.contains(gd * pi) && vn.contains(gc * ii);
    s.pi_rank = vc.image_rank(pi);
    s.i_rank = vn.image_rank(ii);
    s.composition_zero = vn.contains(pi * ii);
    s.left_exact = s.pi_rank == s.dim_d;
    s.middle_exact = s.dim_c - s.i_rank == s.pi_rank;
    s.right_exact = s.i_rank == s.dim_corner;
    return s;
  };
  auto a = at(opts.rank.rank);
  auto b = at(opts.rank.strict);
  a.toric = r.toric;
  a.stable = a.dim_d == b.dim_d && a.dim_c == b.dim_c && a.dim_corner == b.dim_corner && a.pi_rank == b.pi_rank &&
             a.i_rank == b.i_rank && a.exact() == b.exact();
  return a;
}

}  // namespace corral
