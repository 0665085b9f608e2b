#include "corral/monoid.hpp"

#include <algorithm>
#include <set>

#include "corral/binomial.hpp"

namespace corral {

void MonoidPresentation::validate() const {
  std::set<std::string> seen;
  for (const auto& n : names)
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate generator name '" + n + "'");
  for (const auto& [u, v] : relations) {
    if (u.size() != names.size() || v.size() != names.size())
      throw std::invalid_argument("relation has wrong arity");
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] < 0 || v[i] < 0) throw std::invalid_argument("relation exponents must be nonnegative");
  }
}

auto default_labels(std::size_t n, const std::string& prefix) -> std::vector<std::string> {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

auto AffineMonoid::free_gens() const -> std::vector<IntVec> {
  std::vector<IntVec> out;
  for (const auto& g : gens) out.push_back(ambient.free_part(g));
  return out;
}

void AffineMonoid::validate() const {
  if (labels.size() != gens.size()) throw std::invalid_argument("affine monoid: label count mismatch");
  for (const auto& g : gens)
    if (g.size() != ambient.dim() || ambient.canonical(g) != g)
      throw std::invalid_argument("affine monoid: generator " + to_string(g) + " is not a canonical element");
  if (!quotient_group(ambient, gens).group.is_trivial())
    throw std::invalid_argument("affine monoid: generators do not generate the ambient group");
}

auto AffineMonoid::from_vectors(const std::vector<IntVec>& vecs, std::size_t dim, std::vector<std::string> labels)
    -> AffineMonoid {
  AffineMonoid m;
  if (labels.empty()) labels = default_labels(vecs.size());
  m.labels = std::move(labels);
  std::vector<IntVec> nz;
  for (const auto& v : vecs) {
    if (v.size() != dim) throw std::invalid_argument("from_vectors: vector has wrong length");
    if (!is_zero(v)) nz.push_back(v);
  }
  if (nz.empty()) {
    m.ambient = AbelianGroup::free(0);
    m.gens.assign(vecs.size(), IntVec{});
    return m;
  }
  IntMatrix basis = hermite_rows(IntMatrix::from_rows(nz, dim));
  IntMatrix bt = basis.transpose();
  m.ambient = AbelianGroup::free(basis.rows());
  for (const auto& v : vecs) {
    auto c = solve_integer(bt, v);
    if (!c) throw std::logic_error("from_vectors: vector outside its own span");
    m.gens.push_back(std::move(*c));
  }
  return m;
}

auto AffineMonoid::free(std::size_t k) -> AffineMonoid {
  AffineMonoid m;
  m.ambient = AbelianGroup::free(k);
  m.gens = IntMatrix::identity(k).row_list();
  m.labels = default_labels(k, "e");
  return m;
}

auto AffineMonoid::trivial() -> AffineMonoid { return free(0); }

auto groupify(const MonoidPresentation& p) -> Groupification {
  p.validate();
  const std::size_t n = p.size();
  std::vector<IntVec> cols;
  for (const auto& [u, v] : p.relations) {
    IntVec d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = u[i] - v[i];
    cols.push_back(std::move(d));
  }
  auto c = cokernel_group(IntMatrix::from_cols(cols, n));
  Groupification g{c.group, {}};
  for (std::size_t i = 0; i < n; ++i) g.images.push_back(c.image(i));
  return g;
}

auto integralize(const MonoidPresentation& p) -> AffineMonoid {
  auto g = groupify(p);
  AffineMonoid m;
  m.ambient = g.group;
  m.gens = g.images;
  m.labels = p.names;
  m.provenance = p;
  return m;
}

auto torsion_free_quotient(const AffineMonoid& m) -> AffineMonoid {
  AffineMonoid out;
  out.ambient = AbelianGroup::free(m.ambient.free_rank);
  out.gens = m.free_gens();
  out.labels = m.labels;
  out.provenance = m.provenance;
  return out;
}

auto saturate(const AffineMonoid& m, const HilbertOptions& opts) -> AffineMonoid {
  if (!m.ambient.is_torsion_free())
    throw DomainError("not_torsion_free", "saturate requires a torsion-free ambient group");
  AffineMonoid out;
  out.ambient = m.ambient;
  out.gens = hilbert_basis(m.gens, m.ambient.free_rank, opts);
  out.labels = default_labels(out.gens.size(), "h");
  out.provenance = m.provenance;
  return out;
}

auto reflect_to_saturated(const MonoidPresentation& p, const HilbertOptions& opts) -> AffineMonoid {
  return saturate(torsion_free_quotient(integralize(p)), opts);
}

auto unit_generator_indices(const AffineMonoid& m) -> std::vector<std::size_t> {
  auto fg = m.free_gens();
  auto dual = dual_cone(fg, m.ambient.free_rank);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fg.size(); ++i)
    if (std::all_of(dual.rays.begin(), dual.rays.end(), [&](const IntVec& r) { return dot(r, fg[i]) == 0; }))
      out.push_back(i);
  return out;
}

auto sharpen_split(const AffineMonoid& m) -> SharpSplit {
  SharpSplit s;
  s.unit_generators = unit_generator_indices(m);
  std::vector<IntVec> ugens;
  for (auto i : s.unit_generators) ugens.push_back(m.gens[i]);
  s.units = subgroup_structure(m.ambient, ugens);
  s.split_rank = s.units.free_rank;
  auto q = quotient_group(m.ambient, ugens);
  s.sharp.ambient = q.group;
  std::size_t u = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (u < s.unit_generators.size() && s.unit_generators[u] == i) {
      ++u;
      continue;
    }
    s.sharp_generators.push_back(i);
    s.sharp.gens.push_back(q.project(m.gens[i]));
    s.sharp.labels.push_back(m.labels[i]);
  }
  s.sharp.provenance = m.provenance;
  return s;
}

auto membership(const AffineMonoid& m, const IntVec& p, const SolveOptions& opts) -> Tri {
  auto r = solve_nonneg(m.ambient, m.gens, p, opts);
  switch (r.status) {
    case SolveStatus::found: return Tri::yes;
    case SolveStatus::not_found: return Tri::no;
    default: return Tri::unknown;
  }
}

auto minimal_generators(const AffineMonoid& m, const SolveOptions& opts) -> std::vector<std::size_t> {
  std::vector<std::size_t> keep;
  std::set<IntVec> seen;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (!is_zero(m.gens[i]) && seen.insert(m.gens[i]).second) keep.push_back(i);
  for (std::size_t k = 0; k < keep.size();) {
    std::vector<IntVec> others;
    for (std::size_t j = 0; j < keep.size(); ++j)
      if (j != k) others.push_back(m.gens[keep[j]]);
    auto r = solve_nonneg(m.ambient, others, m.gens[keep[k]], opts);
    if (r.status == SolveStatus::bound_exceeded)
      throw BoundExceeded("minimal_generators: membership search exhausted");
    if (r.status == SolveStatus::found) keep.erase(keep.begin() + static_cast<long>(k));
    else ++k;
  }
  return keep;
}

auto classify(const AffineMonoid& m, const ClassifyOptions& opts) -> MonoidClassification {
  MonoidClassification c;
  c.integral = Tri::yes;
  c.rank = m.ambient.free_rank;
  c.torsion_free = tri(m.ambient.is_torsion_free());
  auto split = sharpen_split(m);
  c.sharp = tri(split.units.is_trivial());

  // Saturated iff the torsion subgroup lies in M and π(M) ⊆ ℤ^r is saturated.
  Tri sat = Tri::yes;
  for (std::size_t k = 0; k < m.ambient.torsion.size() && sat != Tri::no; ++k)
    sat = tri_and(sat, membership(m, m.ambient.basis_element(m.ambient.free_rank + k), opts.solve));
  std::size_t hilbert_size = 0;
  bool hilbert_known = false;
  if (sat != Tri::no) {
    try {
      auto tf = torsion_free_quotient(m);
      auto s = saturate(tf, opts.hilbert);
      hilbert_size = s.gens.size();
      hilbert_known = true;
      for (const auto& h : s.gens) {
        sat = tri_and(sat, membership(tf, h, opts.solve));
        if (sat == Tri::no) break;
      }
    } catch (const HilbertBoundExceeded&) {
      sat = Tri::unknown;
    }
  }
  c.saturated = sat;
  c.weakly_toric = tri_and(c.integral, tri_and(c.saturated, c.torsion_free));
  c.toric = tri_and(c.weakly_toric, c.sharp);
  // For toric M the Hilbert basis of its cone is its minimal generating set.
  Tri basis_is_free = hilbert_known ? tri(hilbert_size == c.rank) : Tri::unknown;
  c.simplicial = tri_and(c.toric, basis_is_free);
  c.free = c.simplicial;
  return c;
}

auto classify(const MonoidPresentation& p, const ClassifyOptions& opts) -> MonoidClassification {
  WordProblemOptions wp{opts.rewrite_budget};
  const Tri integral = presentation_integral(p, wp);
  auto c = classify(integralize(p), opts);
  c.integral = integral;
  if (integral != Tri::yes) c.sharp = presentation_sharp(p, wp);
  c.saturated = tri_and(c.saturated, integral);
  c.weakly_toric = tri_and(c.weakly_toric, integral);
  c.toric = tri_and(c.weakly_toric, c.sharp);
  c.simplicial = tri_and(c.simplicial, c.toric);
  c.free = tri_and(c.free, c.toric);
  return c;
}

}  // namespace corral
