#include "corral/faces.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace corral {

namespace {

auto support_less(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) -> bool {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

auto subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) -> bool {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

auto FaceLattice::f_vector() const -> std::vector<std::size_t> {
  std::size_t top = 0;
  for (const auto& f : faces) top = std::max(top, f.rank);
  std::vector<std::size_t> out(faces.empty() ? 0 : top + 1, 0);
  for (const auto& f : faces) ++out[f.rank];
  return out;
}

auto FaceLattice::index_of(const std::vector<std::size_t>& support) const -> std::optional<std::size_t> {
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (faces[i].support == support) return i;
  return std::nullopt;
}

auto certifies(const AffineMonoid& m, const IntVec& ell, const std::vector<std::size_t>& support) -> bool {
  const auto fg = m.free_gens();
  if (ell.size() != m.ambient.free_rank) return false;
  for (std::size_t i = 0; i < fg.size(); ++i) {
    const Int v = dot(ell, fg[i]);
    const bool in = std::binary_search(support.begin(), support.end(), i);
    if (in ? v != 0 : v <= 0) return false;
  }
  return true;
}

auto enumerate_faces(const AffineMonoid& m, const FaceOptions& opts) -> FaceLattice {
  const std::size_t r = m.ambient.free_rank;
  if (r > opts.rank_limit)
    throw DomainError("cone_dimension_exceeded",
                      "rank " + std::to_string(r) + " exceeds the face enumeration limit " +
                          std::to_string(opts.rank_limit));
  const auto fg = m.free_gens();
  const auto normals = dual_cone(fg, r).rays;

  std::vector<std::vector<std::size_t>> facet_support;
  for (const auto& n : normals) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < fg.size(); ++i)
      if (dot(n, fg[i]) == 0) s.push_back(i);
    facet_support.push_back(std::move(s));
  }

  std::vector<std::size_t> all(fg.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  // Every face is an intersection of facets; the empty intersection is M.
  std::set<std::vector<std::size_t>> found{all};
  std::vector<std::vector<std::size_t>> frontier{all};
  while (!frontier.empty()) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& s : frontier)
      for (const auto& f : facet_support) {
        std::vector<std::size_t> t;
        std::set_intersection(s.begin(), s.end(), f.begin(), f.end(), std::back_inserter(t));
        if (found.insert(t).second) next.push_back(std::move(t));
      }
    frontier = std::move(next);
  }

  FaceLattice lat;
  for (const auto& s : found) {
    Face f;
    f.support = s;
    f.certificate = IntVec(r);
    for (std::size_t j = 0; j < normals.size(); ++j)
      if (subset(s, facet_support[j]))
        for (std::size_t k = 0; k < r; ++k) f.certificate[k] += normals[j][k];
    std::vector<IntVec> span;
    for (auto i : s) span.push_back(fg[i]);
    f.rank = rank_of(span, r);
    lat.faces.push_back(std::move(f));
  }
  std::sort(lat.faces.begin(), lat.faces.end(),
            [](const Face& a, const Face& b) { return support_less(a.support, b.support); });

  const std::size_t n = lat.faces.size();
  lat.covers.assign(n, {});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || lat.faces[j].rank != lat.faces[i].rank + 1) continue;
      if (subset(lat.faces[i].support, lat.faces[j].support)) lat.covers[i].push_back(j);
    }
  return lat;
}

auto primes(const AffineMonoid& m, bool with_zero, const FaceOptions& opts) -> std::vector<PrimeIdeal> {
  auto lat = enumerate_faces(m, opts);
  std::vector<PrimeIdeal> out;
  for (const auto& f : lat.faces) {
    PrimeIdeal p;
    p.complement = f;
    p.includes_zero = with_zero;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (!std::binary_search(f.support.begin(), f.support.end(), i)) p.generators.push_back(i);
    if (!with_zero && p.generators.empty()) continue;  // F = M leaves P empty
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(),
            [](const PrimeIdeal& a, const PrimeIdeal& b) { return support_less(a.generators, b.generators); });
  return out;
}

auto monoid_dimension(const AffineMonoid& m, bool with_zero, const FaceOptions& opts) -> std::size_t {
  auto ps = primes(m, with_zero, opts);
  // Sorted by size, so every strict inclusion points forward.
  std::vector<std::size_t> longest(ps.size(), 1);
  std::size_t best = 0;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i)
      if (ps[i].generators.size() < ps[j].generators.size() && subset(ps[i].generators, ps[j].generators))
        longest[j] = std::max(longest[j], longest[i] + 1);
    best = std::max(best, longest[j]);
  }
  return best;
}

auto corner_fiber(const AffineMonoid& m, const Face& f) -> AffineMonoid {
  std::vector<IntVec> face_gens;
  for (auto i : f.support) face_gens.push_back(m.gens[i]);
  auto q = quotient_group(m.ambient, face_gens);
  AffineMonoid out;
  out.ambient = q.group;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (std::binary_search(f.support.begin(), f.support.end(), i)) continue;
    out.gens.push_back(q.project(m.gens[i]));
    out.labels.push_back(m.labels[i]);
  }
  return out;
}

auto corner_fiber(const AffineMonoid& m, const PrimeIdeal& p) -> AffineMonoid {
  return corner_fiber(m, p.complement);
}

namespace {

// Distinct nonzero irreducible generators, sorted.
auto irreducibles(const AffineMonoid& m, const SolveOptions& opts) -> std::vector<IntVec> {
  std::vector<IntVec> out;
  for (auto i : minimal_generators(m, opts)) out.push_back(m.gens[i]);
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

// Indices of a maximal linearly independent subset, greedily in order.
auto independent_subset(const std::vector<IntVec>& vs, std::size_t dim) -> std::vector<std::size_t> {
  std::vector<std::size_t> idx;
  std::vector<IntVec> chosen;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    chosen.push_back(vs[i]);
    if (rank_of(chosen, dim) == chosen.size()) idx.push_back(i);
    else chosen.pop_back();
  }
  return idx;
}

}  // namespace

auto isomorphic(const AffineMonoid& a, const AffineMonoid& b, const IsoOptions& opts) -> Tri {
  if (a.ambient.free_rank != b.ambient.free_rank || a.ambient.torsion != b.ambient.torsion) return Tri::no;
  const auto ca = classify(a), cb = classify(b);
  if (ca.sharp != cb.sharp || ca.saturated != cb.saturated) {
    if (ca.sharp != Tri::unknown && cb.sharp != Tri::unknown && ca.saturated != Tri::unknown &&
        cb.saturated != Tri::unknown)
      return Tri::no;
    return Tri::unknown;
  }
  if (ca.weakly_toric == Tri::yes && cb.weakly_toric == Tri::yes && ca.sharp == Tri::no) {
    // M ≅ M^♯ × ℤ^l.
    auto sa = sharpen_split(a), sb = sharpen_split(b);
    if (sa.split_rank != sb.split_rank) return Tri::no;
    return isomorphic(sa.sharp, sb.sharp, opts);
  }
  if (ca.sharp != Tri::yes || !a.ambient.is_torsion_free()) return Tri::unknown;

  std::vector<IntVec> ga, gb;
  try {
    ga = irreducibles(a, opts.solve);
    gb = irreducibles(b, opts.solve);
  } catch (const BoundExceeded&) {
    return Tri::unknown;
  }
  if (ga.size() != gb.size()) return Tri::no;
  const std::size_t r = a.ambient.free_rank;
  if (r == 0) return Tri::yes;
  if (r <= FaceOptions{}.rank_limit) {
    auto fa = enumerate_faces(AffineMonoid{a.ambient, ga, default_labels(ga.size()), {}});
    auto fb = enumerate_faces(AffineMonoid{b.ambient, gb, default_labels(gb.size()), {}});
    if (fa.f_vector() != fb.f_vector()) return Tri::no;
  }

  // An isomorphism maps irreducibles bijectively onto irreducibles, and is
  // fixed by the images of an independent subset.
  const auto basis = independent_subset(ga, r);
  IntMatrix at = IntMatrix::from_cols([&] {
                   std::vector<IntVec> cols;
                   for (auto i : basis) cols.push_back(ga[i]);
                   return cols;
                 }(),
                                      r)
                     .transpose();
  const std::set<IntVec> target(gb.begin(), gb.end());
  std::vector<std::size_t> choice(r);
  std::vector<bool> used(gb.size(), false);
  std::size_t tried = 0;
  bool exhausted = false;

  auto test = [&]() -> bool {
    // φ with φ·ga[basis[k]] = gb[choice[k]]: row i of φ solves at·x = (gb[choice[·]])_i.
    std::vector<IntVec> rows;
    for (std::size_t i = 0; i < r; ++i) {
      IntVec rhs(r);
      for (std::size_t k = 0; k < r; ++k) rhs[k] = gb[choice[k]][i];
      auto x = solve_integer(at, rhs);
      if (!x) return false;
      rows.push_back(std::move(*x));
    }
    IntMatrix phi = IntMatrix::from_rows(rows, r);
    if (abs(determinant(phi)) != 1) return false;
    for (const auto& g : ga)
      if (!target.count(phi * g)) return false;
    return true;
  };

  auto search = [&](auto&& self, std::size_t k) -> bool {
    if (k == r) {
      if (++tried > opts.budget) {
        exhausted = true;
        return false;
      }
      return test();
    }
    for (std::size_t j = 0; j < gb.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      choice[k] = j;
      if (self(self, k + 1)) return true;
      used[j] = false;
      if (exhausted) return false;
    }
    return false;
  };
  if (search(search, 0)) return Tri::yes;
  return exhausted ? Tri::unknown : Tri::no;
}

}  // namespace corral
