#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corral/cone.hpp"
#include "corral/errors.hpp"
#include "corral/lattice.hpp"

namespace corral {

// ⟨names | u_j = v_j⟩ in additive notation; u_j, v_j ∈ ℕ^n.
struct MonoidPresentation {
  std::vector<std::string> names;
  std::vector<std::pair<IntVec, IntVec>> relations;

  [[nodiscard]] auto size() const -> std::size_t { return names.size(); }
  void validate() const;
  friend auto operator==(const MonoidPresentation&, const MonoidPresentation&) -> bool = default;
};

// Submonoid of `ambient` generated by `gens`; the generators generate the
// ambient group.
struct AffineMonoid {
  AbelianGroup ambient;
  std::vector<IntVec> gens;
  std::vector<std::string> labels;
  std::optional<MonoidPresentation> provenance;

  [[nodiscard]] auto rank() const -> std::size_t { return ambient.free_rank; }
  [[nodiscard]] auto size() const -> std::size_t { return gens.size(); }
  [[nodiscard]] auto free_gens() const -> std::vector<IntVec>;
  void validate() const;

  // Monoid generated by vectors of ℤ^dim, re-expressed in coordinates of the
  // group they generate.
  static auto from_vectors(const std::vector<IntVec>& vecs, std::size_t dim,
                           std::vector<std::string> labels = {}) -> AffineMonoid;
  static auto free(std::size_t k) -> AffineMonoid;  // ℕ^k
  static auto trivial() -> AffineMonoid;
};

auto default_labels(std::size_t n, const std::string& prefix = "g") -> std::vector<std::string>;

struct Groupification {
  AbelianGroup group;
  std::vector<IntVec> images;
};

auto groupify(const MonoidPresentation& p) -> Groupification;
auto integralize(const MonoidPresentation& p) -> AffineMonoid;
auto torsion_free_quotient(const AffineMonoid& m) -> AffineMonoid;
auto saturate(const AffineMonoid& m, const HilbertOptions& opts = {}) -> AffineMonoid;
// saturate ∘ torsion_free_quotient ∘ integralize
auto reflect_to_saturated(const MonoidPresentation& p, const HilbertOptions& opts = {}) -> AffineMonoid;

struct SharpSplit {
  AbelianGroup units;                      // structure of M ∩ (−M)
  std::vector<std::size_t> unit_generators;
  AffineMonoid sharp;                      // image in ambient / ⟨units⟩
  std::vector<std::size_t> sharp_generators;  // indices of M's generators kept in `sharp`
  std::size_t split_rank = 0;
};

auto sharpen_split(const AffineMonoid& m) -> SharpSplit;

// Indices of generators that are units (free part in the lineality of the cone).
auto unit_generator_indices(const AffineMonoid& m) -> std::vector<std::size_t>;

struct MonoidClassification {
  Tri integral = Tri::unknown;
  Tri sharp = Tri::unknown;
  Tri torsion_free = Tri::unknown;
  Tri saturated = Tri::unknown;
  Tri weakly_toric = Tri::unknown;
  Tri toric = Tri::unknown;
  Tri simplicial = Tri::unknown;
  Tri free = Tri::unknown;
  std::size_t rank = 0;
};

struct ClassifyOptions {
  std::size_t rewrite_budget = 4000;  // binomial completion size before `unknown`
  SolveOptions solve;
  HilbertOptions hilbert;
};

auto classify(const AffineMonoid& m, const ClassifyOptions& opts = {}) -> MonoidClassification;
auto classify(const MonoidPresentation& p, const ClassifyOptions& opts = {}) -> MonoidClassification;

auto membership(const AffineMonoid& m, const IntVec& p, const SolveOptions& opts = {}) -> Tri;

// Indices of the irreducible generators of a sharp monoid, in input order.
auto minimal_generators(const AffineMonoid& m, const SolveOptions& opts = {}) -> std::vector<std::size_t>;

}  // namespace corral
