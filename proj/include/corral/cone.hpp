#pragma once

#include <stdexcept>
#include <vector>

#include "corral/lattice.hpp"

namespace corral {

// Generators of {ℓ ∈ ℚ^dim : a·ℓ ≥ 0 for all a}: a lineality basis plus
// extreme rays modulo lineality.  All vectors primitive; rays sorted
// lexicographically, lineality in Hermite form.
struct DualDescription {
  std::vector<IntVec> lineality;
  std::vector<IntVec> rays;
};

auto dual_cone(const std::vector<IntVec>& constraints, std::size_t dim) -> DualDescription;

// H-description of cone(gens): rays of the dual are facet normals, lineality
// of the dual gives equations.
struct ConeDescription {
  std::size_t dim = 0;
  std::vector<IntVec> equations;   // e·x = 0
  std::vector<IntVec> facets;      // f·x ≥ 0, irredundant
  [[nodiscard]] auto contains(const IntVec& x) const -> bool;
  [[nodiscard]] auto in_interior(const IntVec& x) const -> bool;  // relative interior
};

auto describe_cone(const std::vector<IntVec>& gens, std::size_t dim) -> ConeDescription;

// Linear subspace of cone(gens) given as x with every facet and equation zero.
auto cone_lineality(const ConeDescription& c) -> std::vector<IntVec>;

// Primitive extreme rays of a pointed cone given by its description.
auto extreme_rays(const ConeDescription& c) -> std::vector<IntVec>;

struct HilbertBoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HilbertOptions {
  std::size_t cap = 10000;  // intermediate candidate vectors
};

// A generating set of the monoid cone(gens) ∩ ℤ^dim.  For pointed cones this is
// the Hilbert basis; otherwise lifts of the pointed quotient's basis together
// with ± a basis of the lineality lattice.  Sorted lexicographically.
auto hilbert_basis(const std::vector<IntVec>& gens, std::size_t dim, const HilbertOptions& opts = {})
    -> std::vector<IntVec>;

// Same for the cone {x : a·x ≥ 0 for all a}.
auto hilbert_basis_of_inequalities(const std::vector<IntVec>& constraints, std::size_t dim,
                                   const HilbertOptions& opts = {}) -> std::vector<IntVec>;

}  // namespace corral
