#pragma once

#include <vector>

#include "corral/errors.hpp"
#include "corral/monoid.hpp"

namespace corral {

// A face of M, by the generators it contains.  `certificate` is ℓ on the free
// part of the ambient group with ℓ·g = 0 for g in the face and ℓ·g > 0 otherwise.
struct Face {
  std::vector<std::size_t> support;
  IntVec certificate;
  std::size_t rank = 0;  // rank of the face's group
  friend auto operator==(const Face&, const Face&) -> bool = default;
};

// Faces sorted by (|support|, support); covers[i] lists faces that cover faces[i].
struct FaceLattice {
  std::vector<Face> faces;
  std::vector<std::vector<std::size_t>> covers;

  [[nodiscard]] auto f_vector() const -> std::vector<std::size_t>;  // counts by rank
  [[nodiscard]] auto index_of(const std::vector<std::size_t>& support) const -> std::optional<std::size_t>;
};

struct FaceOptions {
  std::size_t rank_limit = 8;
};

auto enumerate_faces(const AffineMonoid& m, const FaceOptions& opts = {}) -> FaceLattice;

// Whether ℓ certifies `support` as a face of m.
auto certifies(const AffineMonoid& m, const IntVec& ell, const std::vector<std::size_t>& support) -> bool;

// P = M ∖ F, plus the adjoined zero when `includes_zero`.  `generators` are the
// generators lying in P.
struct PrimeIdeal {
  Face complement;
  bool includes_zero = false;
  std::vector<std::size_t> generators;
  friend auto operator==(const PrimeIdeal&, const PrimeIdeal&) -> bool = default;
};

// Without zero: one prime per proper face.  With zero: one per face, the full
// face giving {0}.  Sorted by (|generators|, generators).
auto primes(const AffineMonoid& m, bool with_zero, const FaceOptions& opts = {}) -> std::vector<PrimeIdeal>;

// Longest chain P_1 ⊊ ⋯ ⊊ P_d of primes.
auto monoid_dimension(const AffineMonoid& m, bool with_zero, const FaceOptions& opts = {}) -> std::size_t;

// Image of M in M^gp / ⟨F⟩ for F the complement face of P, generated by the
// images of the generators outside F.
auto corner_fiber(const AffineMonoid& m, const PrimeIdeal& p) -> AffineMonoid;
auto corner_fiber(const AffineMonoid& m, const Face& f) -> AffineMonoid;

struct IsoOptions {
  std::size_t budget = 200000;  // candidate basis assignments
  SolveOptions solve;
};

// Isomorphism of affine monoids.  Decided for sharp torsion-free inputs by
// search over assignments of a generator basis; invariants rule out the rest
// where they can, otherwise `unknown`.
auto isomorphic(const AffineMonoid& a, const AffineMonoid& b, const IsoOptions& opts = {}) -> Tri;

}  // namespace corral
