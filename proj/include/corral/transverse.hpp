#pragma once

#include <string>
#include <vector>

#include "corral/faces.hpp"
#include "corral/gcorners.hpp"
#include "corral/monoid.hpp"

namespace corral {

// Corner germ of a manifold with g-corners: P × ℝ^l near the vertex of X_P.
struct GermSide {
  std::string name;
  AffineMonoid monoid;  // sharp toric P
  std::size_t free_rank = 0;

  [[nodiscard]] auto rank() const -> std::size_t { return monoid.rank(); }
  [[nodiscard]] auto dim() const -> std::size_t { return monoid.rank() + free_rank; }
};

// Germ of an interior map X → Z at corner points.  `phi[j]` is the image in
// P_x of target generator j.  The b-Jacobian has rows indexed by the target's
// corner then free coordinates and columns likewise for the source; its
// corner–corner block is Φ^T where Φ: P_z^gp → P_x^gp is induced by phi.
struct GermMap {
  GermSide source, target;
  std::vector<IntVec> phi;
  RatMatrix jacobian;

  void validate() const;
  [[nodiscard]] auto phi_matrix() const -> IntMatrix;  // rank P_x × rank P_z
};

// N = Hom(P, ℕ) in dual coordinates, with ⟨n_i, p_j⟩ in `pairing`.
struct DualData {
  AffineMonoid dual;
  IntMatrix pairing;
};

auto dual_monoid(const AffineMonoid& p, const HilbertOptions& opts = {}) -> DualData;

auto b_transverse(const GermMap& g, const GermMap& h) -> bool;

enum class CFailure { none, not_b_transverse, normal_map, face_condition };
auto to_string(CFailure f) -> std::string;

struct CTransverse {
  bool ok = false;
  CFailure failure = CFailure::none;
  std::vector<IntVec> k_basis;  // Hilbert basis of K ⊂ P_x^∨ × P_y^∨
  IntVec k_sum;                 // interior certificate when ok
};

auto c_transverse(const GermMap& g, const GermMap& h, const HilbertOptions& opts = {}) -> CTransverse;

struct FibreProductGerm {
  AffineMonoid k;  // K in coordinates of its own group
  std::vector<IntVec> k_basis;  // K's Hilbert basis in P_x^∨ × P_y^∨ coordinates
  AffineMonoid w;  // K^∨
  std::size_t dim_w = 0;
};

auto fibre_product_germ(const GermMap& g, const GermMap& h, const HilbertOptions& opts = {}) -> FibreProductGerm;

// One row per face of K, i.e. per stratum of C(W) over the corner point.
struct GradingRow {
  std::vector<std::size_t> k_face;  // support among k_basis
  std::size_t i = 0, j = 0, k = 0, l = 0;
  std::vector<std::size_t> x_face, y_face, z_face;  // faces of P_x, P_y, P_z (supports)
};

struct GradingReport {
  std::vector<GradingRow> rows;
  bool law_holds = true;                // i + l = j + k on every row
  std::vector<std::size_t> w_counts;    // |C_i(W)| from faces of K
  std::vector<std::size_t> pair_counts; // Σ over compatible (x, y) stratum pairs with i = j + k − l
  bool bijective = true;                // faces of K ↔ compatible stratum pairs
};

auto corner_grading_check(const GermMap& g, const GermMap& h, const HilbertOptions& opts = {}) -> GradingReport;

struct StrictReport {
  std::vector<std::vector<std::size_t>> keys;  // W strata, keyed as in corner_decomposition
  std::vector<bool> free;
  bool sc = true;
};

auto strict_corner_check(const GermMap& g, const GermMap& h, const HilbertOptions& opts = {}) -> StrictReport;

}  // namespace corral
