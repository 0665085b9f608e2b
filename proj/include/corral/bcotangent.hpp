#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corral/errors.hpp"
#include "corral/expr.hpp"
#include "corral/monoid.hpp"

namespace corral {

using RealMatrix = Eigen::MatrixXd;

// C = F^{A,A_in} / (f_b = 0) [g_b' = h_b'].  Expressions index real
// generators into `real` and interior generators into `interior`.
struct CRingPresentation {
  std::string name;
  std::vector<std::string> real, interior;
  std::vector<SmoothExpr> zeros;
  std::vector<std::pair<InteriorExpr, InteriorExpr>> relations;

  [[nodiscard]] auto size() const -> std::size_t { return real.size() + interior.size(); }
  [[nodiscard]] auto labels() const -> std::vector<std::string>;  // real then interior
  void validate() const;

  friend auto operator==(const CRingPresentation&, const CRingPresentation&) -> bool = default;
};

auto free_cring(std::string name, std::vector<std::string> real, std::vector<std::string> interior)
    -> CRingPresentation;

struct PointTolerance {
  double absolute = 1e-9;  // |f_b| ≤ absolute
  double relative = 1e-9;  // |g − h| ≤ relative·(1 + |g| + |h|)
};

struct RPointCheck {
  bool ok = true;
  std::vector<double> residuals;  // zeros then interior relations
  std::optional<std::size_t> relation;
  std::string reason;
};

auto check_point(const CRingPresentation& c, const RPoint& p, const PointTolerance& tol = {}) -> RPointCheck;

// Generators A_in with the exponent parts of the interior relations; the
// exponential factors are units and die in the sharpening.
auto sharpened_monoid(const CRingPresentation& c) -> MonoidPresentation;

struct RankTolerance {
  double rank = 1e-8;     // relative to the largest pivot
  double strict = 1e-10;  // cross-check
};

struct RankInfo {
  std::size_t rank = 0;
  std::size_t rank_strict = 0;
  std::vector<double> singular_values;
  [[nodiscard]] auto stable() const -> bool { return rank == rank_strict; }
};

// Column-pivoted QR at both tolerances.  An SVD count at the main tolerance
// that disagrees with QR replaces rank_strict, so stable() covers it too.
auto numeric_rank(const RealMatrix& m, const RankTolerance& tol = {}) -> RankInfo;

struct BCotangentFibre {
  std::vector<std::string> labels;
  RealMatrix gamma;  // (|B| + |B_in|) × (|A| + |A_in|)
  RankInfo rank;
  std::size_t fibre_dim = 0;
  RankTolerance tol;
};

auto relation_matrix(const CRingPresentation& c, const RPoint& p) -> RealMatrix;
auto bcotangent_fibre(const CRingPresentation& c, const RPoint& p, const RankTolerance& tol = {},
                      const PointTolerance& ptol = {}) -> BCotangentFibre;

// Interior morphism C → D given on generators: real generators to smooth
// expressions over D, interior generators to interior expressions over D.
struct CRingMorphism {
  std::string name;
  CRingPresentation source, target;
  std::vector<SmoothExpr> real;
  std::vector<InteriorExpr> interior;

  void validate() const;
  // Image under Spec: a point of the target gives a point of the source.
  [[nodiscard]] auto pull_point(const RPoint& q) const -> RPoint;
  // Rows: source generators; columns: target generators; entries of d_in(image).
  [[nodiscard]] auto bjacobian(const RPoint& q) const -> RealMatrix;

  friend auto operator==(const CRingMorphism&, const CRingMorphism&) -> bool = default;
};

auto identity_morphism(const CRingPresentation& c) -> CRingMorphism;

// D ⊔_C E, named D_E, with generators D.real, E.real | D.interior, E.interior.  Labels that
// occur on both sides are qualified by the ring name.
auto pushout(const CRingMorphism& alpha, const CRingMorphism& beta) -> CRingPresentation;

// Splits a point of the pushout into its D and E parts.
auto split_pushout_point(const CRingMorphism& alpha, const CRingMorphism& beta, const RPoint& p)
    -> std::pair<RPoint, RPoint>;

// Ω_C ⊗ F → (Ω_D ⊕ Ω_E) ⊗ F → Ω_F → 0 at one point, by rank arithmetic on
// quotient spaces ℝ^n / rowspace(γ).
struct PushoutReport {
  std::size_t dim_c = 0, dim_d = 0, dim_e = 0, dim_f = 0;
  std::size_t first_rank = 0, second_rank = 0;
  bool well_defined = false;  // relations of C land in relations of D ⊕ E
  bool composition_zero = false;
  bool middle_exact = false;
  bool right_exact = false;
  bool stable = false;  // every rank agrees at both tolerances
  [[nodiscard]] auto exact() const -> bool { return well_defined && composition_zero && middle_exact && right_exact; }
};

auto pushout_sequence_check(const CRingMorphism& alpha, const CRingMorphism& beta, const RPoint& p,
                            const RankTolerance& tol = {}, const PointTolerance& ptol = {}) -> PushoutReport;

// Toric in the sense of its sharpened monoid: integral presentation whose
// integralization is toric.
auto cring_toric(const CRingPresentation& c) -> Tri;

// D = C/∼_P: interior generators in P are set to 0 and removed, interior
// relations between elements of P are dropped.
auto corner_quotient(const CRingPresentation& c, const std::vector<std::size_t>& prime) -> CRingPresentation;

struct CornerSequenceOptions {
  RankTolerance rank;
  PointTolerance point;
  bool require_toric = true;
};

// 0 → Ω_D → Ω_C ⊗ D → C_in^P ⊗ ℝ → 0 at a point of the stratum of P.
struct CornerSequenceReport {
  Tri toric = Tri::unknown;
  std::size_t dim_d = 0, dim_c = 0, dim_corner = 0;
  std::size_t pi_rank = 0, i_rank = 0;
  bool well_defined = false;
  bool composition_zero = false;
  bool left_exact = false;
  bool middle_exact = false;
  bool right_exact = false;
  bool stable = false;
  [[nodiscard]] auto exact() const -> bool {
    return well_defined && composition_zero && left_exact && middle_exact && right_exact;
  }
};

auto corner_sequence_check(const CRingPresentation& c, const std::vector<std::size_t>& prime, const RPoint& p,
                           const CornerSequenceOptions& opts = {}) -> CornerSequenceReport;

}  // namespace corral
