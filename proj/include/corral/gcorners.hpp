#pragma once

#include <optional>
#include <vector>

#include "corral/faces.hpp"
#include "corral/monoid.hpp"

namespace corral {

// X_P ⊂ [0,∞)^m cut out by x^u = x^v for the kernel lattice of the generator
// matrix.  Unit generators stay in the chart; their coordinates are positive on
// X_P, which carries the ℝ^l factor.
struct LocalModel {
  AffineMonoid monoid;
  std::vector<std::pair<IntVec, IntVec>> relations;
  SharpSplit split;
  std::size_t free_rank = 0;  // l
  std::size_t dim = 0;        // rank(P^♯) + l = rank(P)

  [[nodiscard]] auto size() const -> std::size_t { return monoid.size(); }
  [[nodiscard]] auto sharp_rank() const -> std::size_t { return dim - free_rank; }
};

auto build_local_model(const AffineMonoid& p) -> LocalModel;

struct ModelTolerance {
  double relative = 1e-9;  // |x^u − x^v| ≤ relative·(1 + max side)
  double zero = 1e-9;      // coordinates at or below this count as 0
};

struct PointCheck {
  bool ok = true;
  std::optional<std::size_t> relation;  // first violated relation
  double residual = 0;
  std::string reason;
};

auto validate_point(const LocalModel& m, const std::vector<double>& x, const ModelTolerance& tol = {}) -> PointCheck;

struct Depth {
  std::size_t depth = 0;
  PrimeIdeal prime;  // generators vanishing at x, with the adjoined zero
};

auto depth_at(const LocalModel& m, const std::vector<double>& x, const ModelTolerance& tol = {}) -> Depth;

// One stratum per prime of P ⊔ {0}; `key` is the generator support of the
// complement face.
struct CornerStratum {
  PrimeIdeal prime;
  Face face;
  AffineMonoid fiber;
  std::size_t codim = 0;
  std::vector<std::size_t> key;
};

struct CornerDecomposition {
  std::vector<CornerStratum> strata;  // sorted by prime
  std::vector<std::size_t> grading;   // |C_k| for k = 0..rank(P^♯)
  [[nodiscard]] auto boundary() const -> std::vector<std::size_t>;  // indices of C_1 strata
  [[nodiscard]] auto stratum_of(const PrimeIdeal& p) const -> std::optional<std::size_t>;
};

auto corner_decomposition(const LocalModel& m) -> CornerDecomposition;

}  // namespace corral
