#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace corral {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static auto identity(std::size_t n) -> IntMatrix;
  static auto from_rows(const std::vector<IntVec>& rows, std::size_t cols) -> IntMatrix;
  // Columns are the given vectors; `rows` fixes the height when the list is empty.
  static auto from_cols(const std::vector<IntVec>& cols, std::size_t rows) -> IntMatrix;

  [[nodiscard]] auto rows() const -> std::size_t { return rows_; }
  [[nodiscard]] auto cols() const -> std::size_t { return cols_; }
  auto operator()(std::size_t i, std::size_t j) -> Int& { return a_[i * cols_ + j]; }
  auto operator()(std::size_t i, std::size_t j) const -> const Int& { return a_[i * cols_ + j]; }

  [[nodiscard]] auto row(std::size_t i) const -> IntVec;
  [[nodiscard]] auto col(std::size_t j) const -> IntVec;
  [[nodiscard]] auto transpose() const -> IntMatrix;
  [[nodiscard]] auto row_list() const -> std::vector<IntVec>;
  [[nodiscard]] auto col_list() const -> std::vector<IntVec>;

  void swap_rows(std::size_t i, std::size_t k);
  void swap_cols(std::size_t j, std::size_t k);
  // row_i += c * row_k
  void add_row(std::size_t i, std::size_t k, const Int& c);
  void add_col(std::size_t j, std::size_t k, const Int& c);

  friend auto operator*(const IntMatrix& a, const IntMatrix& b) -> IntMatrix;
  friend auto operator*(const IntMatrix& a, const IntVec& v) -> IntVec;
  friend auto operator==(const IntMatrix& a, const IntMatrix& b) -> bool = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> a_;
};

auto to_string(const IntVec& v) -> std::string;
auto to_string(const IntMatrix& m) -> std::string;

auto dot(const IntVec& a, const IntVec& b) -> Int;
auto is_zero(const IntVec& v) -> bool;
auto content(const IntVec& v) -> Int;  // gcd of entries, 0 for the zero vector
auto primitive(IntVec v) -> IntVec;
auto ivec(std::initializer_list<long> xs) -> IntVec;

auto rank(const IntMatrix& a) -> std::size_t;
// Rows of equal length.
using RatMatrix = std::vector<std::vector<Rat>>;
auto rational_rank(RatMatrix m) -> std::size_t;
auto rank_of(const std::vector<IntVec>& vecs, std::size_t dim) -> std::size_t;
auto determinant(const IntMatrix& a) -> Int;

// Rows of the result form a basis of the row lattice, in Hermite normal form:
// positive pivots, entries above a pivot reduced into [0, pivot).
auto hermite_rows(const IntMatrix& a) -> IntMatrix;
// Also returns the unimodular G with G·A = H (H padded with zero rows).
auto hermite_rows_with_transform(const IntMatrix& a, IntMatrix& g) -> IntMatrix;

// Lattice basis (rows, Hermite normal form) of {x ∈ ℤ^cols : A x = 0}.
auto kernel_lattice(const IntMatrix& a) -> IntMatrix;
// Some x ∈ ℤ^cols with A x = b, if one exists.
auto solve_integer(const IntMatrix& a, const IntVec& b) -> std::optional<IntVec>;
// Inverse of a square matrix with |det| = 1.
auto inverse_unimodular(const IntMatrix& a) -> IntMatrix;

struct SNFDecomposition {
  IntMatrix U, D, V;
  std::vector<Int> diagonal;  // d_1 | d_2 | ..., zeros trailing, length min(rows, cols)
};

auto smith_normal_form(const IntMatrix& a) -> SNFDecomposition;

// ℤ^free_rank ⊕ ⊕ ℤ/d_i.  Elements are integer vectors of length dim(); torsion
// coordinates are kept in [0, d_i).
struct AbelianGroup {
  std::size_t free_rank = 0;
  std::vector<Int> torsion;

  [[nodiscard]] auto dim() const -> std::size_t { return free_rank + torsion.size(); }
  [[nodiscard]] auto is_trivial() const -> bool { return free_rank == 0 && torsion.empty(); }
  [[nodiscard]] auto is_torsion_free() const -> bool { return torsion.empty(); }
  [[nodiscard]] auto order() const -> std::optional<Int>;
  [[nodiscard]] auto exponent() const -> Int;  // lcm of torsion orders, 1 if none

  [[nodiscard]] auto canonical(IntVec v) const -> IntVec;
  [[nodiscard]] auto add(const IntVec& a, const IntVec& b) const -> IntVec;
  [[nodiscard]] auto sub(const IntVec& a, const IntVec& b) const -> IntVec;
  [[nodiscard]] auto scale(const Int& c, const IntVec& a) const -> IntVec;
  [[nodiscard]] auto zero() const -> IntVec { return IntVec(dim()); }
  [[nodiscard]] auto free_part(const IntVec& a) const -> IntVec;
  // Generator e_i of the i-th summand (free summands first).
  [[nodiscard]] auto basis_element(std::size_t i) const -> IntVec;
  // The relation matrix presenting this group on dim() generators.
  [[nodiscard]] auto relation_matrix() const -> IntMatrix;

  static auto free(std::size_t r) -> AbelianGroup { return AbelianGroup{r, {}}; }
  friend auto operator==(const AbelianGroup&, const AbelianGroup&) -> bool = default;
};

auto to_string(const AbelianGroup& g) -> std::string;

struct Cokernel {
  AbelianGroup group;
  IntMatrix projection;  // group.dim() × ambient rows

  [[nodiscard]] auto project(const IntVec& v) const -> IntVec;
  [[nodiscard]] auto image(std::size_t basis_index) const -> IntVec;
};

// ℤ^rows / colspan(A) with a canonical coordinate choice: the free block of the
// projection is in row Hermite form and torsion rows are reduced against it.
auto cokernel_group(const IntMatrix& a) -> Cokernel;

// Quotient of an abelian group by the subgroup generated by `elems`.
auto quotient_group(const AbelianGroup& g, const std::vector<IntVec>& elems) -> Cokernel;

// Structure of the subgroup generated by `elems` (as an abstract group).
auto subgroup_structure(const AbelianGroup& g, const std::vector<IntVec>& elems) -> AbelianGroup;

// Whether `target` lies in the subgroup generated by `elems`; if so, integer
// coefficients expressing it.
auto solve_in_group(const AbelianGroup& g, const std::vector<IntVec>& elems, const IntVec& target)
    -> std::optional<IntVec>;

enum class SolveStatus { found, not_found, bound_exceeded };

struct SolveResult {
  SolveStatus status = SolveStatus::not_found;
  IntVec coefficients;
};

auto default_solve_bound(const IntVec& target) -> Int;

struct SolveOptions {
  std::optional<Int> bound;           // coefficient-sum bound; default_solve_bound if unset
  std::size_t node_budget = 2000000;  // DFS nodes before giving up
};

// Nonnegative integer solution of Σ a_i g_i = target in g.  not_found is
// certified: either a lattice or cone obstruction, or an exhaustive search
// up to the degree bound implied by a strictly positive functional.
auto solve_nonneg(const AbelianGroup& g, const std::vector<IntVec>& gens, const IntVec& target,
                  const SolveOptions& opts = {}) -> SolveResult;

auto lex_less(const IntVec& a, const IntVec& b) -> bool;

}  // namespace corral
