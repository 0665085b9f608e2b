#include "corral/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace corral {

namespace {

auto mod_pos(const Int& a, const Int& d) -> Int {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
  return r;
}

auto floor_div(const Int& a, const Int& b) -> Int {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

auto to_rat(const IntMatrix& a) -> RatMatrix {
  RatMatrix m(a.rows(), std::vector<Rat>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j);
  return m;
}

// Row echelon form in place; returns rank.
auto rat_echelon(RatMatrix& m, std::size_t cols) -> std::size_t {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      Rat f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace

auto IntMatrix::identity(std::size_t n) -> IntMatrix {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

auto IntMatrix::from_rows(const std::vector<IntVec>& rows, std::size_t cols) -> IntMatrix {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("from_rows: ragged input");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

auto IntMatrix::from_cols(const std::vector<IntVec>& cols, std::size_t rows) -> IntMatrix {
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw std::invalid_argument("from_cols: ragged input");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

auto IntMatrix::row(std::size_t i) const -> IntVec {
  return IntVec(a_.begin() + static_cast<long>(i * cols_), a_.begin() + static_cast<long>((i + 1) * cols_));
}

auto IntMatrix::col(std::size_t j) const -> IntVec {
  IntVec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

auto IntMatrix::transpose() const -> IntMatrix {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

auto IntMatrix::row_list() const -> std::vector<IntVec> {
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
  return out;
}

auto IntMatrix::col_list() const -> std::vector<IntVec> {
  std::vector<IntVec> out;
  for (std::size_t j = 0; j < cols_; ++j) out.push_back(col(j));
  return out;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t k) {
  if (i == k) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
}

void IntMatrix::swap_cols(std::size_t j, std::size_t k) {
  if (j == k) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, j), (*this)(i, k));
}

void IntMatrix::add_row(std::size_t i, std::size_t k, const Int& c) {
  if (c == 0) return;
  for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) += c * (*this)(k, j);
}

void IntMatrix::add_col(std::size_t j, std::size_t k, const Int& c) {
  if (c == 0) return;
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) += c * (*this)(i, k);
}

auto operator*(const IntMatrix& a, const IntMatrix& b) -> IntMatrix {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

auto operator*(const IntMatrix& a, const IntVec& v) -> IntVec {
  if (a.cols() != v.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
  IntVec out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

auto to_string(const IntVec& v) -> std::string {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << ')';
  return os.str();
}

auto to_string(const IntMatrix& m) -> std::string {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) os << (i ? "," : "") << to_string(m.row(i));
  os << ']';
  return os.str();
}

auto dot(const IntVec& a, const IntVec& b) -> Int {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

auto is_zero(const IntVec& v) -> bool {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

auto content(const IntVec& v) -> Int {
  Int g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

auto primitive(IntVec v) -> IntVec {
  Int g = content(v);
  if (g > 1)
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return v;
}

auto ivec(std::initializer_list<long> xs) -> IntVec {
  IntVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

auto lex_less(const IntVec& a, const IntVec& b) -> bool {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

auto rank(const IntMatrix& a) -> std::size_t {
  auto m = to_rat(a);
  return rat_echelon(m, a.cols());
}

auto rational_rank(RatMatrix m) -> std::size_t {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  return rat_echelon(m, cols);
}

auto rank_of(const std::vector<IntVec>& vecs, std::size_t dim) -> std::size_t {
  if (vecs.empty()) return 0;
  return rank(IntMatrix::from_rows(vecs, dim));
}

auto determinant(const IntMatrix& a) -> Int {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant: not square");
  auto m = to_rat(a);
  Rat det = 1;
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rat f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return Int(det);
}

auto hermite_rows_with_transform(const IntMatrix& a, IntMatrix& g) -> IntMatrix {
  IntMatrix h = a;
  g = IntMatrix::identity(a.rows());
  const std::size_t m = a.rows();
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < m; ++c) {
    while (true) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i)
        if (h(i, c) != 0 && (best == m || abs(h(i, c)) < abs(h(best, c)))) best = i;
      if (best == m) break;
      h.swap_rows(r, best);
      g.swap_rows(r, best);
      bool cleared = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (h(i, c) == 0) continue;
        Int q = floor_div(h(i, c), h(r, c));
        h.add_row(i, r, -q);
        g.add_row(i, r, -q);
        if (h(i, c) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      h.add_row(r, r, Int(-2));
      g.add_row(r, r, Int(-2));
    }
    for (std::size_t i = 0; i < r; ++i) {
      Int q = floor_div(h(i, c), h(r, c));
      h.add_row(i, r, -q);
      g.add_row(i, r, -q);
    }
    ++r;
  }
  return h;
}

auto hermite_rows(const IntMatrix& a) -> IntMatrix {
  IntMatrix g;
  IntMatrix h = hermite_rows_with_transform(a, g);
  std::vector<IntVec> rows;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    auto r = h.row(i);
    if (!is_zero(r)) rows.push_back(std::move(r));
  }
  return IntMatrix::from_rows(rows, a.cols());
}

auto smith_normal_form(const IntMatrix& a) -> SNFDecomposition {
  const std::size_t m = a.rows(), n = a.cols();
  IntMatrix d = a, u = IntMatrix::identity(m), v = IntMatrix::identity(n);
  const std::size_t lim = std::min(m, n);

  // Move the smallest nonzero |entry| of the trailing block (or of row/col t
  // only, when `line_only`) to (t, t); false if none exists.
  auto pivot = [&](std::size_t t, bool line_only) {
    std::size_t bi = m, bj = n;
    auto consider = [&](std::size_t i, std::size_t j) {
      if (d(i, j) == 0) return;
      if (bi == m || abs(d(i, j)) < abs(d(bi, bj)) ||
          (abs(d(i, j)) == abs(d(bi, bj)) && std::pair(i, j) < std::pair(bi, bj))) {
        bi = i;
        bj = j;
      }
    };
    if (line_only) {
      for (std::size_t i = t; i < m; ++i) consider(i, t);
      for (std::size_t j = t; j < n; ++j) consider(t, j);
    } else {
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) consider(i, j);
    }
    if (bi == m) return false;
    d.swap_rows(t, bi);
    u.swap_rows(t, bi);
    d.swap_cols(t, bj);
    v.swap_cols(t, bj);
    return true;
  };

  for (std::size_t t = 0; t < lim; ++t) {
    if (!pivot(t, false)) break;
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        Int q = d(i, t) / d(t, t);
        d.add_row(i, t, -q);
        u.add_row(i, t, -q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        Int q = d(t, j) / d(t, t);
        d.add_col(j, t, -q);
        v.add_col(j, t, -q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) {
        pivot(t, true);
        continue;
      }
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            d.add_row(t, i, Int(1));
            u.add_row(t, i, Int(1));
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d(t, t) < 0) {
      d.add_row(t, t, Int(-2));
      u.add_row(t, t, Int(-2));
    }
  }
  SNFDecomposition out{u, d, v, {}};
  for (std::size_t i = 0; i < lim; ++i) out.diagonal.push_back(d(i, i));
  return out;
}

auto kernel_lattice(const IntMatrix& a) -> IntMatrix {
  auto snf = smith_normal_form(a);
  std::size_t k = 0;
  while (k < snf.diagonal.size() && snf.diagonal[k] != 0) ++k;
  std::vector<IntVec> basis;
  for (std::size_t j = k; j < a.cols(); ++j) basis.push_back(snf.V.col(j));
  if (basis.empty()) return IntMatrix(0, a.cols());
  return hermite_rows(IntMatrix::from_rows(basis, a.cols()));
}

auto solve_integer(const IntMatrix& a, const IntVec& b) -> std::optional<IntVec> {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_integer: length mismatch");
  auto snf = smith_normal_form(a);
  IntVec y = snf.U * b;
  IntVec z(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const Int di = i < snf.diagonal.size() ? snf.diagonal[i] : Int(0);
    if (di == 0) {
      if (y[i] != 0) return std::nullopt;
      continue;
    }
    if (y[i] % di != 0) return std::nullopt;
    z[i] = y[i] / di;
  }
  return snf.V * z;
}

auto inverse_unimodular(const IntMatrix& a) -> IntMatrix {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("inverse_unimodular: not square");
  RatMatrix m = to_rat(a);
  for (std::size_t i = 0; i < n; ++i) {
    m[i].resize(2 * n);
    m[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) throw std::invalid_argument("inverse_unimodular: singular");
    std::swap(m[p], m[c]);
    Rat inv = 1 / m[c][c];
    for (auto& x : m[c]) x *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (std::size_t j = 0; j < 2 * n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  IntMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (m[i][n + j].get_den() != 1) throw std::invalid_argument("inverse_unimodular: not unimodular");
      out(i, j) = m[i][n + j].get_num();
    }
  return out;
}

auto AbelianGroup::order() const -> std::optional<Int> {
  if (free_rank > 0) return std::nullopt;
  Int o = 1;
  for (const auto& d : torsion) o *= d;
  return o;
}

auto AbelianGroup::exponent() const -> Int {
  Int e = 1;
  for (const auto& d : torsion) mpz_lcm(e.get_mpz_t(), e.get_mpz_t(), d.get_mpz_t());
  return e;
}

auto AbelianGroup::canonical(IntVec v) const -> IntVec {
  if (v.size() != dim()) throw std::invalid_argument("group element has wrong length");
  for (std::size_t i = 0; i < torsion.size(); ++i) v[free_rank + i] = mod_pos(v[free_rank + i], torsion[i]);
  return v;
}

auto AbelianGroup::add(const IntVec& a, const IntVec& b) const -> IntVec {
  IntVec c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = a[i] + b[i];
  return canonical(std::move(c));
}

auto AbelianGroup::sub(const IntVec& a, const IntVec& b) const -> IntVec {
  IntVec c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = a[i] - b[i];
  return canonical(std::move(c));
}

auto AbelianGroup::scale(const Int& k, const IntVec& a) const -> IntVec {
  IntVec c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = k * a[i];
  return canonical(std::move(c));
}

auto AbelianGroup::free_part(const IntVec& a) const -> IntVec {
  return IntVec(a.begin(), a.begin() + static_cast<long>(free_rank));
}

auto AbelianGroup::basis_element(std::size_t i) const -> IntVec {
  IntVec e(dim());
  e.at(i) = 1;
  return e;
}

auto AbelianGroup::relation_matrix() const -> IntMatrix {
  IntMatrix r(dim(), torsion.size());
  for (std::size_t j = 0; j < torsion.size(); ++j) r(free_rank + j, j) = torsion[j];
  return r;
}

auto to_string(const AbelianGroup& g) -> std::string {
  std::ostringstream os;
  bool first = true;
  if (g.free_rank > 0) {
    os << "Z";
    if (g.free_rank > 1) os << '^' << g.free_rank;
    first = false;
  }
  for (const auto& d : g.torsion) {
    os << (first ? "" : " + ") << "Z/" << d.get_str();
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

auto Cokernel::project(const IntVec& v) const -> IntVec { return group.canonical(projection * v); }

auto Cokernel::image(std::size_t basis_index) const -> IntVec {
  return group.canonical(projection.col(basis_index));
}

auto cokernel_group(const IntMatrix& a) -> Cokernel {
  const std::size_t m = a.rows();
  auto snf = smith_normal_form(a);
  std::size_t k = 0;
  while (k < snf.diagonal.size() && snf.diagonal[k] != 0) ++k;

  std::vector<IntVec> free_rows;
  for (std::size_t i = k; i < m; ++i) free_rows.push_back(snf.U.row(i));
  IntMatrix h = free_rows.empty() ? IntMatrix(0, m) : hermite_rows(IntMatrix::from_rows(free_rows, m));

  Cokernel out;
  out.group.free_rank = h.rows();
  std::vector<IntVec> rows = h.row_list();
  for (std::size_t i = 0; i < k; ++i) {
    const Int& d = snf.diagonal[i];
    if (d == 1) continue;
    IntVec t = snf.U.row(i);
    for (auto& x : t) x = mod_pos(x, d);
    // Reduce against each free row at its pivot: the entry there can be moved
    // by multiples of gcd(pivot, d).
    for (std::size_t f = 0; f < h.rows(); ++f) {
      std::size_t p = 0;
      while (h(f, p) == 0) ++p;
      const Int& hp = h(f, p);
      Int g;
      mpz_gcd(g.get_mpz_t(), hp.get_mpz_t(), d.get_mpz_t());
      const Int modulus = d / g;
      if (modulus == 1) continue;
      const Int target = mod_pos(t[p], g);
      const Int steps = (t[p] - target) / g;
      Int inv;
      const Int hg = mod_pos(hp / g, modulus);
      mpz_invert(inv.get_mpz_t(), hg.get_mpz_t(), modulus.get_mpz_t());
      const Int c = mod_pos(-steps * inv, modulus);
      for (std::size_t j = 0; j < m; ++j) t[j] = mod_pos(t[j] + c * h(f, j), d);
    }
    rows.push_back(std::move(t));
    out.group.torsion.push_back(d);
  }
  out.projection = IntMatrix::from_rows(rows, m);
  return out;
}

auto quotient_group(const AbelianGroup& g, const std::vector<IntVec>& elems) -> Cokernel {
  std::vector<IntVec> cols = elems;
  auto rel = g.relation_matrix();
  for (std::size_t j = 0; j < rel.cols(); ++j) cols.push_back(rel.col(j));
  return cokernel_group(IntMatrix::from_cols(cols, g.dim()));
}

auto subgroup_structure(const AbelianGroup& g, const std::vector<IntVec>& elems) -> AbelianGroup {
  std::vector<IntVec> cols = elems;
  auto rel = g.relation_matrix();
  for (std::size_t j = 0; j < rel.cols(); ++j) cols.push_back(rel.col(j));
  auto ker = kernel_lattice(IntMatrix::from_cols(cols, g.dim()));
  std::vector<IntVec> rels;
  for (std::size_t i = 0; i < ker.rows(); ++i) {
    IntVec r(elems.size());
    for (std::size_t j = 0; j < elems.size(); ++j) r[j] = ker(i, j);
    rels.push_back(std::move(r));
  }
  return cokernel_group(IntMatrix::from_cols(rels, elems.size())).group;
}

auto solve_in_group(const AbelianGroup& g, const std::vector<IntVec>& elems, const IntVec& target)
    -> std::optional<IntVec> {
  std::vector<IntVec> cols = elems;
  auto rel = g.relation_matrix();
  for (std::size_t j = 0; j < rel.cols(); ++j) cols.push_back(rel.col(j));
  auto x = solve_integer(IntMatrix::from_cols(cols, g.dim()), target);
  if (!x) return std::nullopt;
  x->resize(elems.size());
  return x;
}

auto default_solve_bound(const IntVec& target) -> Int {
  Int mx = 0;
  for (const auto& x : target) mx = std::max(mx, Int(abs(x)));
  return 64 * (1 + mx);
}

}  // namespace corral
