#pragma once

#include <complex>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace polyball {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Thrown when an input fails a structural check (sizes, index ranges,
/// malformed data).  Carries a message naming the offending piece.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when structurally valid input lies outside an operation's domain
/// (singular pencil, singular D block, a required identity failing, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shape of a product of matrix balls: k factors, the r-th holding
/// ell_r x m_r matrices of operator norm at most one.  Factors and the
/// entries inside them are indexed from zero throughout the library;
/// the JSON layer converts to one-based indices at the boundary.
class BallShape {
 public:
  explicit BallShape(std::vector<std::pair<int, int>> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw ValidationError("shape needs at least one factor");
    for (std::size_t r = 0; r < dims_.size(); ++r) {
      if (dims_[r].first < 1 || dims_[r].second < 1) {
        throw ValidationError("shape factor " + std::to_string(r) +
                              " has non-positive dimensions");
      }
    }
  }

  /// d-fold product of scalar disks.
  static BallShape polydisk(int d) {
    return BallShape(std::vector<std::pair<int, int>>(d, {1, 1}));
  }

  int factors() const { return static_cast<int>(dims_.size()); }
  int ell(int r) const { return dims_[r].first; }
  int m(int r) const { return dims_[r].second; }
  const std::vector<std::pair<int, int>>& dims() const { return dims_; }

  /// Total number of scalar variables, sum of ell_r * m_r.
  int var_count() const {
    int d = 0;
    for (const auto& [l, m] : dims_) d += l * m;
    return d;
  }

  /// Flat index of variable (r, i, j): factors in order, each scanned
  /// row-major.
  int var_index(int r, int i, int j) const {
    int base = 0;
    for (int q = 0; q < r; ++q) base += ell(q) * m(q);
    return base + i * m(r) + j;
  }

  bool operator==(const BallShape& o) const { return dims_ == o.dims_; }
  bool operator!=(const BallShape& o) const { return !(*this == o); }

 private:
  std::vector<std::pair<int, int>> dims_;
};

/// Per-factor state-space multiplicities.  A zero entry is legal and keeps
/// that factor present with empty blocks.
class Multiplicity {
 public:
  Multiplicity() = default;
  explicit Multiplicity(std::vector<int> n) : n_(std::move(n)) {
    for (std::size_t r = 0; r < n_.size(); ++r) {
      if (n_[r] < 0) {
        throw ValidationError("multiplicity " + std::to_string(r) + " is negative");
      }
    }
  }

  int size() const { return static_cast<int>(n_.size()); }
  int operator[](int r) const { return n_[r]; }
  const std::vector<int>& values() const { return n_; }
  int total() const {
    int t = 0;
    for (int v : n_) t += v;
    return t;
  }

  bool operator==(const Multiplicity& o) const { return n_ == o.n_; }

 private:
  std::vector<int> n_;
};

/// One formal variable z^(r)_{ij}, zero-based.
struct Letter {
  int r = 0;
  int i = 0;
  int j = 0;

  bool operator==(const Letter& o) const { return r == o.r && i == o.i && j == o.j; }
};

/// A word in the formal variables; the empty word is allowed.
using Word = std::vector<Letter>;

inline void check_letter(const BallShape& shape, const Letter& g) {
  if (g.r < 0 || g.r >= shape.factors()) {
    throw ValidationError("letter factor index " + std::to_string(g.r) + " out of range");
  }
  if (g.i < 0 || g.i >= shape.ell(g.r) || g.j < 0 || g.j >= shape.m(g.r)) {
    throw ValidationError("letter entry index (" + std::to_string(g.i) + "," +
                          std::to_string(g.j) + ") out of range for factor " +
                          std::to_string(g.r));
  }
}

// State-space layouts.  Rows of A (and of B) are indexed by triples
// (r, j, t) with j < m_r and t < n_r, ordered lexicographically; columns
// of A (and of C) by triples (r, i, t) with i < ell_r.  The flat index is
// offset(r) + block * n_r + t, so the level index t is innermost.

inline int row_state_dim(const BallShape& shape, const Multiplicity& n) {
  int d = 0;
  for (int r = 0; r < shape.factors(); ++r) d += shape.m(r) * n[r];
  return d;
}

inline int col_state_dim(const BallShape& shape, const Multiplicity& n) {
  int d = 0;
  for (int r = 0; r < shape.factors(); ++r) d += shape.ell(r) * n[r];
  return d;
}

inline int row_block_offset(const BallShape& shape, const Multiplicity& n, int r) {
  int off = 0;
  for (int q = 0; q < r; ++q) off += shape.m(q) * n[q];
  return off;
}

inline int col_block_offset(const BallShape& shape, const Multiplicity& n, int r) {
  int off = 0;
  for (int q = 0; q < r; ++q) off += shape.ell(q) * n[q];
  return off;
}

inline int row_flat_index(const BallShape& shape, const Multiplicity& n, int r, int j,
                          int t) {
  return row_block_offset(shape, n, r) + j * n[r] + t;
}

inline int col_flat_index(const BallShape& shape, const Multiplicity& n, int r, int i,
                          int t) {
  return col_block_offset(shape, n, r) + i * n[r] + t;
}

/// Decomposed flat state index: factor, block inside the factor, level.
struct StateIndex {
  int r = 0;
  int block = 0;
  int level = 0;
};

inline StateIndex row_unflatten(const BallShape& shape, const Multiplicity& n, int flat) {
  for (int r = 0; r < shape.factors(); ++r) {
    int span = shape.m(r) * n[r];
    if (flat < span) return {r, n[r] == 0 ? 0 : flat / n[r], n[r] == 0 ? 0 : flat % n[r]};
    flat -= span;
  }
  throw ValidationError("row state index out of range");
}

inline StateIndex col_unflatten(const BallShape& shape, const Multiplicity& n, int flat) {
  for (int r = 0; r < shape.factors(); ++r) {
    int span = shape.ell(r) * n[r];
    if (flat < span) return {r, n[r] == 0 ? 0 : flat / n[r], n[r] == 0 ? 0 : flat % n[r]};
    flat -= span;
  }
  throw ValidationError("column state index out of range");
}

/// A point of the product ball at level s: one (ell_r * s) x (m_r * s)
/// matrix per factor, viewed as an ell_r x m_r array of s x s blocks.
class MatrixPoint {
 public:
  MatrixPoint(BallShape shape, int s, std::vector<Matrix> factors)
      : shape_(std::move(shape)), s_(s), z_(std::move(factors)) {
    if (s_ < 1) throw ValidationError("point level must be positive");
    if (static_cast<int>(z_.size()) != shape_.factors()) {
      throw ValidationError("point has " + std::to_string(z_.size()) +
                            " factors, shape expects " +
                            std::to_string(shape_.factors()));
    }
    for (int r = 0; r < shape_.factors(); ++r) {
      if (z_[r].rows() != shape_.ell(r) * s_ || z_[r].cols() != shape_.m(r) * s_) {
        std::ostringstream msg;
        msg << "point factor " << r << " is " << z_[r].rows() << "x" << z_[r].cols()
            << ", expected " << shape_.ell(r) * s_ << "x" << shape_.m(r) * s_;
        throw ValidationError(msg.str());
      }
    }
  }

  static MatrixPoint zero(const BallShape& shape, int s) {
    std::vector<Matrix> z;
    z.reserve(shape.factors());
    for (int r = 0; r < shape.factors(); ++r) {
      z.push_back(Matrix::Zero(shape.ell(r) * s, shape.m(r) * s));
    }
    return MatrixPoint(shape, s, std::move(z));
  }

  /// Scalar point of a polydisk-shaped ball, s = 1.
  static MatrixPoint scalar(const BallShape& shape, const std::vector<Complex>& vals) {
    if (static_cast<int>(vals.size()) != shape.var_count()) {
      throw ValidationError("expected " + std::to_string(shape.var_count()) +
                            " coordinates, got " + std::to_string(vals.size()));
    }
    std::vector<Matrix> z;
    int v = 0;
    for (int r = 0; r < shape.factors(); ++r) {
      Matrix f(shape.ell(r), shape.m(r));
      for (int i = 0; i < shape.ell(r); ++i)
        for (int j = 0; j < shape.m(r); ++j) f(i, j) = vals[v++];
      z.push_back(std::move(f));
    }
    return MatrixPoint(shape, 1, std::move(z));
  }

  const BallShape& shape() const { return shape_; }
  int level() const { return s_; }
  const Matrix& factor(int r) const { return z_[r]; }

  /// The s x s block sitting at entry (i, j) of factor r.
  Eigen::Block<const Matrix> block(int r, int i, int j) const {
    return z_[r].block(i * s_, j * s_, s_, s_);
  }

 private:
  BallShape shape_;
  int s_;
  std::vector<Matrix> z_;
};

/// Structured system matrix [A B; C D] with A acting between the two state
/// layouts above, B mapping beta inputs into the row layout, C mapping the
/// column layout onto alpha outputs, and D the alpha x beta constant block.
class Colligation {
 public:
  Colligation(BallShape shape, Multiplicity n, Matrix a, Matrix b, Matrix c, Matrix d)
      : shape_(std::move(shape)),
        n_(std::move(n)),
        a_(std::move(a)),
        b_(std::move(b)),
        c_(std::move(c)),
        d_(std::move(d)) {
    if (n_.size() != shape_.factors()) {
      throw ValidationError("multiplicity has " + std::to_string(n_.size()) +
                            " entries, shape has " + std::to_string(shape_.factors()) +
                            " factors");
    }
    const int rows = row_state_dim(shape_, n_);
    const int cols = col_state_dim(shape_, n_);
    require_size("A", a_, rows, cols);
    require_size("B", b_, rows, static_cast<int>(d_.cols()));
    require_size("C", c_, static_cast<int>(d_.rows()), cols);
  }

  const BallShape& shape() const { return shape_; }
  const Multiplicity& n() const { return n_; }
  int alpha() const { return static_cast<int>(d_.rows()); }
  int beta() const { return static_cast<int>(d_.cols()); }
  int row_dim() const { return static_cast<int>(a_.rows()); }
  int col_dim() const { return static_cast<int>(a_.cols()); }

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Matrix& c() const { return c_; }
  const Matrix& d() const { return d_; }

  /// n_r x n_{r'} block of A at row (r, j, .), column (r', i, .).
  Eigen::Block<const Matrix> a_block(int r, int rp, int j, int i) const {
    return a_.block(row_flat_index(shape_, n_, r, j, 0),
                    col_flat_index(shape_, n_, rp, i, 0), n_[r], n_[rp]);
  }

  /// n_r x beta block of B at row (r, j, .).
  Eigen::Block<const Matrix> b_block(int r, int j) const {
    return b_.block(row_flat_index(shape_, n_, r, j, 0), 0, n_[r], beta());
  }

  /// alpha x n_r block of C at column (r, i, .).
  Eigen::Block<const Matrix> c_block(int r, int i) const {
    return c_.block(0, col_flat_index(shape_, n_, r, i, 0), alpha(), n_[r]);
  }

  /// The full (rows + alpha) x (cols + beta) block matrix [A B; C D].
  Matrix full_matrix() const {
    Matrix u(row_dim() + alpha(), col_dim() + beta());
    u << a_, b_, c_, d_;
    return u;
  }

 private:
  static void require_size(const char* name, const Matrix& m, int rows, int cols) {
    if (m.rows() != rows || m.cols() != cols) {
      std::ostringstream msg;
      msg << name << " is " << m.rows() << "x" << m.cols() << ", expected " << rows
          << "x" << cols;
      throw ValidationError(msg.str());
    }
  }

  BallShape shape_;
  Multiplicity n_;
  Matrix a_, b_, c_, d_;
};

/// Re-checks every dimension invariant of an already-constructed system.
/// Construction enforces the same checks, so this is mainly useful after
/// deserialization of hand-edited data.
inline void validate(const Colligation& coll) {
  Colligation copy(coll.shape(), coll.n(), coll.a(), coll.b(), coll.c(), coll.d());
  (void)copy;
}

/// Block-diagonal structured point: factor r contributes Z^(r) acting on
/// n_r copies of itself, giving a (col span * s) x (row span * s) matrix.
/// Entry at row (r, i, t), column (r', j, t') is the s x s block
/// Z^(r)_{ij} when r = r' and t = t', zero otherwise.
inline Matrix assemble_zn(const MatrixPoint& pt, const Multiplicity& n) {
  const BallShape& shape = pt.shape();
  if (n.size() != shape.factors()) {
    throw ValidationError("multiplicity has " + std::to_string(n.size()) +
                          " entries, shape has " + std::to_string(shape.factors()) +
                          " factors");
  }
  const int s = pt.level();
  const int rows = col_state_dim(shape, n) * s;
  const int cols = row_state_dim(shape, n) * s;
  Matrix zn = Matrix::Zero(rows, cols);
  for (int r = 0; r < shape.factors(); ++r) {
    const int roff = col_block_offset(shape, n, r);
    const int coff = row_block_offset(shape, n, r);
    for (int i = 0; i < shape.ell(r); ++i) {
      for (int j = 0; j < shape.m(r); ++j) {
        for (int t = 0; t < n[r]; ++t) {
          zn.block((roff + i * n[r] + t) * s, (coff + j * n[r] + t) * s, s, s) =
              pt.block(r, i, j);
        }
      }
    }
  }
  return zn;
}

}  // namespace polyball
