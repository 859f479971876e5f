#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <unordered_map>

#include "polyball/core.hpp"
#include "polyball/linalg.hpp"
#include "polyball/multipoly.hpp"
#include "polyball/random.hpp"

namespace polyball {

/// Hard ceiling for symbolic determinant expansion.
inline constexpr int kDetPolyMaxSize = 12;
/// Cofactor expansion is used up to this size, interpolation beyond.
inline constexpr int kDetPolyCofactorSize = 8;
/// Ceiling on the evaluation grid of the interpolation path.
inline constexpr long long kDetPolyMaxGrid = 1 << 20;

namespace detail {

/// Linear forms making up I - K Zn at level one: entry (row, col) of the
/// pencil is delta - sum of coef * z_var over the listed pairs.
struct PencilEntries {
  int size = 0;
  std::vector<std::vector<std::pair<int, Complex>>> lin;  // size*size, row-major
};

inline PencilEntries pencil_entries(const Matrix& k, const BallShape& shape,
                                    const Multiplicity& n) {
  const int rows = row_state_dim(shape, n);
  const int cols = col_state_dim(shape, n);
  if (k.rows() != rows || k.cols() != cols) {
    std::ostringstream msg;
    msg << "K is " << k.rows() << "x" << k.cols() << ", expected " << rows << "x"
        << cols;
    throw ValidationError(msg.str());
  }
  PencilEntries pe;
  pe.size = rows;
  pe.lin.resize(static_cast<std::size_t>(rows) * rows);
  for (int row = 0; row < rows; ++row) {
    for (int rp = 0; rp < shape.factors(); ++rp) {
      for (int jp = 0; jp < shape.m(rp); ++jp) {
        for (int tp = 0; tp < n[rp]; ++tp) {
          const int col = row_flat_index(shape, n, rp, jp, tp);
          auto& forms = pe.lin[static_cast<std::size_t>(row) * rows + col];
          for (int i = 0; i < shape.ell(rp); ++i) {
            const Complex coef = -k(row, col_flat_index(shape, n, rp, i, tp));
            if (coef != Complex(0.0)) {
              forms.emplace_back(shape.var_index(rp, i, jp), coef);
            }
          }
        }
      }
    }
  }
  return pe;
}

inline MultiPoly entry_poly(const BallShape& shape, bool diagonal,
                            const std::vector<std::pair<int, Complex>>& forms) {
  MultiPoly p(shape);
  Monomial mono(shape.var_count(), 0);
  if (diagonal) p.add_term(mono, Complex(1.0));
  for (const auto& [var, coef] : forms) {
    mono[var] = 1;
    p.add_term(mono, coef);
    mono[var] = 0;
  }
  return p;
}

/// Cofactor expansion over the first remaining row, memoized by the set of
/// remaining columns (which determines the row).
class CofactorExpander {
 public:
  CofactorExpander(const BallShape& shape, const PencilEntries& pe) : shape_(shape) {
    const int nn = pe.size;
    entries_.reserve(static_cast<std::size_t>(nn) * nn);
    for (int row = 0; row < nn; ++row) {
      for (int col = 0; col < nn; ++col) {
        entries_.push_back(entry_poly(
            shape, row == col, pe.lin[static_cast<std::size_t>(row) * nn + col]));
      }
    }
    size_ = nn;
  }

  MultiPoly expand() { return minor_det((1u << size_) - 1u); }

 private:
  MultiPoly minor_det(std::uint32_t mask) {
    if (mask == 0) return MultiPoly::constant(shape_, Complex(1.0));
    auto it = memo_.find(mask);
    if (it != memo_.end()) return it->second;
    const int row = size_ - static_cast<int>(std::popcount(mask));
    MultiPoly acc(shape_);
    double sign = 1.0;
    for (int col = 0; col < size_; ++col) {
      if (!(mask & (1u << col))) continue;
      const MultiPoly& e = entries_[static_cast<std::size_t>(row) * size_ + col];
      if (!e.is_zero()) {
        MultiPoly sub = minor_det(mask & ~(1u << col));
        acc += (e * sub) * Complex(sign);
      }
      sign = -sign;
    }
    memo_.emplace(mask, acc);
    return acc;
  }

  BallShape shape_;
  int size_ = 0;
  std::vector<MultiPoly> entries_;
  std::unordered_map<std::uint32_t, MultiPoly> memo_;
};

inline long long interpolation_grid_size(const BallShape& shape, const Multiplicity& n) {
  long long total = 1;
  for (int r = 0; r < shape.factors(); ++r) {
    for (int q = 0; q < shape.ell(r) * shape.m(r); ++q) {
      total *= n[r] + 1;
      if (total > kDetPolyMaxGrid) return total;
    }
  }
  return total;
}

/// Numeric determinant of I - K Zn at one scalar point given precomputed
/// linear forms.
inline Complex pencil_det_at(const PencilEntries& pe, const std::vector<Complex>& vals) {
  const int nn = pe.size;
  Matrix m = Matrix::Identity(nn, nn);
  for (int row = 0; row < nn; ++row) {
    for (int col = 0; col < nn; ++col) {
      for (const auto& [var, coef] : pe.lin[static_cast<std::size_t>(row) * nn + col]) {
        m(row, col) += coef * vals[var];
      }
    }
  }
  return m.determinant();
}

/// Evaluation-interpolation on a tensor grid of roots of unity, one axis
/// per variable with n_r + 1 nodes.
inline MultiPoly interpolate_det(const BallShape& shape, const Multiplicity& n,
                                 const PencilEntries& pe) {
  const int d = shape.var_count();
  std::vector<int> extent(d);
  {
    int v = 0;
    for (int r = 0; r < shape.factors(); ++r) {
      for (int q = 0; q < shape.ell(r) * shape.m(r); ++q) extent[v++] = n[r] + 1;
    }
  }
  long long total = 1;
  for (int v = 0; v < d; ++v) total *= extent[v];
  std::vector<std::vector<Complex>> nodes(d);
  for (int v = 0; v < d; ++v) {
    nodes[v].resize(extent[v]);
    for (int t = 0; t < extent[v]; ++t) {
      const double ang = 2.0 * std::numbers::pi * t / extent[v];
      nodes[v][t] = Complex(std::cos(ang), std::sin(ang));
    }
  }
  std::vector<Complex> tensor(static_cast<std::size_t>(total));
  std::vector<int> idx(d, 0);
  std::vector<Complex> vals(d);
  for (long long flat = 0; flat < total; ++flat) {
    for (int v = 0; v < d; ++v) vals[v] = nodes[v][idx[v]];
    tensor[static_cast<std::size_t>(flat)] = pencil_det_at(pe, vals);
    for (int v = d - 1; v >= 0; --v) {
      if (++idx[v] < extent[v]) break;
      idx[v] = 0;
    }
  }
  // Axis-by-axis inverse discrete Fourier transform, last axis fastest.
  long long stride = 1;
  for (int v = d - 1; v >= 0; --v) {
    const int ext = extent[v];
    if (ext > 1) {
      std::vector<Complex> line(ext);
      const long long block = stride * ext;
      for (long long base = 0; base < total; base += block) {
        for (long long off = 0; off < stride; ++off) {
          for (int t = 0; t < ext; ++t) {
            line[t] = tensor[static_cast<std::size_t>(base + off + t * stride)];
          }
          for (int cdeg = 0; cdeg < ext; ++cdeg) {
            Complex acc(0.0);
            for (int t = 0; t < ext; ++t) {
              const double ang = -2.0 * std::numbers::pi * cdeg * t / ext;
              acc += line[t] * Complex(std::cos(ang), std::sin(ang));
            }
            tensor[static_cast<std::size_t>(base + off + cdeg * stride)] =
                acc / static_cast<double>(ext);
          }
        }
      }
    }
    stride *= ext;
  }
  MultiPoly out(shape);
  std::fill(idx.begin(), idx.end(), 0);
  Monomial mono(d);
  for (long long flat = 0; flat < total; ++flat) {
    for (int v = 0; v < d; ++v) mono[v] = idx[v];
    out.add_term(mono, tensor[static_cast<std::size_t>(flat)]);
    for (int v = d - 1; v >= 0; --v) {
      if (++idx[v] < extent[v]) break;
      idx[v] = 0;
    }
  }
  return out;
}

}  // namespace detail

/// Whether det_poly accepts this size: cofactor up to 8 rows, interpolation
/// up to 12 when the evaluation grid stays within bounds.
inline bool det_poly_feasible(const BallShape& shape, const Multiplicity& n) {
  const int size = row_state_dim(shape, n);
  if (size <= kDetPolyCofactorSize) return true;
  if (size > kDetPolyMaxSize) return false;
  return detail::interpolation_grid_size(shape, n) <= kDetPolyMaxGrid;
}

/// Exact expansion of det(I - K Zn) in the commuting scalar variables.
/// The per-variable degree of z^(r)_{ij} is at most n_r and the constant
/// term is one.
inline MultiPoly det_poly(const Matrix& k, const BallShape& shape, const Multiplicity& n) {
  if (n.size() != shape.factors()) {
    throw ValidationError("multiplicity length does not match the shape");
  }
  detail::PencilEntries pe = detail::pencil_entries(k, shape, n);
  if (pe.size <= kDetPolyCofactorSize) {
    return detail::CofactorExpander(shape, pe).expand();
  }
  if (pe.size > kDetPolyMaxSize) {
    throw ValidationError("matrix of size " + std::to_string(pe.size) +
                          " exceeds the symbolic expansion guard of " +
                          std::to_string(kDetPolyMaxSize));
  }
  if (detail::interpolation_grid_size(shape, n) > kDetPolyMaxGrid) {
    throw ValidationError("interpolation grid exceeds the size guard");
  }
  return detail::interpolate_det(shape, n, pe);
}

/// Outcome of comparing a polynomial against det(I - K Zn).
struct VerifyReport {
  bool pass = false;
  double max_error = 0.0;
  double norm_k = 0.0;
  bool symbolic = false;
  int samples_used = 0;
  double tolerance = 1e-8;
};

/// Symbolic coefficientwise comparison when the expansion is feasible,
/// otherwise sampled comparison at random closed-ball scalar points.
/// pass requires max_error <= 1e-8 and sigma_max(K) strictly below one.
inline VerifyReport verify_detrep(const MultiPoly& p, const Matrix& k,
                                  const Multiplicity& n, int samples,
                                  std::uint64_t seed) {
  const BallShape& shape = p.shape();
  if (n.size() != shape.factors()) {
    throw ValidationError("multiplicity length does not match the shape");
  }
  detail::PencilEntries pe = detail::pencil_entries(k, shape, n);
  VerifyReport rep;
  rep.norm_k = operator_norm(k);
  if (det_poly_feasible(shape, n)) {
    rep.symbolic = true;
    rep.max_error = p.max_coeff_diff(det_poly(k, shape, n));
  } else {
    if (samples < 1) throw ValidationError("sample count must be positive");
    Rng rng(seed);
    PolyEvaluator ev(p);
    rep.samples_used = samples;
    for (int q = 0; q < samples; ++q) {
      MatrixPoint pt = random_point(shape, 1, 1.0, rng);
      std::vector<Complex> vals = scalar_coordinates(pt);
      rep.max_error =
          std::max(rep.max_error, std::abs(ev(vals) - detail::pencil_det_at(pe, vals)));
    }
  }
  rep.pass = rep.max_error <= rep.tolerance && rep.norm_k < 1.0;
  return rep;
}

/// Diagonal representation of a univariate polynomial with unit constant
/// term: K = diag(1/z_1, ..., 1/z_n) over the roots z_i, n = (deg p).
struct UnivariateRep {
  Matrix k;
  Multiplicity n;
};

inline UnivariateRep univariate_detrep(const MultiPoly& p) {
  if (p.shape() != BallShape::polydisk(1)) {
    throw ValidationError("univariate polynomial over one scalar disk required");
  }
  if (p.is_zero()) throw DomainError("zero polynomial has no such representation");
  if (std::abs(p.constant_term() - Complex(1.0)) > 1e-10) {
    throw DomainError("constant term must be one");
  }
  const int deg = p.degree_in(0);
  if (deg == 0) return {Matrix(0, 0), Multiplicity({0})};
  // Monic reversal w^deg p(1/w): coefficient of w^e is the z^(deg-e)
  // coefficient of p; its roots are the reciprocals 1/z_i directly.
  std::vector<Complex> low(deg);  // coefficients of w^0 .. w^{deg-1}
  for (int e = 0; e < deg; ++e) {
    Monomial mono{deg - e};
    low[e] = p.coeff(mono);
  }
  Matrix companion = Matrix::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = Complex(1.0);
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -low[i];
  Eigen::ComplexEigenSolver<Matrix> es(companion);
  if (es.info() != Eigen::Success) {
    throw DomainError("eigenvalue iteration failed on the companion matrix");
  }
  std::vector<Complex> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(i);
  auto by_re_im = [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  };
  std::sort(roots.begin(), roots.end(), by_re_im);
  // Collapse near-identical eigenvalues onto their centroid so repeated
  // roots come out exactly equal.
  for (std::size_t lo = 0; lo < roots.size();) {
    std::size_t hi = lo + 1;
    while (hi < roots.size() && std::abs(roots[hi] - roots[hi - 1]) <= 1e-7) ++hi;
    if (hi - lo > 1) {
      Complex centroid(0.0);
      for (std::size_t q = lo; q < hi; ++q) centroid += roots[q];
      centroid /= static_cast<double>(hi - lo);
      for (std::size_t q = lo; q < hi; ++q) roots[q] = centroid;
    }
    lo = hi;
  }
  std::sort(roots.begin(), roots.end(), by_re_im);
  Matrix k = Matrix::Zero(deg, deg);
  for (int i = 0; i < deg; ++i) k(i, i) = roots[i];
  return {std::move(k), Multiplicity({deg})};
}

/// Probabilistic zero search over the closed product ball.
struct StabilityReport {
  double min_abs = 0.0;
  MatrixPoint argmin;
  int samples = 0;
};

/// Evaluates |p| at closed-ball scalar samples; with probability one half
/// a draw is pushed to the distinguished boundary by rescaling every
/// factor to exact unit norm.  A minimum near zero is evidence against
/// strong stability; the converse is not certified.
inline StabilityReport stability_sample(const MultiPoly& p, int samples,
                                        std::uint64_t seed) {
  if (samples < 1) throw ValidationError("sample count must be positive");
  const BallShape& shape = p.shape();
  Rng rng(seed);
  PolyEvaluator ev(p);
  StabilityReport rep{std::numeric_limits<double>::infinity(),
                      MatrixPoint::zero(shape, 1), samples};
  for (int q = 0; q < samples; ++q) {
    MatrixPoint pt = random_point(shape, 1, 1.0, rng);
    if (rng.uniform() < 0.5) {
      std::vector<Matrix> z;
      z.reserve(shape.factors());
      for (int r = 0; r < shape.factors(); ++r) {
        Matrix f = pt.factor(r);
        const double norm = operator_norm(f);
        if (norm > 0) f /= norm;
        z.push_back(std::move(f));
      }
      pt = MatrixPoint(shape, 1, std::move(z));
    }
    const double v = std::abs(ev(scalar_coordinates(pt)));
    if (v < rep.min_abs) {
      rep.min_abs = v;
      rep.argmin = pt;
    }
  }
  return rep;
}

/// Coefficient reversal z^n conj(p)(1/z) over a polydisk.
struct ReflectionReport {
  MultiPoly reflected;
  double max_unimodularity_error = 0.0;
  int samples = 0;
};

/// Requires a polydisk shape and n at least the per-variable degrees.
/// The reflected polynomial has the conjugated coefficients in reversed
/// position; on the unit torus |q| = |p|, which is sampled into the report.
inline ReflectionReport agler_reflection(const MultiPoly& p, const Multiplicity& n,
                                         int samples, std::uint64_t seed) {
  const BallShape& shape = p.shape();
  for (int r = 0; r < shape.factors(); ++r) {
    if (shape.ell(r) != 1 || shape.m(r) != 1) {
      throw ValidationError("reflection needs scalar disk factors");
    }
  }
  if (n.size() != shape.factors()) {
    throw ValidationError("multiplicity length does not match the shape");
  }
  const int d = shape.var_count();
  std::vector<int> degs = p.var_degrees();
  for (int v = 0; v < d; ++v) {
    if (n[v] < degs[v]) {
      throw ValidationError("degree in variable " + std::to_string(v) +
                            " exceeds the reflection multidegree");
    }
  }
  MultiPoly q(shape);
  Monomial rev(d);
  for (const auto& [mono, c] : p.terms()) {
    for (int v = 0; v < d; ++v) rev[v] = n[v] - mono[v];
    q.add_term(rev, std::conj(c));
  }
  ReflectionReport rep{q, 0.0, samples};
  if (samples > 0) {
    Rng rng(seed);
    PolyEvaluator evp(p), evq(q);
    std::vector<Complex> vals(d);
    for (int t = 0; t < samples; ++t) {
      for (int v = 0; v < d; ++v) {
        const double ang = 2.0 * std::numbers::pi * rng.uniform();
        vals[v] = Complex(std::cos(ang), std::sin(ang));
      }
      rep.max_unimodularity_error = std::max(
          rep.max_unimodularity_error, std::abs(std::abs(evq(vals)) - std::abs(evp(vals))));
    }
  }
  return rep;
}

}  // namespace polyball
