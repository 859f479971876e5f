#pragma once

// Shared generators and brute-force oracles.  The oracles re-derive
// quantities by explicit word enumeration so library fixpoints and pencil
// algebra are checked against an independent computation.

#include <string>
#include <vector>

#include "polyball/polyball.hpp"

namespace pbtest {

using namespace polyball;

struct GenOptions {
  int max_factors = 3;
  int max_dim = 2;   // bound on ell_r and m_r
  int max_n = 3;
  int max_io = 2;    // bound on alpha, beta
  bool square_io = false;
  bool invertible_d = false;  // clamp singular values of D into [0.5, 2]
  double a_norm_lo = 0.3;
  double a_norm_hi = 0.9;
  bool allow_zero_n = true;
};

inline BallShape random_shape(Rng& rng, const GenOptions& opt) {
  const int k = 1 + rng.below(opt.max_factors);
  std::vector<std::pair<int, int>> dims;
  for (int r = 0; r < k; ++r) {
    dims.emplace_back(1 + rng.below(opt.max_dim), 1 + rng.below(opt.max_dim));
  }
  return BallShape(std::move(dims));
}

inline Multiplicity random_multiplicity(Rng& rng, const BallShape& shape,
                                        const GenOptions& opt) {
  std::vector<int> n(shape.factors());
  bool any = false;
  for (int r = 0; r < shape.factors(); ++r) {
    n[r] = opt.allow_zero_n ? rng.below(opt.max_n + 1) : 1 + rng.below(opt.max_n);
    any = any || n[r] > 0;
  }
  if (!any) n[rng.below(shape.factors())] = 1 + rng.below(opt.max_n);
  return Multiplicity(std::move(n));
}

inline Matrix scaled_to_norm(Matrix m, double target) {
  const double norm = operator_norm(m);
  if (norm > 0) m *= target / norm;
  return m;
}

/// D with singular values clamped into [0.5, 2], so inversion is safe.
inline Matrix well_conditioned(const Matrix& g) {
  if (g.rows() == 0 || g.cols() == 0) return g;
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    sv(i) = std::clamp(sv(i), 0.5, 2.0);
  }
  return svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();
}

inline Colligation random_colligation(Rng& rng, const GenOptions& opt) {
  BallShape shape = random_shape(rng, opt);
  Multiplicity n = random_multiplicity(rng, shape, opt);
  const int rows = row_state_dim(shape, n);
  const int cols = col_state_dim(shape, n);
  const int alpha = 1 + rng.below(opt.max_io);
  const int beta = opt.square_io ? alpha : 1 + rng.below(opt.max_io);
  const double a_norm = opt.a_norm_lo + (opt.a_norm_hi - opt.a_norm_lo) * rng.uniform();
  Matrix a = scaled_to_norm(rng.gaussian_matrix(rows, cols), a_norm);
  Matrix b = rng.gaussian_matrix(rows, beta) * 0.7;
  Matrix c = rng.gaussian_matrix(alpha, cols) * 0.7;
  Matrix d = rng.gaussian_matrix(alpha, beta);
  if (opt.invertible_d) d = well_conditioned(d);
  return Colligation(std::move(shape), std::move(n), std::move(a), std::move(b),
                     std::move(c), std::move(d));
}

/// Embeds extra state levels per factor that are fed by nothing and feed
/// nothing except themselves, so the transfer function is unchanged and
/// the padding is neither reachable nor observable.
inline Colligation pad_colligation(const Colligation& coll, const std::vector<int>& pad,
                                   Rng& rng, double pad_norm = 0.6) {
  const BallShape& shape = coll.shape();
  const Multiplicity& n = coll.n();
  std::vector<int> big(shape.factors());
  for (int r = 0; r < shape.factors(); ++r) big[r] = n[r] + pad[r];
  Multiplicity n2(big);
  const int rows = row_state_dim(shape, n2);
  const int cols = col_state_dim(shape, n2);
  Matrix a2 = Matrix::Zero(rows, cols);
  Matrix b2 = Matrix::Zero(rows, coll.beta());
  Matrix c2 = Matrix::Zero(coll.alpha(), cols);
  // Pad-to-pad coupling drawn once, scaled to a fixed norm.
  const int prow = row_state_dim(shape, Multiplicity(pad));
  const int pcol = col_state_dim(shape, Multiplicity(pad));
  Matrix apad = scaled_to_norm(rng.gaussian_matrix(prow, pcol), pad_norm);
  Multiplicity np(pad);
  for (int r = 0; r < shape.factors(); ++r) {
    for (int j = 0; j < shape.m(r); ++j) {
      for (int rp = 0; rp < shape.factors(); ++rp) {
        for (int i = 0; i < shape.ell(rp); ++i) {
          a2.block(row_flat_index(shape, n2, r, j, 0),
                   col_flat_index(shape, n2, rp, i, 0), n[r], n[rp]) =
              coll.a_block(r, rp, j, i);
          a2.block(row_flat_index(shape, n2, r, j, n[r]),
                   col_flat_index(shape, n2, rp, i, n[rp]), pad[r], pad[rp]) =
              apad.block(row_flat_index(shape, np, r, j, 0),
                         col_flat_index(shape, np, rp, i, 0), pad[r], pad[rp]);
        }
      }
      b2.middleRows(row_flat_index(shape, n2, r, j, 0), n[r]) = coll.b_block(r, j);
    }
    for (int i = 0; i < shape.ell(r); ++i) {
      c2.middleCols(col_flat_index(shape, n2, r, i, 0), n[r]) = coll.c_block(r, i);
    }
  }
  return Colligation(shape, n2, std::move(a2), std::move(b2), std::move(c2), coll.d());
}

/// Truncated series sum over all words up to maxlen of
/// nc_coeff(w) (x) Z^w with Z^w the left-to-right block product.
inline void series_rec(const Colligation& coll, const MatrixPoint& pt, Word& word,
                       const Matrix& zw, int remaining, Matrix& total) {
  if (!word.empty()) total += kron(nc_coeff(coll, word), zw);
  if (remaining == 0) return;
  const BallShape& shape = coll.shape();
  for (int r = 0; r < shape.factors(); ++r) {
    for (int i = 0; i < shape.ell(r); ++i) {
      for (int j = 0; j < shape.m(r); ++j) {
        word.push_back({r, i, j});
        Matrix next = zw * pt.block(r, i, j);
        series_rec(coll, pt, word, next, remaining - 1, total);
        word.pop_back();
      }
    }
  }
}

inline Matrix series_sum(const Colligation& coll, const MatrixPoint& pt, int maxlen) {
  const int s = pt.level();
  Matrix total = kron(coll.d(), identity(s));
  Word word;
  Matrix zw = identity(s);
  series_rec(coll, pt, word, zw, maxlen, total);
  return total;
}

/// Reachable-space oracle: stack the columns of every word product (an
/// A-block chain applied to a B-block) whose chain starts at the home
/// factor, words up to the given length, and orthonormalize once at the
/// end.  Exponential in the depth; only for small instances.
inline void reach_rec(const Colligation& coll, int r, const Matrix& prefix, int remaining,
                      std::vector<Matrix>& bucket) {
  const BallShape& shape = coll.shape();
  for (int j = 0; j < shape.m(r); ++j) {
    bucket.push_back(prefix * coll.b_block(r, j));
  }
  if (remaining == 0) return;
  for (int j = 0; j < shape.m(r); ++j) {
    for (int r1 = 0; r1 < shape.factors(); ++r1) {
      for (int i1 = 0; i1 < shape.ell(r1); ++i1) {
        Matrix next = prefix * coll.a_block(r, r1, j, i1);
        reach_rec(coll, r1, next, remaining - 1, bucket);
      }
    }
  }
}

inline std::vector<Matrix> brute_reachable(const Colligation& coll) {
  const BallShape& shape = coll.shape();
  const Multiplicity& n = coll.n();
  const int depth = n.total();
  std::vector<Matrix> out;
  for (int r = 0; r < shape.factors(); ++r) {
    std::vector<Matrix> bucket;
    if (n[r] > 0) reach_rec(coll, r, identity(n[r]), depth, bucket);
    out.push_back(orthonormal_range(hcat(bucket, n[r])));
  }
  return out;
}

/// Observing-functional oracle: stack the rows of every word product
/// C-block chain, then the unobservable space is the kernel.
inline void observe_rec(const Colligation& coll, int r, const Matrix& row, int remaining,
                        std::vector<std::vector<Matrix>>& buckets) {
  buckets[r].push_back(row.adjoint());  // store as columns of functionals
  if (remaining == 0) return;
  const BallShape& shape = coll.shape();
  for (int j = 0; j < shape.m(r); ++j) {
    for (int r1 = 0; r1 < shape.factors(); ++r1) {
      for (int i1 = 0; i1 < shape.ell(r1); ++i1) {
        Matrix next = row * coll.a_block(r, r1, j, i1);
        observe_rec(coll, r1, next, remaining - 1, buckets);
      }
    }
  }
}

inline std::vector<Matrix> brute_cospan(const Colligation& coll) {
  const BallShape& shape = coll.shape();
  const Multiplicity& n = coll.n();
  std::vector<std::vector<Matrix>> buckets(shape.factors());
  const int depth = n.total();
  for (int r = 0; r < shape.factors(); ++r) {
    if (n[r] == 0) continue;
    for (int i = 0; i < shape.ell(r); ++i) {
      observe_rec(coll, r, coll.c_block(r, i), depth, buckets);
    }
  }
  std::vector<Matrix> out;
  for (int r = 0; r < shape.factors(); ++r) {
    out.push_back(orthonormal_range(hcat(buckets[r], n[r])));
  }
  return out;
}

/// Largest difference of word coefficients between two systems over all
/// words up to maxlen, via a shared-prefix walk carrying both partial
/// products.
inline void coeff_rec(const Colligation& ca, const Colligation& cb, int r, int j,
                      const Matrix& pa, const Matrix& pb, int remaining, double& worst) {
  Matrix closed_a = pa * ca.b_block(r, j);
  Matrix closed_b = pb * cb.b_block(r, j);
  const double diff = closed_a.rows() * closed_a.cols() > 0
                          ? (closed_a - closed_b).cwiseAbs().maxCoeff()
                          : 0.0;
  worst = std::max(worst, diff);
  if (remaining == 0) return;
  const BallShape& shape = ca.shape();
  for (int r1 = 0; r1 < shape.factors(); ++r1) {
    for (int i1 = 0; i1 < shape.ell(r1); ++i1) {
      for (int j1 = 0; j1 < shape.m(r1); ++j1) {
        coeff_rec(ca, cb, r1, j1, pa * ca.a_block(r, r1, j, i1),
                  pb * cb.a_block(r, r1, j, i1), remaining - 1, worst);
      }
    }
  }
}

inline double word_coeff_max_diff(const Colligation& ca, const Colligation& cb,
                                  int maxlen) {
  double worst = 0.0;
  if (ca.alpha() * ca.beta() > 0) {
    worst = (ca.d() - cb.d()).cwiseAbs().maxCoeff();
  }
  if (maxlen == 0) return worst;
  const BallShape& shape = ca.shape();
  for (int r = 0; r < shape.factors(); ++r) {
    for (int i = 0; i < shape.ell(r); ++i) {
      for (int j = 0; j < shape.m(r); ++j) {
        coeff_rec(ca, cb, r, j, ca.c_block(r, i), cb.c_block(r, i), maxlen - 1, worst);
      }
    }
  }
  return worst;
}

inline double max_abs(const Matrix& m) {
  return m.rows() * m.cols() > 0 ? m.cwiseAbs().maxCoeff() : 0.0;
}

/// A self-consistent extraction problem: `input` is a contractive scalar
/// realization of c / p(z / rho), built so that p is known exactly.
///
/// Construction: draw A supported only on entries whose column level
/// strictly exceeds their row level, so the A-pencil is nilpotent and
/// det(I - A Zn) is identically one.  With small B, C and D = 1/c, the
/// system X = {A,B,C,D} then has transfer p / c for the polynomial
/// p = det(I - (A - B D^-1 C) Zn), read off symbolically.  Its inverse
/// realizes c / p, and re-inflating A and C by rho gives a realization of
/// c / p(z / rho) on the unit ball.  Shrink B and C until the inflated
/// block is safely contractive.
struct SyntheticInstance {
  Colligation input;
  MultiPoly p;
  double rho = 0.0;
  double c = 0.0;
};

inline SyntheticInstance make_synthetic(Rng& rng, int max_factors = 2, int max_dim = 2,
                                        int max_total = 5) {
  const double c = 0.5;
  const double rho = 1.1;
  for (;;) {
    GenOptions opt;
    opt.max_factors = max_factors;
    opt.max_dim = max_dim;
    opt.max_n = 2;
    BallShape shape = random_shape(rng, opt);
    Multiplicity n = random_multiplicity(rng, shape, opt);
    const int rows = row_state_dim(shape, n);
    const int cols = col_state_dim(shape, n);
    if (rows < 1 || rows > max_total) continue;
    Matrix a = Matrix::Zero(rows, cols);
    for (int row = 0; row < rows; ++row) {
      const StateIndex ri = row_unflatten(shape, n, row);
      for (int col = 0; col < cols; ++col) {
        const StateIndex ci = col_unflatten(shape, n, col);
        if (ci.level > ri.level) a(row, col) = rng.cnormal();
      }
    }
    a = scaled_to_norm(std::move(a), 0.35);
    Matrix b = scaled_to_norm(rng.gaussian_matrix(rows, 1), 0.25);
    Matrix cc = scaled_to_norm(rng.gaussian_matrix(1, cols), 0.25);
    Matrix d = Matrix::Constant(1, 1, Complex(1.0 / c));
    for (int tries = 0; tries < 40; ++tries) {
      Colligation x(shape, n, a, b, cc, d);
      Colligation cg = invert(x);
      Colligation dilated(shape, n, cg.a() * rho, cg.b(), cg.c() * rho, cg.d());
      if (operator_norm(dilated.full_matrix()) < 0.95) {
        MultiPoly p = det_poly(cg.a(), shape, n);
        return {std::move(dilated), std::move(p), rho, c};
      }
      b *= 0.7;
      cc *= 0.7;
    }
  }
}

/// Builds a univariate colligation from scalars.
inline Colligation scalar_colligation(Complex a, Complex b, Complex c, Complex d) {
  Matrix ma(1, 1), mb(1, 1), mc(1, 1), md(1, 1);
  ma << a;
  mb << b;
  mc << c;
  md << d;
  return Colligation(BallShape::polydisk(1), Multiplicity({1}), ma, mb, mc, md);
}

}  // namespace pbtest
