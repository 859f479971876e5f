#pragma once

#include "polyball/core.hpp"
#include "polyball/linalg.hpp"

namespace polyball {

inline void check_same_shape(const Colligation& coll, const MatrixPoint& pt) {
  if (coll.shape() != pt.shape()) {
    throw ValidationError("point shape does not match the system shape");
  }
}

/// Structured right pencil action of A on a point.  Square on the row
/// layout tensored with the point level: the (r j, r' j') block of size
/// (n_r s) x (n_{r'} s) is sum_k A-block(r, r', j, k) (x) Z^(r')-block(k, j').
/// At level one this equals A * assemble_zn(Z, n).
inline Matrix a_odot_z(const Colligation& coll, const MatrixPoint& pt) {
  check_same_shape(coll, pt);
  const BallShape& shape = coll.shape();
  const Multiplicity& n = coll.n();
  const int s = pt.level();
  const int dim = row_state_dim(shape, n) * s;
  Matrix out = Matrix::Zero(dim, dim);
  for (int r = 0; r < shape.factors(); ++r) {
    for (int rp = 0; rp < shape.factors(); ++rp) {
      for (int j = 0; j < shape.m(r); ++j) {
        for (int jp = 0; jp < shape.m(rp); ++jp) {
          Matrix acc = Matrix::Zero(n[r] * s, n[rp] * s);
          for (int k = 0; k < shape.ell(rp); ++k) {
            acc += kron(coll.a_block(r, rp, j, k), pt.block(rp, k, jp));
          }
          out.block(row_flat_index(shape, n, r, j, 0) * s,
                    row_flat_index(shape, n, rp, jp, 0) * s, n[r] * s, n[rp] * s) = acc;
        }
      }
    }
  }
  return out;
}

/// Structured left pencil action of a point on A.  Square on the column
/// layout tensored with the point level: the (r i, r' i') block of size
/// (n_r s) x (n_{r'} s) is sum_k A-block(r, r', k, i') (x) Z^(r)-block(i, k).
/// At level one this equals assemble_zn(Z, n) * A.
inline Matrix x_odot_op_a(const Colligation& coll, const MatrixPoint& pt) {
  check_same_shape(coll, pt);
  const BallShape& shape = coll.shape();
  const Multiplicity& n = coll.n();
  const int s = pt.level();
  const int dim = col_state_dim(shape, n) * s;
  Matrix out = Matrix::Zero(dim, dim);
  for (int r = 0; r < shape.factors(); ++r) {
    for (int rp = 0; rp < shape.factors(); ++rp) {
      for (int i = 0; i < shape.ell(r); ++i) {
        for (int ip = 0; ip < shape.ell(rp); ++ip) {
          Matrix acc = Matrix::Zero(n[r] * s, n[rp] * s);
          for (int k = 0; k < shape.m(r); ++k) {
            acc += kron(coll.a_block(r, rp, k, ip), pt.block(r, i, k));
          }
          out.block(col_flat_index(shape, n, r, i, 0) * s,
                    col_flat_index(shape, n, rp, ip, 0) * s, n[r] * s, n[rp] * s) = acc;
        }
      }
    }
  }
  return out;
}

/// Output pencil: (alpha s) rows, row layout times level columns.  Block
/// (r', j') is sum_k C-block(r', k) (x) Z^(r')-block(k, j').
inline Matrix c_odot_z(const Colligation& coll, const MatrixPoint& pt) {
  check_same_shape(coll, pt);
  const BallShape& shape = coll.shape();
  const Multiplicity& n = coll.n();
  const int s = pt.level();
  Matrix out = Matrix::Zero(coll.alpha() * s, row_state_dim(shape, n) * s);
  for (int rp = 0; rp < shape.factors(); ++rp) {
    for (int jp = 0; jp < shape.m(rp); ++jp) {
      Matrix acc = Matrix::Zero(coll.alpha() * s, n[rp] * s);
      for (int k = 0; k < shape.ell(rp); ++k) {
        acc += kron(coll.c_block(rp, k), pt.block(rp, k, jp));
      }
      out.block(0, row_flat_index(shape, n, rp, jp, 0) * s, coll.alpha() * s,
                n[rp] * s) = acc;
    }
  }
  return out;
}

/// Determinant of the resolvent pencil I - (A odot Z).
inline Complex det_pencil(const Colligation& coll, const MatrixPoint& pt) {
  Matrix az = a_odot_z(coll, pt);
  const int dim = static_cast<int>(az.rows());
  return (Matrix::Identity(dim, dim) - az).determinant();
}

/// Transfer function value D (x) I_s + (C odot Z)(I - A odot Z)^-1 (B (x) I_s),
/// an (alpha s) x (beta s) matrix.  Throws DomainError when the pencil is
/// numerically singular at the point.
inline Matrix eval_transfer(const Colligation& coll, const MatrixPoint& pt) {
  Matrix az = a_odot_z(coll, pt);
  const int dim = static_cast<int>(az.rows());
  Matrix pencil = Matrix::Identity(dim, dim) - az;
  const double cutoff = 1e-12 * (1.0 + operator_norm(az));
  if (smallest_singular_value(pencil) < cutoff) {
    throw DomainError("resolvent pencil is singular at the given point");
  }
  const int s = pt.level();
  Matrix value = kron(coll.d(), identity(s));
  if (dim > 0) {
    Matrix rhs = kron(coll.b(), identity(s));
    value += c_odot_z(coll, pt) * pencil.partialPivLu().solve(rhs);
  }
  return value;
}

/// Taylor coefficient of the transfer function at a word in the formal
/// variables: D for the empty word, otherwise
/// C-block(r0, i0) * A-block(r0, r1, j0, i1) * ... * B-block(rN, jN).
inline Matrix nc_coeff(const Colligation& coll, const Word& word) {
  const BallShape& shape = coll.shape();
  for (const Letter& g : word) check_letter(shape, g);
  if (word.empty()) return coll.d();
  Matrix acc = coll.c_block(word[0].r, word[0].i);
  for (std::size_t p = 0; p + 1 < word.size(); ++p) {
    acc = acc * coll.a_block(word[p].r, word[p + 1].r, word[p].j, word[p + 1].i);
  }
  acc = acc * coll.b_block(word.back().r, word.back().j);
  return acc;
}

}  // namespace polyball
