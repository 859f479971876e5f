#pragma once

#include "polyball/core.hpp"
#include "polyball/linalg.hpp"

namespace polyball {

/// Conditioning data gathered while inverting.
struct InvertInfo {
  double sigma_min_d = 0.0;
  double cond_d = 0.0;
};

/// Realization of the pointwise inverse transfer function:
/// [A - B D^-1 C, B D^-1; -D^-1 C, D^-1].  Requires a square, numerically
/// nonsingular D block.  Applying it twice returns the original system
/// exactly up to floating point.
inline Colligation invert(const Colligation& coll, InvertInfo* info = nullptr) {
  if (coll.alpha() != coll.beta()) {
    throw DomainError("inversion needs a square D block");
  }
  const Matrix& d = coll.d();
  double smin = std::numeric_limits<double>::infinity();
  double smax = 0.0;
  if (d.rows() > 0) {
    Eigen::JacobiSVD<Matrix> svd(d);
    smax = svd.singularValues()(0);
    smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin < 1e-12 * (1.0 + smax)) {
      throw DomainError("D block is numerically singular");
    }
  }
  if (info) {
    info->sigma_min_d = smin;
    info->cond_d = d.rows() > 0 ? smax / smin : 1.0;
  }
  Matrix dinv = d.rows() > 0
                    ? Matrix(d.partialPivLu().solve(identity(coll.alpha())))
                    : d;
  Matrix binv = coll.b() * dinv;
  Matrix cinv = -(dinv * coll.c());
  Matrix ainv = coll.a() - binv * coll.c();
  return Colligation(coll.shape(), coll.n(), std::move(ainv), std::move(binv),
                     std::move(cinv), std::move(dinv));
}

}  // namespace polyball
