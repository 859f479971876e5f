#pragma once

#include "polyball/core.hpp"
#include "polyball/detrep.hpp"
#include "polyball/inversion.hpp"
#include "polyball/structure.hpp"

namespace polyball {

/// Result of the representation-extraction pipeline.  K is the state
/// block of the minimized rescaled system; the report compares
/// det(I - K Zn) against the target polynomial.
struct PipelineResult {
  Colligation minimized;
  Matrix k;
  Multiplicity n_min;
  double det_one_error = 0.0;
  bool det_one_symbolic = false;
  VerifyReport verify;

  bool ok() const { return verify.pass; }
};

/// Extracts a strictly contractive determinantal representation of p from
/// a contractive scalar realization coll_cg of c / p(z / rho), i.e. of
/// c * g(rho * z) with g = 1 / p, valid on the rho-inflated ball:
///   1. rescale A and C by 1/rho, turning coll_cg into a realization of
///      c / p on the unit ball with a strictly contractive state block;
///   2. minimize;
///   3. invert (minimality is preserved), giving a realization of p / c;
///   4. require det(I - A_inv Zn) == 1 for the inverted state block --
///      symbolically when the expansion is feasible, else at det_samples
///      random points; failure means the input was not such a realization
///      or p is not as claimed;
///   5. return K = state block of step 2 with its multiplicity, plus a
///      coefficientwise (or sampled) verification that det(I - K Zn) = p
///      and that sigma_max(K) < 1.
/// The constant c is part of the input's normalization (the D block of
/// coll_cg equals c when the premise holds); no step consumes it directly,
/// and a mismatch surfaces in the step-5 report.
inline PipelineResult pipeline_extract(const MultiPoly& p, const Colligation& coll_cg,
                                       double rho, double c, int det_samples,
                                       std::uint64_t seed) {
  if (!(rho > 1.0)) throw ValidationError("rho must exceed one");
  if (!(c > 0.0)) throw ValidationError("c must be positive");
  if (coll_cg.alpha() != 1 || coll_cg.beta() != 1) {
    throw ValidationError("scalar-valued realization required");
  }
  if (p.shape() != coll_cg.shape()) {
    throw ValidationError("polynomial and realization shapes differ");
  }
  if (std::abs(p.constant_term() - Complex(1.0)) > 1e-10) {
    throw DomainError("constant term of p must be one");
  }
  const BallShape& shape = coll_cg.shape();
  Colligation scaled(shape, coll_cg.n(), coll_cg.a() / rho, coll_cg.b(),
                     coll_cg.c() / rho, coll_cg.d());
  Colligation mini = minimize(scaled);
  Colligation inv = invert(mini);  // throws on D near zero

  double det_err = 0.0;
  bool symbolic = det_poly_feasible(shape, mini.n());
  if (symbolic) {
    MultiPoly dq = det_poly(inv.a(), shape, mini.n());
    det_err = dq.max_coeff_diff(MultiPoly::constant(shape, Complex(1.0)));
  } else {
    if (det_samples < 1) throw ValidationError("sample count must be positive");
    detail::PencilEntries pe = detail::pencil_entries(inv.a(), shape, mini.n());
    Rng rng(seed);
    for (int q = 0; q < det_samples; ++q) {
      std::vector<Complex> vals =
          scalar_coordinates(random_point(shape, 1, 1.0, rng));
      det_err = std::max(det_err,
                         std::abs(detail::pencil_det_at(pe, vals) - Complex(1.0)));
    }
  }
  if (det_err > 1e-8) {
    throw DomainError(
        "determinant of the inverted pencil is not constant one "
        "(hypothesis violation); deviation " +
        std::to_string(det_err));
  }
  VerifyReport rep = verify_detrep(p, mini.a(), mini.n(), det_samples, seed + 1);
  Matrix k = mini.a();
  Multiplicity n_min = mini.n();
  return {std::move(mini), std::move(k), std::move(n_min), det_err, symbolic, rep};
}

}  // namespace polyball
