#pragma once

#include <vector>

#include "polyball/core.hpp"
#include "polyball/linalg.hpp"

namespace polyball {

/// One subspace of C^{n_r} per factor, each stored as a matrix whose
/// columns are an orthonormal basis (possibly zero columns).
struct SubspaceFamily {
  std::vector<Matrix> basis;

  std::vector<int> dims() const {
    std::vector<int> d;
    d.reserve(basis.size());
    for (const auto& b : basis) d.push_back(static_cast<int>(b.cols()));
    return d;
  }
};

namespace detail {

/// Smallest family of subspaces containing the generators and closed under
/// the given maps, where maps[r][rp] lists matrices sending factor rp into
/// factor r.  Monotone sweep; stops when a full sweep adds nothing.
inline std::vector<Matrix> span_fixpoint(
    const std::vector<int>& dims, const std::vector<Matrix>& gens,
    const std::vector<std::vector<std::vector<Matrix>>>& maps) {
  const int k = static_cast<int>(dims.size());
  std::vector<Matrix> basis(k);
  for (int r = 0; r < k; ++r) basis[r] = orthonormal_range(gens[r]);
  bool grew = true;
  while (grew) {
    grew = false;
    for (int r = 0; r < k; ++r) {
      std::vector<Matrix> parts{basis[r]};
      for (int rp = 0; rp < k; ++rp) {
        for (const Matrix& m : maps[r][rp]) {
          if (basis[rp].cols() > 0) parts.push_back(m * basis[rp]);
        }
      }
      Matrix next = orthonormal_range(hcat(parts, dims[r]));
      if (next.cols() > basis[r].cols()) {
        basis[r] = std::move(next);
        grew = true;
      }
    }
  }
  return basis;
}

/// Closure maps for reachability: factor rp feeds factor r through every
/// A-block(r, rp, j, i).
inline std::vector<std::vector<std::vector<Matrix>>> forward_maps(const Colligation& coll) {
  const BallShape& shape = coll.shape();
  const int k = shape.factors();
  std::vector<std::vector<std::vector<Matrix>>> maps(k);
  for (int r = 0; r < k; ++r) {
    maps[r].resize(k);
    for (int rp = 0; rp < k; ++rp) {
      for (int j = 0; j < shape.m(r); ++j) {
        for (int i = 0; i < shape.ell(rp); ++i) {
          maps[r][rp].push_back(coll.a_block(r, rp, j, i));
        }
      }
    }
  }
  return maps;
}

/// Closure maps for the adjoint system: factor rp feeds factor r through
/// every A-block(rp, r, j, i) conjugate-transposed.
inline std::vector<std::vector<std::vector<Matrix>>> adjoint_maps(const Colligation& coll) {
  const BallShape& shape = coll.shape();
  const int k = shape.factors();
  std::vector<std::vector<std::vector<Matrix>>> maps(k);
  for (int r = 0; r < k; ++r) {
    maps[r].resize(k);
    for (int rp = 0; rp < k; ++rp) {
      for (int j = 0; j < shape.m(rp); ++j) {
        for (int i = 0; i < shape.ell(r); ++i) {
          maps[r][rp].push_back(coll.a_block(rp, r, j, i).adjoint());
        }
      }
    }
  }
  return maps;
}

inline std::vector<int> fiber_dims(const Colligation& coll) {
  std::vector<int> dims;
  for (int r = 0; r < coll.shape().factors(); ++r) dims.push_back(coll.n()[r]);
  return dims;
}

/// Reachable-span generators: all columns of the B-blocks of factor r.
inline std::vector<Matrix> input_generators(const Colligation& coll) {
  const BallShape& shape = coll.shape();
  std::vector<Matrix> gens;
  for (int r = 0; r < shape.factors(); ++r) {
    std::vector<Matrix> parts;
    for (int j = 0; j < shape.m(r); ++j) parts.push_back(coll.b_block(r, j));
    gens.push_back(hcat(parts, coll.n()[r]));
  }
  return gens;
}

/// Observing-functional generators: adjoints of the C-blocks of factor r.
inline std::vector<Matrix> output_generators(const Colligation& coll) {
  const BallShape& shape = coll.shape();
  std::vector<Matrix> gens;
  for (int r = 0; r < shape.factors(); ++r) {
    std::vector<Matrix> parts;
    for (int i = 0; i < shape.ell(r); ++i) parts.push_back(coll.c_block(r, i).adjoint());
    gens.push_back(hcat(parts, coll.n()[r]));
  }
  return gens;
}

/// Span of the observing functionals per factor; its orthogonal
/// complement is the unobservable family.
inline SubspaceFamily observable_cospan(const Colligation& coll) {
  return {span_fixpoint(fiber_dims(coll), output_generators(coll), adjoint_maps(coll))};
}

}  // namespace detail

/// Smallest per-factor family containing the ranges of the B-blocks and
/// closed under the A-block maps.
inline SubspaceFamily controllable_spaces(const Colligation& coll) {
  return {detail::span_fixpoint(detail::fiber_dims(coll), detail::input_generators(coll),
                                detail::forward_maps(coll))};
}

/// Largest per-factor family annihilated by every word coefficient read
/// from C: the orthogonal complement of the observing-functional span.
inline SubspaceFamily unobservable_spaces(const Colligation& coll) {
  SubspaceFamily cospan = detail::observable_cospan(coll);
  SubspaceFamily out;
  for (int r = 0; r < coll.shape().factors(); ++r) {
    out.basis.push_back(orthonormal_complement(cospan.basis[r], coll.n()[r]));
  }
  return out;
}

/// Minimality asks for more than full aggregate spans: every input slot
/// (r0, j0) must be spanned by its own B-block together with the one-step
/// images of the reachable family, and dually for every output slot.
inline bool is_minimal(const Colligation& coll) {
  const BallShape& shape = coll.shape();
  const Multiplicity& n = coll.n();
  SubspaceFamily reach = controllable_spaces(coll);
  SubspaceFamily cospan = detail::observable_cospan(coll);
  for (int r0 = 0; r0 < shape.factors(); ++r0) {
    if (n[r0] == 0) continue;
    for (int j0 = 0; j0 < shape.m(r0); ++j0) {
      std::vector<Matrix> parts{Matrix(coll.b_block(r0, j0))};
      for (int r1 = 0; r1 < shape.factors(); ++r1) {
        for (int i1 = 0; i1 < shape.ell(r1); ++i1) {
          if (reach.basis[r1].cols() > 0) {
            parts.push_back(coll.a_block(r0, r1, j0, i1) * reach.basis[r1]);
          }
        }
      }
      if (orthonormal_range(hcat(parts, n[r0])).cols() < n[r0]) return false;
    }
    for (int i0 = 0; i0 < shape.ell(r0); ++i0) {
      std::vector<Matrix> parts{Matrix(coll.c_block(r0, i0).adjoint())};
      for (int r1 = 0; r1 < shape.factors(); ++r1) {
        for (int j1 = 0; j1 < shape.m(r1); ++j1) {
          if (cospan.basis[r1].cols() > 0) {
            parts.push_back(coll.a_block(r1, r0, j1, i0).adjoint() * cospan.basis[r1]);
          }
        }
      }
      if (orthonormal_range(hcat(parts, n[r0])).cols() < n[r0]) return false;
    }
  }
  return true;
}

/// Compress every state fiber onto the span of the given orthonormal
/// bases; the new multiplicity is the basis dimensions.
inline Colligation compress(const Colligation& coll, const std::vector<Matrix>& basis) {
  const BallShape& shape = coll.shape();
  const int k = shape.factors();
  std::vector<int> nn(k);
  for (int r = 0; r < k; ++r) nn[r] = static_cast<int>(basis[r].cols());
  Multiplicity n2(nn);
  const int rows = row_state_dim(shape, n2);
  const int cols = col_state_dim(shape, n2);
  Matrix a2(rows, cols), b2(rows, coll.beta()), c2(coll.alpha(), cols);
  for (int r = 0; r < k; ++r) {
    for (int j = 0; j < shape.m(r); ++j) {
      const int ro = row_flat_index(shape, n2, r, j, 0);
      b2.middleRows(ro, nn[r]) = basis[r].adjoint() * coll.b_block(r, j);
      for (int rp = 0; rp < k; ++rp) {
        for (int i = 0; i < shape.ell(rp); ++i) {
          a2.block(ro, col_flat_index(shape, n2, rp, i, 0), nn[r], nn[rp]) =
              basis[r].adjoint() * coll.a_block(r, rp, j, i) * basis[rp];
        }
      }
    }
    for (int i = 0; i < shape.ell(r); ++i) {
      c2.middleCols(col_flat_index(shape, n2, r, i, 0), nn[r]) =
          coll.c_block(r, i) * basis[r];
    }
  }
  return Colligation(shape, n2, std::move(a2), std::move(b2), std::move(c2), coll.d());
}

/// Two-stage orthogonal reduction: restrict to the reachable family, then
/// compress onto the observing-functional span of the restriction.  The
/// result has the same transfer function and word coefficients; the block
/// matrix norm never increases.
inline Colligation minimize(const Colligation& coll) {
  Colligation stage1 = compress(coll, controllable_spaces(coll).basis);
  return compress(stage1, detail::observable_cospan(stage1).basis);
}

}  // namespace polyball
