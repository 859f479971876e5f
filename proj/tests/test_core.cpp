#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace polyball;
using pbtest::GenOptions;
using Catch::Approx;

TEST_CASE("two scalar factors assemble to a diagonal", "[core]") {
  BallShape shape = BallShape::polydisk(2);
  MatrixPoint pt = MatrixPoint::scalar(shape, {Complex(0.3, 0.1), Complex(-0.2, 0.4)});
  Matrix zn = assemble_zn(pt, Multiplicity({1, 1}));
  REQUIRE(zn.rows() == 2);
  REQUIRE(zn.cols() == 2);
  CHECK(zn(0, 0) == Complex(0.3, 0.1));
  CHECK(zn(1, 1) == Complex(-0.2, 0.4));
  CHECK(zn(0, 1) == Complex(0.0));
  CHECK(zn(1, 0) == Complex(0.0));
}

TEST_CASE("multiplicity two tensors a scalar with the identity", "[core]") {
  BallShape shape = BallShape::polydisk(1);
  MatrixPoint pt = MatrixPoint::scalar(shape, {Complex(0.5, -0.25)});
  Matrix zn = assemble_zn(pt, Multiplicity({2}));
  REQUIRE(zn.rows() == 2);
  Matrix expect = Complex(0.5, -0.25) * Matrix::Identity(2, 2);
  CHECK(pbtest::max_abs(zn - expect) == 0.0);
}

TEST_CASE("full matrix factor with multiplicity one is returned as is", "[core]") {
  BallShape shape({{2, 2}});
  Rng rng(7);
  Matrix z = rng.gaussian_matrix(2, 2);
  MatrixPoint pt(shape, 1, {z});
  Matrix zn = assemble_zn(pt, Multiplicity({1}));
  CHECK(pbtest::max_abs(zn - z) == 0.0);
}

TEST_CASE("assembly at unit multiplicities is the direct sum", "[core]") {
  Rng rng(11);
  GenOptions opt;
  BallShape shape = pbtest::random_shape(rng, opt);
  MatrixPoint pt = random_point(shape, 1, 0.8, rng);
  Matrix zn = assemble_zn(pt, Multiplicity(std::vector<int>(shape.factors(), 1)));
  int ro = 0, co = 0;
  for (int r = 0; r < shape.factors(); ++r) {
    CHECK(pbtest::max_abs(zn.block(ro, co, shape.ell(r), shape.m(r)) - pt.factor(r)) ==
          0.0);
    ro += shape.ell(r);
    co += shape.m(r);
  }
}

TEST_CASE("flat index bijections round-trip", "[core]") {
  Rng rng(23);
  GenOptions opt;
  opt.max_n = 3;
  for (int trial = 0; trial < 20; ++trial) {
    BallShape shape = pbtest::random_shape(rng, opt);
    Multiplicity n = pbtest::random_multiplicity(rng, shape, opt);
    for (int flat = 0; flat < row_state_dim(shape, n); ++flat) {
      StateIndex ix = row_unflatten(shape, n, flat);
      CHECK(row_flat_index(shape, n, ix.r, ix.block, ix.level) == flat);
    }
    for (int flat = 0; flat < col_state_dim(shape, n); ++flat) {
      StateIndex ix = col_unflatten(shape, n, flat);
      CHECK(col_flat_index(shape, n, ix.r, ix.block, ix.level) == flat);
    }
  }
}

TEST_CASE("colligation accepts consistent minimal sizes", "[core]") {
  Matrix one = Matrix::Identity(1, 1);
  Colligation coll(BallShape::polydisk(1), Multiplicity({1}), one, one, one, one);
  REQUIRE_NOTHROW(validate(coll));
  CHECK(coll.alpha() == 1);
  CHECK(coll.beta() == 1);
}

TEST_CASE("colligation rejects a misshapen state block", "[core]") {
  Matrix one = Matrix::Identity(1, 1);
  Matrix bad = Matrix::Zero(2, 1);
  REQUIRE_THROWS_AS(
      Colligation(BallShape::polydisk(1), Multiplicity({1}), bad, one, one, one),
      ValidationError);
  REQUIRE_THROWS_WITH(
      Colligation(BallShape::polydisk(1), Multiplicity({1}), bad, one, one, one),
      Catch::Matchers::ContainsSubstring("A"));
}

TEST_CASE("void multiplicity keeps empty blocks valid", "[core]") {
  Matrix d = Matrix::Identity(1, 1);
  Colligation coll(BallShape::polydisk(1), Multiplicity({0}), Matrix(0, 0), Matrix(0, 1),
                   Matrix(1, 0), d);
  REQUIRE_NOTHROW(validate(coll));
  CHECK(coll.row_dim() == 0);
  MatrixPoint pt = MatrixPoint::scalar(BallShape::polydisk(1), {Complex(0.4)});
  Matrix zn = assemble_zn(pt, coll.n());
  CHECK(zn.rows() == 0);
  CHECK(zn.cols() == 0);
}

TEST_CASE("random points respect the radius and the seed", "[core]") {
  GenOptions opt;
  Rng shape_rng(31);
  BallShape shape = pbtest::random_shape(shape_rng, opt);
  MatrixPoint zero = random_point(shape, 2, 0.0, std::uint64_t{5});
  for (int r = 0; r < shape.factors(); ++r) {
    CHECK(pbtest::max_abs(zero.factor(r)) == 0.0);
  }
  MatrixPoint a = random_point(shape, 2, 1.0, std::uint64_t{99});
  MatrixPoint b = random_point(shape, 2, 1.0, std::uint64_t{99});
  for (int r = 0; r < shape.factors(); ++r) {
    CHECK(operator_norm(a.factor(r)) <= 1.0 + 1e-12);
    CHECK(pbtest::max_abs(a.factor(r) - b.factor(r)) == 0.0);
  }
  MatrixPoint c = random_point(shape, 2, 1.0, std::uint64_t{100});
  double diff = 0.0;
  for (int r = 0; r < shape.factors(); ++r) {
    diff = std::max(diff, pbtest::max_abs(a.factor(r) - c.factor(r)));
  }
  CHECK(diff > 0.0);
}

TEST_CASE("block accessors slice the stored matrices consistently", "[core]") {
  Rng rng(41);
  GenOptions opt;
  Colligation coll = pbtest::random_colligation(rng, opt);
  const BallShape& shape = coll.shape();
  const Multiplicity& n = coll.n();
  for (int r = 0; r < shape.factors(); ++r) {
    for (int j = 0; j < shape.m(r); ++j) {
      for (int rp = 0; rp < shape.factors(); ++rp) {
        for (int i = 0; i < shape.ell(rp); ++i) {
          Matrix blk = coll.a_block(r, rp, j, i);
          for (int t = 0; t < n[r]; ++t) {
            for (int tp = 0; tp < n[rp]; ++tp) {
              CHECK(blk(t, tp) == coll.a()(row_flat_index(shape, n, r, j, t),
                                           col_flat_index(shape, n, rp, i, tp)));
            }
          }
        }
      }
    }
  }
}
