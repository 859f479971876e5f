#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "polyball/core.hpp"
#include "polyball/linalg.hpp"

namespace polyball {

/// Deterministic random source.  Distributions are implemented here rather
/// than taken from <random> so that streams are reproducible across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound).
  int below(int bound) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(bound)); }

  /// Standard normal via Box-Muller, one cached mate.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = mag * std::sin(ang);
    have_spare_ = true;
    return mag * std::cos(ang);
  }

  /// Complex normal, independent real and imaginary parts.
  Complex cnormal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) * std::numbers::sqrt2 / 2.0;
  }

  /// Matrix of independent complex normals, filled row-major.
  Matrix gaussian_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = cnormal();
    return m;
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Random point of the product ball at level s.  Each factor gets Gaussian
/// entries and is then rescaled to an operator norm drawn uniformly from
/// [0, radius], so radius < 1 keeps the point strictly inside.
inline MatrixPoint random_point(const BallShape& shape, int s, double radius, Rng& rng) {
  if (s < 1) throw ValidationError("point level must be positive");
  if (radius < 0) throw ValidationError("radius must be non-negative");
  std::vector<Matrix> z;
  z.reserve(shape.factors());
  for (int r = 0; r < shape.factors(); ++r) {
    Matrix g = rng.gaussian_matrix(shape.ell(r) * s, shape.m(r) * s);
    const double target = radius * rng.uniform();
    const double norm = operator_norm(g);
    if (norm > 0) {
      g *= target / norm;
    }
    z.push_back(std::move(g));
  }
  return MatrixPoint(shape, s, std::move(z));
}

inline MatrixPoint random_point(const BallShape& shape, int s, double radius,
                                std::uint64_t seed) {
  Rng rng(seed);
  return random_point(shape, s, radius, rng);
}

}  // namespace polyball
