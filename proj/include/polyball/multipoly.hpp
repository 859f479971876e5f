#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "polyball/core.hpp"

namespace polyball {

/// Coefficients with modulus below this are treated as zero and dropped.
inline constexpr double kCoeffDrop = 1e-14;

/// Exponent vector over the flat variable order of a shape.
using Monomial = std::vector<int>;

/// Polynomial in the commuting scalar variables z^(r)_{ij} of a shape.
/// Terms are kept in a sorted map keyed by exponent vector, so iteration
/// order (and any serialization derived from it) is deterministic.  Stored
/// coefficients are always above the drop threshold.
class MultiPoly {
 public:
  explicit MultiPoly(BallShape shape) : shape_(std::move(shape)) {}

  static MultiPoly constant(const BallShape& shape, Complex c) {
    MultiPoly p(shape);
    p.add_term(Monomial(shape.var_count(), 0), c);
    return p;
  }

  static MultiPoly variable(const BallShape& shape, int r, int i, int j) {
    check_letter(shape, {r, i, j});
    MultiPoly p(shape);
    Monomial mono(shape.var_count(), 0);
    mono[shape.var_index(r, i, j)] = 1;
    p.add_term(mono, Complex(1.0, 0.0));
    return p;
  }

  const BallShape& shape() const { return shape_; }
  const std::map<Monomial, Complex>& terms() const { return terms_; }
  int term_count() const { return static_cast<int>(terms_.size()); }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c * z^mono, dropping the term if the result is negligible.
  void add_term(const Monomial& mono, Complex c) {
    if (static_cast<int>(mono.size()) != shape_.var_count()) {
      throw ValidationError("monomial has " + std::to_string(mono.size()) +
                            " exponents, shape has " +
                            std::to_string(shape_.var_count()) + " variables");
    }
    for (int e : mono) {
      if (e < 0) throw ValidationError("negative exponent in monomial");
    }
    auto it = terms_.find(mono);
    if (it == terms_.end()) {
      if (std::abs(c) >= kCoeffDrop) terms_.emplace(mono, c);
    } else {
      it->second += c;
      if (std::abs(it->second) < kCoeffDrop) terms_.erase(it);
    }
  }

  Complex coeff(const Monomial& mono) const {
    auto it = terms_.find(mono);
    return it == terms_.end() ? Complex(0.0) : it->second;
  }

  Complex constant_term() const { return coeff(Monomial(shape_.var_count(), 0)); }

  /// Largest total degree among stored terms; zero for the zero polynomial.
  int degree() const {
    int d = 0;
    for (const auto& [mono, c] : terms_) {
      int t = 0;
      for (int e : mono) t += e;
      d = std::max(d, t);
    }
    return d;
  }

  /// Largest exponent of one variable among stored terms.
  int degree_in(int var) const {
    int d = 0;
    for (const auto& [mono, c] : terms_) d = std::max(d, mono[var]);
    return d;
  }

  std::vector<int> var_degrees() const {
    std::vector<int> d(shape_.var_count(), 0);
    for (const auto& [mono, c] : terms_) {
      for (int v = 0; v < static_cast<int>(d.size()); ++v) d[v] = std::max(d[v], mono[v]);
    }
    return d;
  }

  double max_coeff_abs() const {
    double m = 0.0;
    for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    check_shape(o);
    for (const auto& [mono, c] : o.terms_) add_term(mono, c);
    return *this;
  }

  MultiPoly& operator-=(const MultiPoly& o) {
    check_shape(o);
    for (const auto& [mono, c] : o.terms_) add_term(mono, -c);
    return *this;
  }

  MultiPoly& operator*=(Complex s) {
    std::map<Monomial, Complex> out;
    for (const auto& [mono, c] : terms_) {
      Complex v = c * s;
      if (std::abs(v) >= kCoeffDrop) out.emplace(mono, v);
    }
    terms_ = std::move(out);
    return *this;
  }

  MultiPoly operator*(const MultiPoly& o) const {
    check_shape(o);
    MultiPoly out(shape_);
    Monomial mono(shape_.var_count());
    for (const auto& [ma, ca] : terms_) {
      for (const auto& [mb, cb] : o.terms_) {
        for (int v = 0; v < shape_.var_count(); ++v) mono[v] = ma[v] + mb[v];
        out.add_term(mono, ca * cb);
      }
    }
    return out;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, Complex s) { return a *= s; }
  friend MultiPoly operator*(Complex s, MultiPoly a) { return a *= s; }

  /// Substitution z_v -> lambda_v * z_v.
  MultiPoly scaled_vars(const std::vector<Complex>& lambda) const {
    if (static_cast<int>(lambda.size()) != shape_.var_count()) {
      throw ValidationError("expected one scale per variable");
    }
    MultiPoly out(shape_);
    for (const auto& [mono, c] : terms_) {
      Complex v = c;
      for (int q = 0; q < shape_.var_count(); ++q) {
        for (int e = 0; e < mono[q]; ++e) v *= lambda[q];
      }
      out.add_term(mono, v);
    }
    return out;
  }

  /// Largest coefficient-modulus difference against another polynomial.
  double max_coeff_diff(const MultiPoly& o) const {
    check_shape(o);
    double err = 0.0;
    for (const auto& [mono, c] : terms_) err = std::max(err, std::abs(c - o.coeff(mono)));
    for (const auto& [mono, c] : o.terms_) err = std::max(err, std::abs(c - coeff(mono)));
    return err;
  }

 private:
  void check_shape(const MultiPoly& o) const {
    if (shape_ != o.shape_) throw ValidationError("polynomial shapes differ");
  }

  BallShape shape_;
  std::map<Monomial, Complex> terms_;
};

/// Flattens a level-one point into the variable order of its shape.
inline std::vector<Complex> scalar_coordinates(const MatrixPoint& pt) {
  if (pt.level() != 1) {
    throw ValidationError("scalar evaluation needs a level-one point");
  }
  const BallShape& shape = pt.shape();
  std::vector<Complex> vals(shape.var_count());
  for (int r = 0; r < shape.factors(); ++r) {
    for (int i = 0; i < shape.ell(r); ++i) {
      for (int j = 0; j < shape.m(r); ++j) {
        vals[shape.var_index(r, i, j)] = pt.factor(r)(i, j);
      }
    }
  }
  return vals;
}

/// Compiled evaluator for many evaluations of one polynomial: per-variable
/// power tables plus flat term arrays.
class PolyEvaluator {
 public:
  explicit PolyEvaluator(const MultiPoly& p)
      : vars_(p.shape().var_count()), maxdeg_(p.var_degrees()) {
    offsets_.resize(vars_ + 1, 0);
    for (int v = 0; v < vars_; ++v) offsets_[v + 1] = offsets_[v] + maxdeg_[v] + 1;
    pows_.resize(offsets_[vars_]);
    for (const auto& [mono, c] : p.terms()) {
      coeffs_.push_back(c);
      int nnz = 0;
      for (int v = 0; v < vars_; ++v) {
        if (mono[v] > 0) {
          packed_.push_back(offsets_[v] + mono[v]);
          ++nnz;
        }
      }
      counts_.push_back(nnz);
    }
  }

  Complex operator()(const std::vector<Complex>& vals) const {
    if (static_cast<int>(vals.size()) != vars_) {
      throw ValidationError("wrong coordinate count");
    }
    for (int v = 0; v < vars_; ++v) {
      pows_[offsets_[v]] = Complex(1.0);
      for (int e = 1; e <= maxdeg_[v]; ++e) {
        pows_[offsets_[v] + e] = pows_[offsets_[v] + e - 1] * vals[v];
      }
    }
    Complex sum(0.0);
    std::size_t at = 0;
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
      Complex term = coeffs_[t];
      for (int q = 0; q < counts_[t]; ++q) term *= pows_[packed_[at++]];
      sum += term;
    }
    return sum;
  }

 private:
  int vars_;
  std::vector<int> maxdeg_;
  std::vector<int> offsets_;
  std::vector<Complex> coeffs_;
  std::vector<int> counts_;
  std::vector<int> packed_;
  mutable std::vector<Complex> pows_;
};

/// Value of p at a level-one point of its shape.
inline Complex poly_eval(const MultiPoly& p, const MatrixPoint& pt) {
  if (p.shape() != pt.shape()) {
    throw ValidationError("point shape does not match the polynomial shape");
  }
  return PolyEvaluator(p)(scalar_coordinates(pt));
}

}  // namespace polyball
