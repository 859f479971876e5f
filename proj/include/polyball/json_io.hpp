#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "polyball/core.hpp"
#include "polyball/multipoly.hpp"

// JSON boundary.  Parsing accepts the documented file formats (with
// one-based factor/entry indices); writing is done by hand so that numbers
// are always printed with 17 significant digits and output bytes are
// deterministic.

namespace polyball {
namespace jsonio {

using nlohmann::json;

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

inline json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_text(text);
}

inline double to_double(const json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string(what) + " must be a number");
  return j.get<double>();
}

inline int to_int(const json& j, const char* what) {
  if (!j.is_number_integer()) {
    throw ValidationError(std::string(what) + " must be an integer");
  }
  return j.get<int>();
}

/// Complex scalar: [re, im], or a bare number meaning a real value.
inline Complex parse_complex(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2) {
    throw ValidationError("complex number must be [re, im]");
  }
  return Complex(to_double(j[0], "re"), to_double(j[1], "im"));
}

/// Row-major nested arrays with known dimensions (needed so that void
/// matrices keep their column count).
inline Matrix parse_matrix(const json& j, int rows, int cols, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array");
  if (static_cast<int>(j.size()) != rows) {
    throw ValidationError(std::string(what) + " has " + std::to_string(j.size()) +
                          " rows, expected " + std::to_string(rows));
  }
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw ValidationError(std::string(what) + " row " + std::to_string(i) +
                            " must have " + std::to_string(cols) + " entries");
    }
    for (int k = 0; k < cols; ++k) m(i, k) = parse_complex(row[k]);
  }
  return m;
}

inline BallShape parse_shape(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError("shape must be a non-empty array of [l, m] pairs");
  }
  std::vector<std::pair<int, int>> dims;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) {
      throw ValidationError("shape entries must be [l, m] pairs");
    }
    dims.emplace_back(to_int(e[0], "l"), to_int(e[1], "m"));
  }
  return BallShape(std::move(dims));
}

inline Multiplicity parse_multiplicity(const json& j) {
  if (!j.is_array()) throw ValidationError("n must be an array of integers");
  std::vector<int> n;
  for (const auto& e : j) n.push_back(to_int(e, "n entry"));
  return Multiplicity(std::move(n));
}

inline const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("missing field: ") + key);
  return *it;
}

inline Colligation parse_colligation(const json& j) {
  if (!j.is_object()) throw ValidationError("colligation must be a JSON object");
  BallShape shape = parse_shape(field(j, "shape"));
  Multiplicity n = parse_multiplicity(field(j, "n"));
  if (n.size() != shape.factors()) {
    throw ValidationError("n length does not match the shape");
  }
  const int alpha = to_int(field(j, "alpha"), "alpha");
  const int beta = to_int(field(j, "beta"), "beta");
  if (alpha < 0 || beta < 0) throw ValidationError("alpha and beta must be nonnegative");
  const int rows = row_state_dim(shape, n);
  const int cols = col_state_dim(shape, n);
  Matrix a = parse_matrix(field(j, "A"), rows, cols, "A");
  Matrix b = parse_matrix(field(j, "B"), rows, beta, "B");
  Matrix c = parse_matrix(field(j, "C"), alpha, cols, "C");
  Matrix d = parse_matrix(field(j, "D"), alpha, beta, "D");
  return Colligation(std::move(shape), std::move(n), std::move(a), std::move(b),
                     std::move(c), std::move(d));
}

/// Point files carry no shape; the shape comes from the companion object
/// (colligation or polynomial) the point is used with.
inline MatrixPoint parse_point(const json& j, const BallShape& shape) {
  if (!j.is_object()) throw ValidationError("point must be a JSON object");
  const int s = to_int(field(j, "s"), "s");
  if (s < 1) throw ValidationError("s must be positive");
  const json& zs = field(j, "Z");
  if (!zs.is_array() || static_cast<int>(zs.size()) != shape.factors()) {
    throw ValidationError("Z must list one matrix per factor");
  }
  std::vector<Matrix> z;
  for (int r = 0; r < shape.factors(); ++r) {
    z.push_back(parse_matrix(zs[r], shape.ell(r) * s, shape.m(r) * s, "Z factor"));
  }
  return MatrixPoint(shape, s, std::move(z));
}

inline MultiPoly parse_poly(const json& j) {
  if (!j.is_object()) throw ValidationError("polynomial must be a JSON object");
  BallShape shape = parse_shape(field(j, "shape"));
  MultiPoly p(shape);
  const json& terms = field(j, "terms");
  if (!terms.is_array()) throw ValidationError("terms must be an array");
  for (const auto& term : terms) {
    if (!term.is_object()) throw ValidationError("each term must be an object");
    Monomial mono(shape.var_count(), 0);
    const json& mj = field(term, "monomial");
    if (!mj.is_array()) throw ValidationError("monomial must be an array");
    for (const auto& e : mj) {
      if (!e.is_array() || e.size() != 4) {
        throw ValidationError("monomial entries must be [r, i, j, exp]");
      }
      const int r = to_int(e[0], "r") - 1;
      const int i = to_int(e[1], "i") - 1;
      const int jj = to_int(e[2], "j") - 1;
      const int exp = to_int(e[3], "exp");
      check_letter(shape, {r, i, jj});
      if (exp < 0) throw ValidationError("exponent must be nonnegative");
      mono[shape.var_index(r, i, jj)] += exp;
    }
    p.add_term(mono, parse_complex(field(term, "coeff")));
  }
  return p;
}

/// Pencil data (K, n, shape) for the determinant commands; also accepts a
/// full colligation object, whose A block then plays the role of K.
struct PencilData {
  BallShape shape;
  Multiplicity n;
  Matrix k;
};

inline PencilData parse_pencil(const json& j) {
  if (!j.is_object()) throw ValidationError("pencil input must be a JSON object");
  BallShape shape = parse_shape(field(j, "shape"));
  Multiplicity n = parse_multiplicity(field(j, "n"));
  if (n.size() != shape.factors()) {
    throw ValidationError("n length does not match the shape");
  }
  const int rows = row_state_dim(shape, n);
  const int cols = col_state_dim(shape, n);
  auto it = j.find("K");
  if (it == j.end()) it = j.find("A");
  if (it == j.end()) throw ValidationError("missing field: K");
  Matrix k = parse_matrix(*it, rows, cols, "K");
  return {std::move(shape), std::move(n), std::move(k)};
}

// Writing.

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_complex(Complex v) {
  return "[" + fmt_double(v.real()) + "," + fmt_double(v.imag()) + "]";
}

inline std::string fmt_bool(bool b) { return b ? "true" : "false"; }

inline std::string fmt_matrix(const Matrix& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) out += ",";
    out += "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ",";
      out += fmt_complex(m(i, j));
    }
    out += "]";
  }
  out += "]";
  return out;
}

inline std::string fmt_shape(const BallShape& shape) {
  std::string out = "[";
  for (int r = 0; r < shape.factors(); ++r) {
    if (r) out += ",";
    out += "[" + std::to_string(shape.ell(r)) + "," + std::to_string(shape.m(r)) + "]";
  }
  out += "]";
  return out;
}

inline std::string fmt_int_list(const std::vector<int>& v) {
  std::string out = "[";
  for (std::size_t q = 0; q < v.size(); ++q) {
    if (q) out += ",";
    out += std::to_string(v[q]);
  }
  out += "]";
  return out;
}

inline std::string fmt_colligation(const Colligation& coll) {
  std::string out = "{\"shape\":" + fmt_shape(coll.shape());
  out += ",\"n\":" + fmt_int_list(coll.n().values());
  out += ",\"alpha\":" + std::to_string(coll.alpha());
  out += ",\"beta\":" + std::to_string(coll.beta());
  out += ",\"A\":" + fmt_matrix(coll.a());
  out += ",\"B\":" + fmt_matrix(coll.b());
  out += ",\"C\":" + fmt_matrix(coll.c());
  out += ",\"D\":" + fmt_matrix(coll.d());
  out += "}";
  return out;
}

inline std::string fmt_point(const MatrixPoint& pt) {
  std::string out = "{\"s\":" + std::to_string(pt.level()) + ",\"Z\":[";
  for (int r = 0; r < pt.shape().factors(); ++r) {
    if (r) out += ",";
    out += fmt_matrix(pt.factor(r));
  }
  out += "]}";
  return out;
}

/// Terms are emitted in the container's sorted monomial order; only
/// variables with positive exponent appear, with one-based indices.
inline std::string fmt_poly(const MultiPoly& p) {
  const BallShape& shape = p.shape();
  std::string out = "{\"shape\":" + fmt_shape(shape) + ",\"terms\":[";
  bool first_term = true;
  for (const auto& [mono, coeff] : p.terms()) {
    if (!first_term) out += ",";
    first_term = false;
    out += "{\"monomial\":[";
    bool first_var = true;
    for (int r = 0; r < shape.factors(); ++r) {
      for (int i = 0; i < shape.ell(r); ++i) {
        for (int j = 0; j < shape.m(r); ++j) {
          const int e = mono[shape.var_index(r, i, j)];
          if (e > 0) {
            if (!first_var) out += ",";
            first_var = false;
            out += "[" + std::to_string(r + 1) + "," + std::to_string(i + 1) + "," +
                   std::to_string(j + 1) + "," + std::to_string(e) + "]";
          }
        }
      }
    }
    out += "],\"coeff\":" + fmt_complex(coeff) + "}";
  }
  out += "]}";
  return out;
}

inline std::string fmt_pencil(const BallShape& shape, const Multiplicity& n,
                              const Matrix& k) {
  return "{\"shape\":" + fmt_shape(shape) + ",\"n\":" + fmt_int_list(n.values()) +
         ",\"K\":" + fmt_matrix(k) + "}";
}

}  // namespace jsonio
}  // namespace polyball
