// Command-line front end: every library operation over JSON files, with
// deterministic output (17 significant digits, fixed key order).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "polyball/polyball.hpp"

namespace pb = polyball;
namespace io = pb::jsonio;

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x",
                        static_cast<unsigned>(static_cast<unsigned char>(ch)));
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

void emit_error(const char* kind, const std::string& message) {
  std::cerr << "{\"error\":\"" << kind << "\",\"message\":\"" << escape(message)
            << "\"}\n";
}

pb::Word parse_word_arg(const std::string& text) {
  pb::Word word;
  if (text.empty()) return word;
  std::size_t at = 0;
  while (at <= text.size()) {
    std::size_t end = text.find(';', at);
    if (end == std::string::npos) end = text.size();
    std::string part = text.substr(at, end - at);
    int r = 0, i = 0, j = 0;
    if (std::sscanf(part.c_str(), " %d , %d , %d", &r, &i, &j) != 3) {
      throw pb::ValidationError("letter must be r,i,j: " + part);
    }
    word.push_back({r - 1, i - 1, j - 1});
    if (end == text.size()) break;
    at = end + 1;
  }
  return word;
}

std::vector<int> parse_int_list_arg(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::size_t at = 0;
  while (at <= text.size()) {
    std::size_t end = text.find(',', at);
    if (end == std::string::npos) end = text.size();
    try {
      out.push_back(std::stoi(text.substr(at, end - at)));
    } catch (const std::exception&) {
      throw pb::ValidationError("expected a comma-separated integer list");
    }
    if (end == text.size()) break;
    at = end + 1;
  }
  return out;
}

std::string fmt_verify(const pb::VerifyReport& rep) {
  std::string out = "{\"pass\":" + io::fmt_bool(rep.pass);
  out += ",\"max_error\":" + io::fmt_double(rep.max_error);
  out += ",\"norm_K\":" + io::fmt_double(rep.norm_k);
  out += ",\"symbolic\":" + io::fmt_bool(rep.symbolic);
  out += ",\"samples\":" + std::to_string(rep.samples_used);
  out += ",\"tolerance\":" + io::fmt_double(rep.tolerance);
  out += "}";
  return out;
}

struct Options {
  std::string colligation_file;
  std::string point_file;
  std::string poly_file;
  std::string word_text;
  std::string n_text;
  std::string out_file;
  int samples = 200;
  std::uint64_t seed = 0;
  double rho = 0.0;
  double c = 0.0;
};

pb::Colligation load_colligation(const Options& opt) {
  return io::parse_colligation(io::load_file(opt.colligation_file));
}

pb::MatrixPoint load_point(const Options& opt, const pb::BallShape& shape) {
  return io::parse_point(io::load_file(opt.point_file), shape);
}

pb::MultiPoly load_poly(const Options& opt) {
  return io::parse_poly(io::load_file(opt.poly_file));
}

io::PencilData load_pencil(const Options& opt) {
  return io::parse_pencil(io::load_file(opt.colligation_file));
}

std::string run_eval(const Options& opt) {
  pb::Colligation coll = load_colligation(opt);
  pb::MatrixPoint pt = load_point(opt, coll.shape());
  return "{\"value\":" + io::fmt_matrix(pb::eval_transfer(coll, pt)) + "}";
}

std::string run_coeff(const Options& opt) {
  pb::Colligation coll = load_colligation(opt);
  pb::Word word = parse_word_arg(opt.word_text);
  return "{\"value\":" + io::fmt_matrix(pb::nc_coeff(coll, word)) + "}";
}

std::string run_pencil_det(const Options& opt) {
  pb::Colligation coll = load_colligation(opt);
  pb::MatrixPoint pt = load_point(opt, coll.shape());
  return "{\"value\":" + io::fmt_complex(pb::det_pencil(coll, pt)) + "}";
}

std::string run_minimal(const Options& opt) {
  pb::Colligation coll = load_colligation(opt);
  std::string out = "{\"is_minimal\":" + io::fmt_bool(pb::is_minimal(coll));
  out += ",\"controllable_dims\":" +
         io::fmt_int_list(pb::controllable_spaces(coll).dims());
  out += ",\"unobservable_dims\":" +
         io::fmt_int_list(pb::unobservable_spaces(coll).dims());
  out += ",\"n\":" + io::fmt_int_list(coll.n().values());
  out += "}";
  return out;
}

std::string run_minimize(const Options& opt) {
  return io::fmt_colligation(pb::minimize(load_colligation(opt)));
}

std::string run_invert(const Options& opt) {
  pb::InvertInfo info;
  pb::Colligation inv = pb::invert(load_colligation(opt), &info);
  std::string out = io::fmt_colligation(inv);
  out.pop_back();  // reopen the object to append the conditioning report
  out += ",\"cond_D\":" + io::fmt_double(info.cond_d) + "}";
  return out;
}

std::string run_detpoly(const Options& opt) {
  io::PencilData pd = load_pencil(opt);
  return io::fmt_poly(pb::det_poly(pd.k, pd.shape, pd.n));
}

std::string run_verify(const Options& opt) {
  pb::MultiPoly p = load_poly(opt);
  io::PencilData pd = load_pencil(opt);
  if (pd.shape != p.shape()) {
    throw pb::ValidationError("polynomial and pencil shapes differ");
  }
  return fmt_verify(pb::verify_detrep(p, pd.k, pd.n, opt.samples, opt.seed));
}

std::string run_univariate(const Options& opt) {
  pb::MultiPoly p = load_poly(opt);
  pb::UnivariateRep rep = pb::univariate_detrep(p);
  std::string out = io::fmt_pencil(p.shape(), rep.n, rep.k);
  out.pop_back();
  out += ",\"sigma_max\":" + io::fmt_double(pb::operator_norm(rep.k)) + "}";
  return out;
}

std::string run_stability(const Options& opt) {
  pb::MultiPoly p = load_poly(opt);
  pb::StabilityReport rep = pb::stability_sample(p, opt.samples, opt.seed);
  std::string out = "{\"min_abs\":" + io::fmt_double(rep.min_abs);
  out += ",\"argmin\":" + io::fmt_point(rep.argmin);
  out += ",\"samples\":" + std::to_string(rep.samples);
  out += "}";
  return out;
}

std::string fmt_pipeline(const pb::PipelineResult& res, const pb::BallShape& shape) {
  std::string out = "{\"shape\":" + io::fmt_shape(shape);
  out += ",\"n\":" + io::fmt_int_list(res.n_min.values());
  out += ",\"K\":" + io::fmt_matrix(res.k);
  out += ",\"det_one_error\":" + io::fmt_double(res.det_one_error);
  out += ",\"det_one_symbolic\":" + io::fmt_bool(res.det_one_symbolic);
  out += ",\"verify\":" + fmt_verify(res.verify);
  out += "}";
  return out;
}

std::string run_reflect(const Options& opt) {
  pb::MultiPoly p = load_poly(opt);
  pb::Multiplicity n(parse_int_list_arg(opt.n_text));
  pb::ReflectionReport rep = pb::agler_reflection(p, n, opt.samples, opt.seed);
  std::string out = "{\"poly\":" + io::fmt_poly(rep.reflected);
  out += ",\"max_unimodularity_error\":" + io::fmt_double(rep.max_unimodularity_error);
  out += ",\"samples\":" + std::to_string(rep.samples);
  out += ",\"tolerance\":1e-10}";
  return out;
}

void write_output(const Options& opt, const std::string& payload) {
  std::cout << payload << "\n";
  if (!opt.out_file.empty()) {
    std::ofstream out(opt.out_file);
    if (!out) throw pb::ValidationError("cannot write file: " + opt.out_file);
    out << payload << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structured realizations over matrix polyballs"};
  app.require_subcommand(1);
  Options opt;

  auto add_colligation = [&](CLI::App* cmd) {
    cmd->add_option("--colligation", opt.colligation_file, "colligation JSON file")
        ->required();
  };
  auto add_point = [&](CLI::App* cmd) {
    cmd->add_option("--point", opt.point_file, "point JSON file")->required();
  };
  auto add_poly = [&](CLI::App* cmd) {
    cmd->add_option("--poly", opt.poly_file, "polynomial JSON file")->required();
  };
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", opt.seed, "random seed")->required();
  };
  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", opt.out_file, "also write stdout payload to this file");
  };

  CLI::App* eval = app.add_subcommand("eval", "evaluate the transfer function");
  add_colligation(eval);
  add_point(eval);
  add_out(eval);

  CLI::App* coeff = app.add_subcommand("coeff", "series coefficient of a word");
  add_colligation(coeff);
  coeff->add_option("--word", opt.word_text,
                    "word as r,i,j;r,i,j;... (one-based); empty for the constant");
  add_out(coeff);

  CLI::App* pencil = app.add_subcommand("pencil-det", "determinant of I - A odot Z");
  add_colligation(pencil);
  add_point(pencil);
  add_out(pencil);

  CLI::App* minimal = app.add_subcommand("minimal", "minimality report");
  add_colligation(minimal);
  add_out(minimal);

  CLI::App* minimize = app.add_subcommand("minimize", "compress to a minimal system");
  add_colligation(minimize);
  add_out(minimize);

  CLI::App* invert = app.add_subcommand("invert", "invert the transfer function");
  add_colligation(invert);
  add_out(invert);

  CLI::App* detpoly = app.add_subcommand("detpoly", "expand det(I - K Zn)");
  add_colligation(detpoly);
  add_out(detpoly);

  CLI::App* verify = app.add_subcommand("verify", "check p = det(I - K Zn)");
  add_poly(verify);
  add_colligation(verify);
  verify->add_option("--samples", opt.samples, "sample count for the large-size path");
  add_seed(verify);
  add_out(verify);

  CLI::App* univariate = app.add_subcommand("univariate", "diagonal representation");
  add_poly(univariate);
  add_out(univariate);

  CLI::App* stability = app.add_subcommand("stability", "sample |p| on the closed ball");
  add_poly(stability);
  stability->add_option("--samples", opt.samples, "sample count")->required();
  add_seed(stability);
  add_out(stability);

  CLI::App* pipeline = app.add_subcommand("pipeline", "extract a representation");
  add_poly(pipeline);
  add_colligation(pipeline);
  pipeline->add_option("--rho", opt.rho, "domain inflation factor")->required();
  pipeline->add_option("--c", opt.c, "normalizing constant")->required();
  pipeline->add_option("--samples", opt.samples, "sample count for sampled checks");
  add_seed(pipeline);
  add_out(pipeline);

  CLI::App* reflect = app.add_subcommand("reflect", "coefficient reflection");
  add_poly(reflect);
  reflect->add_option("--n", opt.n_text, "multidegree n1,n2,... for the reflection")
      ->required();
  reflect->add_option("--samples", opt.samples, "torus sample count");
  add_seed(reflect);
  add_out(reflect);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::ostringstream silenced;
    app.exit(e, silenced, silenced);
    emit_error("validation", e.what());
    return 3;
  }

  try {
    std::string payload;
    if (eval->parsed()) payload = run_eval(opt);
    else if (coeff->parsed()) payload = run_coeff(opt);
    else if (pencil->parsed()) payload = run_pencil_det(opt);
    else if (minimal->parsed()) payload = run_minimal(opt);
    else if (minimize->parsed()) payload = run_minimize(opt);
    else if (invert->parsed()) payload = run_invert(opt);
    else if (detpoly->parsed()) payload = run_detpoly(opt);
    else if (verify->parsed()) payload = run_verify(opt);
    else if (univariate->parsed()) payload = run_univariate(opt);
    else if (stability->parsed()) payload = run_stability(opt);
    else if (reflect->parsed()) payload = run_reflect(opt);
    else if (pipeline->parsed()) {
      pb::MultiPoly p = load_poly(opt);
      pb::Colligation coll = load_colligation(opt);
      pb::PipelineResult res =
          pb::pipeline_extract(p, coll, opt.rho, opt.c, opt.samples, opt.seed);
      payload = fmt_pipeline(res, p.shape());
      write_output(opt, payload);
      if (!res.ok()) {
        emit_error("domain", "extracted representation failed verification");
        return 2;
      }
      return 0;
    }
    write_output(opt, payload);
    return 0;
  } catch (const pb::DomainError& e) {
    emit_error("domain", e.what());
    return 2;
  } catch (const pb::ValidationError& e) {
    emit_error("validation", e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error("validation", e.what());
    return 3;
  }
}
