#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "meanx.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitShape = 3;
constexpr int kExitNoConverge = 4;
constexpr int kExitIo = 5;

int exit_for(mx_status status) {
  switch (status) {
    case MX_OK: return kExitOk;
    case MX_ERR_PARSE:
    case MX_ERR_DOMAIN: return kExitParse;
    case MX_ERR_DIMENSION: return kExitShape;
    case MX_ERR_NONCONVERGENCE:
    case MX_ERR_NUMERIC: return kExitNoConverge;
    case MX_ERR_IO: return kExitIo;
  }
  return kExitNoConverge;
}

int complain(mx_status status) {
  std::cerr << "error: " << mx_last_error() << " (" << mx_status_name(status) << ")\n";
  return exit_for(status);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Options {
  std::optional<std::string> mean, space, variant;
  std::optional<int> arity, max_iter, interval_n;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string config_path, input_path, output_path;
  std::vector<double> scalars;
};

void add_common_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--mean", o.mean,
                  "mean family: arithmetic|geometric|harmonic|logarithmic|agm|hgm|"
                  "power:<a>|quasi:<f>|weighted:<s>|max|left|right")
      ->default_str("arithmetic");
  cmd->add_option("--space", o.space, "scalar or spd")->default_str("scalar");
  cmd->add_option("--variant", o.variant, "beta or beta_star")->default_str("beta");
  cmd->add_option("--arity", o.arity, "number of variables (>= 2)")->default_str("2");
  cmd->add_option("--tol", o.tol, "convergence tolerance")
      ->default_str("1e-12 scalar, 1e-10 spd");
  cmd->add_option("--max-iter", o.max_iter, "iteration cap")->default_str("10000");
  cmd->add_option("--seed", o.seed, "sampling seed")->default_str("2026");
  cmd->add_option("--interval-n", o.interval_n,
                  "certify contraction on the order interval [1/n, n]");
  cmd->add_option("--config", o.config_path, "JSON config file (flags override it)");
  cmd->add_option("--input", o.input_path, "input file (matrix text or scalar list)");
  cmd->add_option("--output", o.output_path, "output file");
}

// Overlay document: config file first, then explicitly set flags on top.
// Returns the exit code on failure, 0 on success.
int build_config(const Options& o, nlohmann::json& out) {
  out = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) {
      std::cerr << "error: cannot open config '" << o.config_path << "'\n";
      return kExitIo;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const auto parsed = nlohmann::json::parse(buf.str(), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      std::cerr << "error: config '" << o.config_path << "' is not a JSON object\n";
      return kExitParse;
    }
    out = parsed;
  }
  if (o.mean) out["mean"] = *o.mean;
  if (o.space) out["space"] = *o.space;
  if (o.variant) out["variant"] = *o.variant;
  if (o.arity) out["arity"] = *o.arity;
  if (o.tol) out["tolerance"] = *o.tol;
  if (o.max_iter) out["max_iter"] = *o.max_iter;
  if (o.seed) out["seed"] = *o.seed;
  if (o.interval_n) out["interval_n"] = *o.interval_n;
  return kExitOk;
}

std::string header_lines(const nlohmann::json& cfg) {
  auto str = [&](const char* key, const char* def) {
    return cfg.contains(key) && cfg[key].is_string() ? cfg[key].get<std::string>() : def;
  };
  const std::string space = str("space", "scalar");
  double tol = space == "spd" ? 1e-10 : 1e-12;
  if (cfg.contains("tolerance") && cfg["tolerance"].is_number())
    tol = cfg["tolerance"].get<double>();
  std::ostringstream os;
  os << "# mean=" << str("mean", "arithmetic") << " space=" << space
     << " variant=" << str("variant", "beta")
     << " arity=" << (cfg.contains("arity") ? cfg["arity"].get<int>() : 2) << '\n';
  os << "# tolerance=" << tol << " max_iter="
     << (cfg.contains("max_iter") ? cfg["max_iter"].get<long long>() : 10000)
     << " seed=" << (cfg.contains("seed") ? cfg["seed"].get<std::uint64_t>() : 2026)
     << " interval_n=";
  if (cfg.contains("interval_n") && cfg["interval_n"].is_number())
    os << cfg["interval_n"].get<int>();
  else
    os << "none";
  os << '\n';
  return os.str();
}

int read_scalar_inputs(const Options& o, std::vector<double>& xs) {
  if (!o.scalars.empty() && !o.input_path.empty()) {
    std::cerr << "error: give scalars either as arguments or via --input, not both\n";
    return kExitParse;
  }
  if (!o.input_path.empty()) {
    std::ifstream in(o.input_path);
    if (!in) {
      std::cerr << "error: cannot open input '" << o.input_path << "'\n";
      return kExitIo;
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream cells(line);
      std::string token;
      while (cells >> token) {
        try {
          std::size_t used = 0;
          const double v = std::stod(token, &used);
          if (used != token.size()) throw std::invalid_argument(token);
          xs.push_back(v);
        } catch (const std::exception&) {
          std::cerr << "error: line " << line_no << ": '" << token
                    << "' is not a number\n";
          return kExitParse;
        }
      }
    }
    return kExitOk;
  }
  xs = o.scalars;
  return kExitOk;
}

struct MatrixData {
  double* data = nullptr;
  int dim = 0;
  int count = 0;
  ~MatrixData() { mx_buffer_free(data); }
};

int read_matrix_inputs(const Options& o, MatrixData& mats) {
  if (!o.scalars.empty()) {
    std::cerr << "error: spd inputs come from --input <file>, not arguments\n";
    return kExitParse;
  }
  if (o.input_path.empty()) {
    std::cerr << "error: spd computation needs --input <matrix file>\n";
    return kExitParse;
  }
  const mx_status st =
      mx_read_matrix_file(o.input_path.c_str(), &mats.data, &mats.dim, &mats.count);
  if (st != MX_OK) return complain(st);
  if (mats.count == 0) {
    std::cerr << "error: '" << o.input_path << "' holds no matrices\n";
    return kExitShape;
  }
  return kExitOk;
}

struct Job {
  mx_job* handle = nullptr;
  ~Job() { mx_job_free(handle); }
};

struct Report {
  mx_report* handle = nullptr;
  ~Report() { mx_report_free(handle); }
};

int open_output(const std::string& path, std::ofstream& file, std::ostream*& out) {
  if (path.empty()) {
    out = &std::cout;
    return kExitOk;
  }
  file.open(path);
  if (!file) {
    std::cerr << "error: cannot open output '" << path << "'\n";
    return kExitIo;
  }
  out = &file;
  return kExitOk;
}

void write_trace_csv(std::ostream& os, const std::string& header, const mx_report* rep) {
  os << header << "iteration,diameter,bound\n";
  const int len = mx_report_trace_length(rep);
  const bool with_bound = mx_report_has_rho(rep) == 1 && len > 0;
  const double rho = mx_report_rho(rep);
  const double d0 = len > 0 ? mx_report_diameter(rep, 0) : 0.0;
  const int k = mx_report_arity(rep);
  for (int i = 0; i < len; ++i) {
    os << i << ',' << fmt(mx_report_diameter(rep, i)) << ',';
    if (with_bound) os << fmt(k * std::pow(rho, i) * d0);
    os << '\n';
  }
}

// Runs the mean evaluation shared by compute and trace. Returns the status
// and fills value/matrix plus the report.
mx_status run_job(const Options& o, mx_job* job, bool is_spd,
                  std::vector<double>& scalar_inputs, MatrixData& mats, double& value,
                  std::vector<double>& matrix_out, int& ec, Report& report) {
  if (is_spd) {
    ec = read_matrix_inputs(o, mats);
    if (ec != kExitOk) return MX_ERR_PARSE;
    matrix_out.assign(static_cast<std::size_t>(mats.dim) * mats.dim, 0.0);
    return mx_compute_spd(job, mats.data, mats.dim, mats.count, matrix_out.data(),
                          &report.handle);
  }
  ec = read_scalar_inputs(o, scalar_inputs);
  if (ec != kExitOk) return MX_ERR_PARSE;
  return mx_compute_scalar(job, scalar_inputs.data(),
                           static_cast<int>(scalar_inputs.size()), &value,
                           &report.handle);
}

int cmd_compute(const Options& o) {
  nlohmann::json cfg;
  if (int ec = build_config(o, cfg); ec != kExitOk) return ec;
  Job job;
  if (mx_status st = mx_job_create(cfg.dump().c_str(), &job.handle); st != MX_OK)
    return complain(st);

  const bool is_spd = cfg.value("space", "scalar") == "spd";
  std::vector<double> scalar_inputs, matrix_out;
  MatrixData mats;
  double value = 0.0;
  int ec = kExitOk;
  Report report;
  const mx_status st =
      run_job(o, job.handle, is_spd, scalar_inputs, mats, value, matrix_out, ec, report);
  if (ec != kExitOk) return ec;
  if (st != MX_OK && st != MX_ERR_NONCONVERGENCE) return complain(st);

  const std::string header = header_lines(cfg);
  std::cout << header;
  if (is_spd) {
    char* text = nullptr;
    if (mx_status fs = mx_format_matrix(matrix_out.data(), mats.dim, &text); fs != MX_OK)
      return complain(fs);
    std::cout << text;
    mx_buffer_free(text);
  } else {
    std::cout << fmt(value) << '\n';
  }
  if (!o.output_path.empty() && report.handle) {
    std::ofstream file;
    std::ostream* out = nullptr;
    if (int oe = open_output(o.output_path, file, out); oe != kExitOk) return oe;
    write_trace_csv(*out, header, report.handle);
  }
  if (st == MX_ERR_NONCONVERGENCE) return complain(st);
  return kExitOk;
}

int cmd_trace(const Options& o) {
  nlohmann::json cfg;
  if (int ec = build_config(o, cfg); ec != kExitOk) return ec;
  Job job;
  if (mx_status st = mx_job_create(cfg.dump().c_str(), &job.handle); st != MX_OK)
    return complain(st);

  const bool is_spd = cfg.value("space", "scalar") == "spd";
  std::vector<double> scalar_inputs, matrix_out;
  MatrixData mats;
  double value = 0.0;
  int ec = kExitOk;
  Report report;
  const mx_status st =
      run_job(o, job.handle, is_spd, scalar_inputs, mats, value, matrix_out, ec, report);
  if (ec != kExitOk) return ec;
  if (st != MX_OK && st != MX_ERR_NONCONVERGENCE) return complain(st);

  std::ofstream file;
  std::ostream* out = nullptr;
  if (int oe = open_output(o.output_path, file, out); oe != kExitOk) return oe;
  write_trace_csv(*out, header_lines(cfg), report.handle);
  if (st == MX_ERR_NONCONVERGENCE) return complain(st);
  return kExitOk;
}

int cmd_audit(const Options& o) {
  nlohmann::json cfg;
  if (int ec = build_config(o, cfg); ec != kExitOk) return ec;
  Job job;
  if (mx_status st = mx_job_create(cfg.dump().c_str(), &job.handle); st != MX_OK)
    return complain(st);

  char* json_out = nullptr;
  if (mx_status st = mx_audit(job.handle, &json_out); st != MX_OK) return complain(st);
  std::ofstream file;
  std::ostream* out = nullptr;
  if (int oe = open_output(o.output_path, file, out); oe != kExitOk) {
    mx_buffer_free(json_out);
    return oe;
  }
  *out << json_out << '\n';
  mx_buffer_free(json_out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"n-variable means by barycentric iteration on positive scalars and "
               "symmetric positive definite matrices"};
  app.require_subcommand(1);
  app.footer(
      "Defaults: tolerance 1e-12 (scalar) or 1e-10 (spd), max_iter 10000, seed 2026,\n"
      "variant beta, arity 2, audit samples 100 (config key \"samples\").\n"
      "Config file keys: mean, space, variant, arity, tolerance, max_iter, seed,\n"
      "interval_n, samples. Command-line flags override config file values.");

  Options opt;
  auto* compute = app.add_subcommand("compute", "evaluate an n-variable mean");
  auto* audit = app.add_subcommand("audit", "run the sampled property checks");
  auto* trace = app.add_subcommand("trace", "emit the diameter trace as CSV");
  for (auto* cmd : {compute, audit, trace}) add_common_flags(cmd, opt);
  compute->add_option("xs", opt.scalars, "scalar inputs");
  trace->add_option("xs", opt.scalars, "scalar inputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  if (compute->parsed()) return cmd_compute(opt);
  if (trace->parsed()) return cmd_trace(opt);
  return cmd_audit(opt);
}
