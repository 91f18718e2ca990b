#include "meanx.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "meanx/audit.hpp"
#include "meanx/job.hpp"
#include "meanx/matrix_io.hpp"

namespace {

thread_local std::string g_last_error;

mx_status status_of(meanx::ErrorKind kind) {
  switch (kind) {
    case meanx::ErrorKind::Domain: return MX_ERR_DOMAIN;
    case meanx::ErrorKind::Dimension: return MX_ERR_DIMENSION;
    case meanx::ErrorKind::Parse: return MX_ERR_PARSE;
    case meanx::ErrorKind::Convergence: return MX_ERR_NONCONVERGENCE;
    case meanx::ErrorKind::Numeric: return MX_ERR_NUMERIC;
    case meanx::ErrorKind::Io: return MX_ERR_IO;
  }
  return MX_ERR_NUMERIC;
}

template <class Body>
mx_status wrap(Body&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const meanx::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MX_ERR_NUMERIC;
  }
}

mx_status fail(mx_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

struct CommonReport {
  bool converged = true;
  int iterations = 0;
  int arity = 2;
  std::vector<double> trace;
  std::optional<double> rho;
};

template <class T>
CommonReport from(const meanx::ConvergenceReport<T>& r) {
  CommonReport out;
  out.converged = r.converged;
  out.iterations = r.iterations;
  out.arity = r.mean_arity;
  out.trace = r.diameter_trace;
  out.rho = r.rho;
  return out;
}

}  // namespace

struct mx_job {
  meanx::JobConfig cfg;
};

struct mx_report {
  CommonReport data;
};

extern "C" {

const char* mx_status_name(mx_status status) {
  switch (status) {
    case MX_OK: return "ok";
    case MX_ERR_DOMAIN: return "domain";
    case MX_ERR_DIMENSION: return "dimension";
    case MX_ERR_PARSE: return "parse";
    case MX_ERR_NONCONVERGENCE: return "nonconvergence";
    case MX_ERR_NUMERIC: return "numeric";
    case MX_ERR_IO: return "io";
  }
  return "unknown";
}

const char* mx_last_error(void) { return g_last_error.c_str(); }

char* mx_default_config_json(void) {
  return dup_string(meanx::job_config_to_json(meanx::default_job_config()).dump(2));
}

void mx_buffer_free(void* buffer) { std::free(buffer); }

mx_status mx_job_create(const char* config_json, mx_job** out_job) {
  if (!out_job) return fail(MX_ERR_DOMAIN, "out_job is null");
  *out_job = nullptr;
  return wrap([&]() {
    meanx::JobConfig cfg;
    if (config_json && *config_json) {
      const auto parsed = nlohmann::json::parse(config_json, nullptr, false);
      if (parsed.is_discarded()) throw meanx::ParseError("config is not valid JSON");
      cfg = meanx::job_config_from_json(parsed);
    }
    meanx::parse_mean_name(cfg.mean);
    *out_job = new mx_job{cfg};
    return MX_OK;
  });
}

void mx_job_free(mx_job* job) { delete job; }

static mx_report* make_report(const CommonReport& data) { return new mx_report{data}; }

mx_status mx_compute_scalar(mx_job* job, const double* xs, int count, double* out_value,
                            mx_report** out_report) {
  if (out_report) *out_report = nullptr;
  if (!job || !xs || !out_value) return fail(MX_ERR_DOMAIN, "null argument");
  return wrap([&]() {
    const meanx::JobConfig& cfg = job->cfg;
    if (count != cfg.arity)
      throw meanx::DimensionError("expected " + std::to_string(cfg.arity) +
                                  " inputs, got " + std::to_string(count));
    const meanx::ScalarBundle bundle = meanx::build_scalar_mean(cfg);
    std::vector<double> inputs(xs, xs + count);
    if (bundle.requires_positive)
      for (double v : inputs)
        if (!(v > 0.0))
          throw meanx::DomainError("mean '" + cfg.mean +
                                   "' needs strictly positive inputs");

    const double tol = cfg.effective_tolerance();
    if (cfg.arity == 2) {
      *out_value = bundle.mean(inputs);
      if (out_report) {
        CommonReport r;
        r.trace = {bundle.space.distance(inputs[0], inputs[1])};
        r.rho = bundle.mean.declared_rho;
        *out_report = make_report(r);
      }
      return MX_OK;
    }

    meanx::MeanSpec<double> top = bundle.mean;
    if (cfg.arity > 3) {
      top = meanx::extend_tower(bundle.space, bundle.mean, cfg.arity - 1, tol / 10.0,
                                cfg.max_iter, cfg.variant)
                .back();
    }
    auto report = meanx::power_converge(bundle.space, top, std::span<const double>(inputs),
                                        tol, cfg.max_iter, cfg.variant);
    *out_value = report.limit;
    if (out_report) *out_report = make_report(from(report));
    if (!report.converged)
      return fail(MX_ERR_NONCONVERGENCE,
                  "diameter " + std::to_string(report.diameter_trace.back()) +
                      " above tolerance after " + std::to_string(report.iterations) +
                      " iterations");
    return MX_OK;
  });
}

mx_status mx_compute_spd(mx_job* job, const double* matrices, int dim, int count,
                         double* out_matrix, mx_report** out_report) {
  if (out_report) *out_report = nullptr;
  if (!job || !matrices || !out_matrix) return fail(MX_ERR_DOMAIN, "null argument");
  return wrap([&]() {
    const meanx::JobConfig& cfg = job->cfg;
    if (count != cfg.arity)
      throw meanx::DimensionError("expected " + std::to_string(cfg.arity) +
                                  " inputs, got " + std::to_string(count));
    const meanx::SpdBundle bundle = meanx::build_spd_mean(cfg, dim);
    std::vector<meanx::la::Matrix> inputs;
    inputs.reserve(count);
    for (int k = 0; k < count; ++k) {
      meanx::la::Matrix m(dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = matrices[k * dim * dim + i * dim + j];
      meanx::la::validate_spd(m, "input matrix " + std::to_string(k + 1));
      inputs.push_back(std::move(m));
    }

    auto store = [&](const meanx::la::Matrix& m) {
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out_matrix[i * dim + j] = m(i, j);
    };

    const double tol = cfg.effective_tolerance();
    if (cfg.arity == 2) {
      store(bundle.mean(inputs));
      if (out_report) {
        CommonReport r;
        r.trace = {bundle.space.distance(inputs[0], inputs[1])};
        r.rho = bundle.mean.declared_rho;
        *out_report = make_report(r);
      }
      return MX_OK;
    }

    meanx::MeanSpec<meanx::la::Matrix> top = bundle.mean;
    if (cfg.arity > 3) {
      top = meanx::extend_tower(bundle.space, bundle.mean, cfg.arity - 1, tol / 10.0,
                                cfg.max_iter, cfg.variant)
                .back();
    }
    auto report =
        meanx::power_converge(bundle.space, top, std::span<const meanx::la::Matrix>(inputs),
                              tol, cfg.max_iter, cfg.variant);
    store(report.limit);
    if (out_report) *out_report = make_report(from(report));
    if (!report.converged)
      return fail(MX_ERR_NONCONVERGENCE,
                  "diameter " + std::to_string(report.diameter_trace.back()) +
                      " above tolerance after " + std::to_string(report.iterations) +
                      " iterations");
    return MX_OK;
  });
}

int mx_report_converged(const mx_report* report) {
  return report && report->data.converged ? 1 : 0;
}

int mx_report_iterations(const mx_report* report) {
  return report ? report->data.iterations : 0;
}

int mx_report_arity(const mx_report* report) { return report ? report->data.arity : 0; }

int mx_report_trace_length(const mx_report* report) {
  return report ? static_cast<int>(report->data.trace.size()) : 0;
}

double mx_report_diameter(const mx_report* report, int index) {
  if (!report || index < 0 || index >= static_cast<int>(report->data.trace.size()))
    return -1.0;
  return report->data.trace[static_cast<std::size_t>(index)];
}

int mx_report_has_rho(const mx_report* report) {
  return report && report->data.rho ? 1 : 0;
}

double mx_report_rho(const mx_report* report) {
  return report && report->data.rho ? *report->data.rho : 0.0;
}

void mx_report_free(mx_report* report) { delete report; }

mx_status mx_audit(mx_job* job, char** out_json) {
  if (!job || !out_json) return fail(MX_ERR_DOMAIN, "null argument");
  *out_json = nullptr;
  return wrap([&]() {
    const auto report = meanx::run_audit(job->cfg);
    *out_json = dup_string(meanx::to_json(report).dump(2));
    return MX_OK;
  });
}

mx_status mx_read_matrix_file(const char* path, double** out_data, int* out_dim,
                              int* out_count) {
  if (!path || !out_data || !out_dim || !out_count)
    return fail(MX_ERR_DOMAIN, "null argument");
  *out_data = nullptr;
  *out_dim = 0;
  *out_count = 0;
  return wrap([&]() {
    const auto mats = meanx::io::read_matrix_file(path);
    if (mats.empty()) return MX_OK;
    const int dim = mats.front().dim();
    for (std::size_t k = 1; k < mats.size(); ++k)
      if (mats[k].dim() != dim)
        throw meanx::DimensionError("matrix " + std::to_string(k + 1) + " has dimension " +
                                    std::to_string(mats[k].dim()) + ", expected " +
                                    std::to_string(dim));
    const std::size_t block = static_cast<std::size_t>(dim) * dim;
    auto* data = static_cast<double*>(std::malloc(mats.size() * block * sizeof(double)));
    if (!data) throw meanx::NumericError("out of memory");
    for (std::size_t k = 0; k < mats.size(); ++k)
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) data[k * block + i * dim + j] = mats[k](i, j);
    *out_data = data;
    *out_dim = dim;
    *out_count = static_cast<int>(mats.size());
    return MX_OK;
  });
}

mx_status mx_format_matrix(const double* data, int dim, char** out_text) {
  if (!data || !out_text) return fail(MX_ERR_DOMAIN, "null argument");
  *out_text = nullptr;
  return wrap([&]() {
    if (dim < 1 || dim > meanx::la::kMaxDim)
      throw meanx::DimensionError("dimension " + std::to_string(dim) + " outside [1, " +
                                  std::to_string(meanx::la::kMaxDim) + "]");
    meanx::la::Matrix m(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = data[i * dim + j];
    *out_text = dup_string(meanx::io::format_matrix(m));
    return MX_OK;
  });
}

}  // extern "C"
