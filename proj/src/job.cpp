#include "meanx/job.hpp"

#include <cmath>
#include <set>

#include "meanx/sampling.hpp"

namespace meanx {

JobConfig default_job_config() { return {}; }

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw ParseError("config key '" + key + "': " + why);
}

double expect_positive_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) bad_key(key, "expected a number");
  const double d = v.get<double>();
  if (!(d > 0.0)) bad_key(key, "must be positive");
  return d;
}

int expect_int_at_least(const nlohmann::json& v, const std::string& key, int lo) {
  if (!v.is_number_integer()) bad_key(key, "expected an integer");
  const auto i = v.get<long long>();
  if (i < lo) bad_key(key, "must be at least " + std::to_string(lo));
  if (i > 1000000000LL) bad_key(key, "implausibly large");
  return static_cast<int>(i);
}

}  // namespace

JobConfig job_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  static const std::set<std::string> known = {"mean",     "space", "variant", "arity",     "tolerance",
                                              "max_iter", "seed",  "interval_n", "samples"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) bad_key(key, "unknown key");

  JobConfig cfg;
  if (j.contains("mean")) {
    if (!j["mean"].is_string()) bad_key("mean", "expected a string");
    cfg.mean = j["mean"].get<std::string>();
    parse_mean_name(cfg.mean);  // reject bad names at config time
  }
  if (j.contains("space")) {
    const auto s = j["space"].is_string() ? j["space"].get<std::string>() : "";
    if (s == "scalar")
      cfg.space = SpaceKind::Scalar;
    else if (s == "spd")
      cfg.space = SpaceKind::Spd;
    else
      bad_key("space", "expected \"scalar\" or \"spd\"");
  }
  if (j.contains("variant")) {
    const auto s = j["variant"].is_string() ? j["variant"].get<std::string>() : "";
    if (s == "beta")
      cfg.variant = BarycentricVariant::Beta;
    else if (s == "beta_star")
      cfg.variant = BarycentricVariant::BetaStar;
    else
      bad_key("variant", "expected \"beta\" or \"beta_star\"");
  }
  if (j.contains("arity")) cfg.arity = expect_int_at_least(j["arity"], "arity", 2);
  if (j.contains("tolerance") && !j["tolerance"].is_null())
    cfg.tolerance = expect_positive_number(j["tolerance"], "tolerance");
  if (j.contains("max_iter")) cfg.max_iter = expect_int_at_least(j["max_iter"], "max_iter", 1);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      bad_key("seed", "expected an integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("interval_n") && !j["interval_n"].is_null())
    cfg.interval_n = expect_int_at_least(j["interval_n"], "interval_n", 1);
  if (j.contains("samples")) cfg.samples = expect_int_at_least(j["samples"], "samples", 1);
  return cfg;
}

nlohmann::json job_config_to_json(const JobConfig& cfg) {
  nlohmann::json j;
  j["mean"] = cfg.mean;
  j["space"] = cfg.space == SpaceKind::Spd ? "spd" : "scalar";
  j["variant"] = cfg.variant == BarycentricVariant::BetaStar ? "beta_star" : "beta";
  j["arity"] = cfg.arity;
  if (cfg.tolerance)
    j["tolerance"] = *cfg.tolerance;
  else
    j["tolerance"] = nullptr;
  j["max_iter"] = cfg.max_iter;
  j["seed"] = cfg.seed;
  if (cfg.interval_n)
    j["interval_n"] = *cfg.interval_n;
  else
    j["interval_n"] = nullptr;
  j["samples"] = cfg.samples;
  return j;
}

MeanName parse_mean_name(const std::string& name) {
  MeanName out;
  const auto colon = name.find(':');
  out.family = name.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);

  auto parse_number = [&](const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(arg, &used);
    } catch (const std::exception&) {
      throw ParseError(std::string("mean '") + name + "': " + what + " is not a number");
    }
    if (used != arg.size())
      throw ParseError(std::string("mean '") + name + "': trailing characters after " + what);
    return v;
  };

  static const std::set<std::string> plain = {"arithmetic", "geometric", "harmonic", "logarithmic",
                                              "agm",        "hgm",       "max",      "left",
                                              "right"};
  if (plain.count(out.family)) {
    if (colon != std::string::npos)
      throw ParseError("mean '" + name + "': family takes no parameter");
    return out;
  }
  if (out.family == "power") {
    const double a = parse_number("exponent");
    if (a == 0.0) throw ParseError("mean '" + name + "': exponent must be nonzero");
    out.parameter = a;
    return out;
  }
  if (out.family == "weighted") {
    const double s = parse_number("weight");
    if (!(s > 0.0) || !(s < 1.0))
      throw ParseError("mean '" + name + "': weight must lie strictly in (0, 1)");
    out.parameter = s;
    return out;
  }
  if (out.family == "quasi") {
    static const std::set<std::string> flavours = {"identity", "log", "reciprocal", "square"};
    if (!flavours.count(arg))
      throw ParseError("mean '" + name +
                       "': unknown function (expected identity, log, reciprocal or square)");
    out.flavour = arg;
    return out;
  }
  throw ParseError("unknown mean '" + name + "'");
}

namespace {

double composed_tolerance(const JobConfig& cfg) {
  return cfg.effective_tolerance() * std::pow(10.0, -std::max(0, cfg.arity - 2));
}

MeanSpec<double> scalar_fixture(const std::string& family) {
  MeanSpec<double> m;
  m.arity = 2;
  if (family == "max") {
    m.symmetric = true;
    m.evaluate = [](std::span<const double> xs) { return std::max(xs[0], xs[1]); };
  } else if (family == "left") {
    m.evaluate = [](std::span<const double> xs) { return xs[0]; };
  } else {
    m.evaluate = [](std::span<const double> xs) { return xs[1]; };
  }
  return m;
}

// Empirical interval factor for the nonexpansive leg of a scalar composition.
double scalar_interval_rho(const MeanSpec<double>& nu, const MetricSpace<double>& metric, int n,
                           int samples, std::uint64_t seed) {
  sample::Rng rng(seed);
  auto est = estimate_contraction(metric, nu, samples, [&rng, n]() {
    return sample::log_uniform(rng, 1.0 / n, static_cast<double>(n));
  });
  return est.rho * 1.05;
}

}  // namespace

ScalarBundle build_scalar_mean(const JobConfig& cfg) {
  const MeanName name = parse_mean_name(cfg.mean);
  ScalarBundle b;

  if (name.family == "arithmetic" || (name.family == "quasi" && *name.flavour == "identity")) {
    b.space = scalar::absolute_metric();
    b.mean = scalar::arithmetic_mean();
    b.metric_name = "absolute";
    b.requires_positive = false;
    return b;
  }
  if (name.family == "geometric" || (name.family == "quasi" && *name.flavour == "log")) {
    b.space = scalar::log_metric();
    b.mean = scalar::geometric_mean();
    b.metric_name = "log";
    return b;
  }
  if (name.family == "harmonic" || (name.family == "quasi" && *name.flavour == "reciprocal")) {
    b.space = scalar::pullback_metric([](double x) { return 1.0 / x; });
    b.mean = scalar::harmonic_mean();
    b.metric_name = "pullback:reciprocal";
    return b;
  }
  if (name.family == "power" || (name.family == "quasi" && *name.flavour == "square")) {
    const double alpha = name.family == "power" ? *name.parameter : 2.0;
    auto f = [alpha](double x) { return std::pow(x, alpha); };
    auto finv = [alpha](double x) { return std::pow(x, 1.0 / alpha); };
    b.space = scalar::pullback_metric(f);
    b.mean = scalar::quasi_arithmetic(f, finv);
    b.metric_name = "pullback:power";
    return b;
  }
  if (name.family == "weighted") {
    b.space = scalar::absolute_metric();
    b.mean = scalar::weighted_affine(*name.parameter);
    b.metric_name = "absolute";
    b.requires_positive = false;
    return b;
  }
  if (name.family == "logarithmic" || name.family == "agm" || name.family == "hgm") {
    const double tol = composed_tolerance(cfg);
    b.space = scalar::log_metric();
    b.metric_name = "log";
    if (name.family == "logarithmic")
      b.mean = scalar::logarithmic_mean(tol, cfg.max_iter);
    else if (name.family == "agm")
      b.mean = scalar::agm_mean(tol, cfg.max_iter);
    else
      b.mean = scalar::hgm_mean(tol, cfg.max_iter);
    if (cfg.interval_n) {
      auto nu = name.family == "hgm" ? scalar::harmonic_mean() : scalar::arithmetic_mean();
      nu.declared_rho.reset();
      const double rho =
          scalar_interval_rho(nu, b.space, *cfg.interval_n, cfg.samples, cfg.seed);
      b.mean.declared_rho = std::max(0.5, rho);
    }
    return b;
  }
  // max / left / right: diagnostic fixtures, deliberately without a factor
  b.space = scalar::absolute_metric();
  b.mean = scalar_fixture(name.family);
  b.metric_name = "absolute";
  b.requires_positive = false;
  return b;
}

SpdBundle build_spd_mean(const JobConfig& cfg, int dim) {
  if (dim < 1 || dim > la::kMaxDim)
    throw DimensionError("matrix dimension " + std::to_string(dim) + " outside [1, " +
                         std::to_string(la::kMaxDim) + "]");
  const MeanName name = parse_mean_name(cfg.mean);
  SpdBundle b;
  b.space = op::thompson_space();
  b.metric_name = "thompson";

  auto certify = [&](op::OperatorMean m) {
    if (cfg.interval_n) {
      m = op::with_certificate(std::move(m), la::OrderInterval{*cfg.interval_n}, dim, cfg.samples,
                               cfg.seed);
    }
    b.mean = m.spec;
    b.certificate = m.certificate;
  };

  if (name.family == "arithmetic" || (name.family == "quasi" && *name.flavour == "identity")) {
    certify(op::arithmetic_mean());
    return b;
  }
  if (name.family == "harmonic" || (name.family == "quasi" && *name.flavour == "reciprocal")) {
    certify(op::harmonic_mean());
    return b;
  }
  if (name.family == "geometric") {
    b.mean = op::geometric_mean().spec;  // midpoint mean: factor 1/2 everywhere
    return b;
  }
  if (name.family == "weighted") {
    const double s = *name.parameter;
    op::OperatorMean m;
    m.name = cfg.mean;
    m.spec.arity = 2;
    m.spec.symmetric = s == 0.5;
    m.spec.evaluate = [s](std::span<const la::Matrix> xs) {
      la::Matrix r = s * xs[0] + (1.0 - s) * xs[1];
      r.symmetrize();
      return r;
    };
    certify(std::move(m));
    return b;
  }
  if (name.family == "power" || (name.family == "quasi" && *name.flavour == "square")) {
    const double alpha = name.family == "power" ? *name.parameter : 2.0;
    op::OperatorMean m;
    m.name = cfg.mean;
    m.spec.arity = 2;
    m.spec.symmetric = true;
    m.spec.evaluate = [alpha](std::span<const la::Matrix> xs) {
      la::Matrix mean = op::arithmetic(la::matrix_power(xs[0], alpha),
                                       la::matrix_power(xs[1], alpha));
      return la::matrix_power(mean, 1.0 / alpha);
    };
    // the power map carries the mean onto the arithmetic one, so measure
    // distances between the mapped operands
    b.space.distance = [alpha](const la::Matrix& x, const la::Matrix& y) {
      return la::thompson_distance(la::matrix_power(x, alpha), la::matrix_power(y, alpha));
    };
    b.metric_name = "thompson:power";
    if (cfg.interval_n) {
      const int n = *cfg.interval_n;
      sample::Rng rng(cfg.seed);
      auto est = estimate_contraction(b.space, m.spec, cfg.samples, [&, n]() {
        return la::matrix_power(sample::random_spd(rng, dim, 1.0 / n, n), 1.0 / alpha);
      });
      m.certificate = op::IntervalCertificate{la::OrderInterval{n}, est.rho * 1.05};
      m.spec.declared_rho = est.rho * 1.05;
    }
    b.mean = m.spec;
    b.certificate = m.certificate;
    return b;
  }
  if (name.family == "quasi" && *name.flavour == "log") {
    // log-Euclidean midpoint: arithmetic in log coordinates, an exact
    // midpoint for the order-unit norm pulled back through the matrix log
    b.mean.arity = 2;
    b.mean.symmetric = true;
    b.mean.declared_rho = 0.5;
    b.mean.evaluate = [](std::span<const la::Matrix> xs) {
      la::Matrix m = la::matrix_exp(0.5 * (la::matrix_log(xs[0]) + la::matrix_log(xs[1])));
      m.symmetrize();
      return m;
    };
    b.space.distance = [](const la::Matrix& x, const la::Matrix& y) {
      return la::order_unit_norm(la::matrix_log(x) - la::matrix_log(y));
    };
    b.metric_name = "log-euclidean";
    return b;
  }
  if (name.family == "logarithmic" || name.family == "agm" || name.family == "hgm") {
    const double tol = composed_tolerance(cfg);
    op::OperatorMean m;
    if (name.family == "logarithmic")
      m = op::logarithmic_mean(tol, cfg.max_iter);
    else if (name.family == "agm")
      m = op::agm_mean(tol, cfg.max_iter);
    else
      m = op::hgm_mean(tol, cfg.max_iter);
    if (cfg.interval_n) {
      // the composite contracts like its nonexpansive leg, floored at the
      // midpoint factor
      auto nu = name.family == "hgm" ? op::harmonic_mean() : op::arithmetic_mean();
      auto est = op::certify_contraction(nu.spec, la::OrderInterval{*cfg.interval_n}, dim,
                                         cfg.samples, cfg.seed);
      const double rho = std::max(0.5, est.rho * 1.05);
      m.certificate = op::IntervalCertificate{la::OrderInterval{*cfg.interval_n}, rho};
      m.spec.declared_rho = rho;
    }
    b.mean = m.spec;
    b.certificate = m.certificate;
    return b;
  }
  throw ParseError("mean '" + cfg.mean + "' is not defined on the spd space");
}

}  // namespace meanx
