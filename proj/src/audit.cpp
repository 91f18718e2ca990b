#include "meanx/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "meanx/sampling.hpp"

namespace meanx {

namespace {

constexpr double kMetricSlack = 1e-9;
constexpr double kLoewnerSlack = 1e-7;
constexpr double kOrderSlack = 1e-8;

struct Worst {
  double margin = -std::numeric_limits<double>::infinity();
  nlohmann::json witness;

  template <class MakeWitness>
  void offer(double value, MakeWitness&& make) {
    if (value > margin) {
      margin = value;
      witness = make();
    }
  }
};

PropertyResult finish(std::string name, const Worst& w, double slack) {
  PropertyResult r;
  r.property = std::move(name);
  r.margin = w.margin;
  r.pass = w.margin <= slack;
  r.witness = r.pass ? nlohmann::json(nullptr) : w.witness;
  return r;
}

template <class Body>
PropertyResult guarded(const std::string& name, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    PropertyResult r;
    r.property = name;
    r.pass = false;
    r.margin = std::numeric_limits<double>::infinity();
    r.witness = nlohmann::json{{"error", e.what()}};
    return r;
  }
}

nlohmann::json mat_json(const la::Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

int heavy_count(int samples) { return std::clamp(samples / 10, 4, 20); }

// ---- scalar suite -------------------------------------------------------

AuditReport audit_scalar(const JobConfig& cfg) {
  const ScalarBundle bundle = build_scalar_mean(cfg);
  const auto& dist = bundle.space.distance;
  const auto& mean = bundle.mean;
  const double lo = 1.0 / cfg.interval_n.value_or(4);
  const double hi = static_cast<double>(cfg.interval_n.value_or(4));
  const int samples = cfg.samples;
  const int heavy = heavy_count(samples);

  AuditReport report;
  report.config = cfg;
  report.metric_name = bundle.metric_name;
  auto& props = report.properties;

  std::uint64_t seed = cfg.seed;
  auto fresh = [&seed]() { return sample::Rng(seed++); };

  {
    auto rng = fresh();
    Worst w;
    for (int i = 0; i < samples; ++i) {
      const double x = sample::log_uniform(rng, lo, hi);
      const double v = mean(x, x);
      w.offer(dist(v, x), [&] { return nlohmann::json{{"x", x}, {"mean", v}}; });
    }
    props.push_back(finish("idempotent", w, kMetricSlack));
  }

  if (mean.symmetric) {
    auto rng = fresh();
    Worst w;
    for (int i = 0; i < samples; ++i) {
      const double x = sample::log_uniform(rng, lo, hi);
      const double y = sample::log_uniform(rng, lo, hi);
      w.offer(dist(mean(x, y), mean(y, x)),
              [&] { return nlohmann::json{{"x", x}, {"y", y}}; });
    }
    props.push_back(finish("symmetry", w, kMetricSlack));
  }

  {
    auto rng = fresh();
    Worst w;
    for (int i = 0; i < samples; ++i) {
      const double x = sample::log_uniform(rng, lo, hi);
      const double y = sample::log_uniform(rng, lo, hi);
      const double v = mean(x, y);
      const double a = std::min(x, y), b = std::max(x, y);
      const double viol = std::max(a - v, v - b) / b;
      w.offer(viol, [&] { return nlohmann::json{{"x", x}, {"y", y}, {"mean", v}}; });
    }
    props.push_back(finish("betweenness", w, kMetricSlack));
  }

  {
    auto rng = fresh();
    Worst w;
    std::uniform_real_distribution<double> bump(0.0, 1.0);
    for (int i = 0; i < samples; ++i) {
      const double x = sample::log_uniform(rng, lo, hi);
      const double y = sample::log_uniform(rng, lo, hi);
      const double x2 = x * (1.0 + bump(rng));
      const double y2 = y * (1.0 + bump(rng));
      const double m1 = mean(x, y), m2 = mean(x2, y2);
      w.offer((m1 - m2) / m2, [&] {
        return nlohmann::json{{"x", x}, {"y", y}, {"x2", x2}, {"y2", y2},
                              {"mean", m1},       {"mean2", m2}};
      });
    }
    props.push_back(finish("monotone2", w, kMetricSlack));
  }

  {
    auto rng = fresh();
    Worst w;
    for (int i = 0; i < samples; ++i) {
      const double a = sample::log_uniform(rng, lo, hi);
      const double b = sample::log_uniform(rng, lo, hi);
      const double c = sample::log_uniform(rng, lo, hi);
      const double e = sample::log_uniform(rng, lo, hi);
      const double lhs = dist(mean(a, b), mean(c, e));
      const double rhs = std::max(dist(a, c), dist(b, e));
      w.offer(lhs - rhs, [&] {
        return nlohmann::json{{"x", {a, b}}, {"y", {c, e}}, {"lhs", lhs}, {"rhs", rhs}};
      });
    }
    props.push_back(finish("nonexpansive", w, kMetricSlack));
  }

  props.push_back(guarded("contraction", [&] {
    auto rng = fresh();
    auto est = estimate_contraction(bundle.space, mean, samples, [&] {
      return sample::log_uniform(rng, lo, hi);
    });
    const double bound =
        mean.declared_rho ? *mean.declared_rho + 1e-6 : 1.0 - 1e-6;
    PropertyResult r;
    r.property = "contraction";
    r.margin = est.rho;
    r.pass = est.rho <= bound;
    r.witness = r.pass ? nlohmann::json(nullptr)
                       : nlohmann::json{{"anchor", est.witness_anchor},
                                        {"x", est.witness_x},
                                        {"y", est.witness_y},
                                        {"bound", bound}};
    return r;
  }));

  const int tower_arity = std::clamp(cfg.arity, 3, 4);
  const double tower_tol = 1e-10;

  props.push_back(guarded("tower_invariance", [&] {
    auto rng = fresh();
    auto levels =
        extend_tower(bundle.space, mean, tower_arity, tower_tol, cfg.max_iter, cfg.variant);
    const auto& ext = levels.back();
    const auto& inner = tower_arity == 3 ? mean : levels[levels.size() - 2];
    Worst w;
    for (int i = 0; i < heavy; ++i) {
      std::vector<double> xs = sample::random_positive_tuple(rng, tower_arity, lo, hi);
      const double res = beta_invariance_residual(
          bundle.space, ext, inner, std::span<const double>(xs), cfg.variant);
      w.offer(res, [&] { return nlohmann::json{{"tuple", xs}}; });
    }
    return finish("tower_invariance", w, kOrderSlack);
  }));

  props.push_back(guarded("monotone_tower", [&] {
    auto rng = fresh();
    auto levels =
        extend_tower(bundle.space, mean, tower_arity, tower_tol, cfg.max_iter, cfg.variant);
    const auto& ext = levels.back();
    std::uniform_real_distribution<double> bump(0.0, 1.0);
    Worst w;
    for (int i = 0; i < heavy; ++i) {
      std::vector<double> xs = sample::random_positive_tuple(rng, tower_arity, lo, hi);
      std::vector<double> ys = xs;
      for (auto& y : ys) y *= 1.0 + bump(rng);
      const double mx = ext(xs), my = ext(ys);
      w.offer((mx - my) / my, [&] {
        return nlohmann::json{{"x", xs}, {"y", ys}, {"mean_x", mx}, {"mean_y", my}};
      });
    }
    return finish("monotone_tower", w, kOrderSlack);
  }));

  props.push_back(guarded("order_log_leq_agm", [&] {
    auto rng = fresh();
    auto log_space = scalar::log_metric();
    auto l3 = extend_tower(log_space, scalar::logarithmic_mean(1e-11, cfg.max_iter), 3,
                           tower_tol, cfg.max_iter, cfg.variant)
                  .back();
    auto agm3 = extend_tower(log_space, scalar::agm_mean(1e-11, cfg.max_iter), 3, tower_tol,
                             cfg.max_iter, cfg.variant)
                    .back();
    Worst w;
    for (int i = 0; i < heavy; ++i) {
      std::vector<double> xs = sample::random_positive_tuple(rng, 3, lo, hi);
      const double l = l3(xs), a = agm3(xs);
      w.offer((l - a) / a, [&] {
        return nlohmann::json{{"tuple", xs}, {"log_mean", l}, {"agm", a}};
      });
    }
    return finish("order_log_leq_agm", w, kOrderSlack);
  }));

  props.push_back(guarded("order_geom_leq_arith", [&] {
    auto rng = fresh();
    auto g3 = extend_tower(scalar::log_metric(), scalar::geometric_mean(), 3, tower_tol,
                           cfg.max_iter, cfg.variant)
                  .back();
    auto a3 = extend_tower(scalar::absolute_metric(), scalar::arithmetic_mean(), 3, tower_tol,
                           cfg.max_iter, cfg.variant)
                  .back();
    Worst w;
    for (int i = 0; i < heavy; ++i) {
      std::vector<double> xs = sample::random_positive_tuple(rng, 3, lo, hi);
      const double g = g3(xs), a = a3(xs);
      w.offer((g - a) / a, [&] {
        return nlohmann::json{{"tuple", xs}, {"geometric", g}, {"arithmetic", a}};
      });
    }
    return finish("order_geom_leq_arith", w, kOrderSlack);
  }));

  report.pass = std::all_of(props.begin(), props.end(),
                            [](const PropertyResult& p) { return p.pass; });
  return report;
}

// ---- spd suite ----------------------------------------------------------

AuditReport audit_spd(const JobConfig& cfg) {
  const int n_iv = cfg.interval_n.value_or(4);
  const double lo = 1.0 / n_iv;
  const double hi = static_cast<double>(n_iv);
  const SpdBundle bundle = build_spd_mean(cfg, 4);
  const auto& mean = bundle.mean;
  const auto& dist = bundle.space.distance;
  const int samples = cfg.samples;
  const int heavy = heavy_count(samples);

  AuditReport report;
  report.config = cfg;
  report.metric_name = bundle.metric_name;
  auto& props = report.properties;

  std::uint64_t seed = cfg.seed;
  auto fresh = [&seed]() { return sample::Rng(seed++); };
  auto dim_at = [](int i) { return 2 + i % 5; };

  {
    auto rng = fresh();
    Worst w;
    for (int i = 0; i < samples; ++i) {
      const int d = dim_at(i);
      auto a = sample::random_spd(rng, d, lo, hi);
      auto b = sample::random_spd(rng, d, lo, hi);
      auto c = sample::random_spd(rng, d, lo, hi);
      const double viol =
          la::thompson_distance(a + b, a + c) - la::thompson_distance(b, c);
      w.offer(viol, [&] {
        return nlohmann::json{{"a", mat_json(a)}, {"b", mat_json(b)}, {"c", mat_json(c)}};
      });
    }
    props.push_back(finish("thompson_translation", w, kMetricSlack));
  }

  {
    auto rng = fresh();
    Worst w;
    for (int i = 0; i < samples; ++i) {
      const int d = dim_at(i);
      auto a1 = sample::random_spd(rng, d, lo, hi);
      auto a2 = a1 + sample::random_psd(rng, d, hi);
      auto b = sample::random_spd(rng, d, lo, hi);
      auto c = sample::random_spd(rng, d, lo, hi);
      const double viol = la::thompson_distance(a2 + b, a2 + c) -
                          la::thompson_distance(a1 + b, a1 + c);
      w.offer(viol, [&] {
        return nlohmann::json{
            {"a1", mat_json(a1)}, {"a2", mat_json(a2)}, {"b", mat_json(b)}, {"c", mat_json(c)}};
      });
    }
    props.push_back(finish("thompson_translation_order", w, kMetricSlack));
  }

  {
    auto rng = fresh();
    Worst w;
    for (int i = 0; i < samples; ++i) {
      const int d = dim_at(i);
      auto a = sample::random_spd(rng, d, lo, hi);
      auto b = sample::random_spd(rng, d, lo, hi);
      const double r = sample::log_uniform(rng, 0.125, 8.0);
      const double viol =
          std::abs(la::thompson_distance(r * a, r * b) - la::thompson_distance(a, b));
      w.offer(viol, [&] {
        return nlohmann::json{{"a", mat_json(a)}, {"b", mat_json(b)}, {"r", r}};
      });
    }
    props.push_back(finish("thompson_scaling", w, kMetricSlack));
  }

  {
    auto rng = fresh();
    Worst w;
    for (int i = 0; i < samples; ++i) {
      const int d = dim_at(i);
      auto a = sample::random_spd(rng, d, lo, hi);
      auto b = sample::random_spd(rng, d, lo, hi);
      auto c = sample::random_spd(rng, d, lo, hi);
      auto e = sample::random_spd(rng, d, lo, hi);
      const double viol =
          la::thompson_distance(a + b, c + e) -
          std::max(la::thompson_distance(a, c), la::thompson_distance(b, e));
      w.offer(viol, [&] {
        return nlohmann::json{{"a", mat_json(a)},
                              {"b", mat_json(b)},
                              {"c", mat_json(c)},
                              {"d", mat_json(e)}};
      });
    }
    props.push_back(finish("thompson_sum_nonexpansive", w, kMetricSlack));
  }

  {
    auto rng = fresh();
    Worst w;
    for (int i = 0; i < samples; ++i) {
      const int d = dim_at(i);
      auto a = sample::random_spd(rng, d, lo, hi);
      auto b = sample::random_spd(rng, d, lo, hi);
      const double viol = std::abs(la::thompson_distance(la::matrix_inverse(a),
                                                         la::matrix_inverse(b)) -
                                   la::thompson_distance(a, b));
      w.offer(viol,
              [&] { return nlohmann::json{{"a", mat_json(a)}, {"b", mat_json(b)}}; });
    }
    props.push_back(finish("thompson_inversion", w, kMetricSlack));
  }

  {
    auto rng = fresh();
    Worst w;
    for (int i = 0; i < samples; ++i) {
      const int d = dim_at(i);
      auto a = sample::random_spd(rng, d, lo, hi);
      auto b = sample::random_spd(rng, d, lo, hi);
      auto c = sample::random_spd(rng, d, lo, hi);
      const double viol = la::thompson_distance(op::geometric(a, c), op::geometric(b, c)) -
                          0.5 * la::thompson_distance(a, b);
      w.offer(viol, [&] {
        return nlohmann::json{{"a", mat_json(a)}, {"b", mat_json(b)}, {"c", mat_json(c)}};
      });
    }
    props.push_back(finish("geometric_convex", w, kMetricSlack));
  }

  {
    auto rng = fresh();
    Worst w;
    for (int i = 0; i < samples; ++i) {
      const int d = dim_at(i);
      auto a = sample::random_spd(rng, d, lo, hi);
      auto b = sample::random_spd(rng, d, lo, hi);
      auto g = op::geometric(a, b);
      const double half = 0.5 * la::thompson_distance(a, b);
      const double viol = std::max(std::abs(la::thompson_distance(a, g) - half),
                                   std::abs(la::thompson_distance(g, b) - half));
      w.offer(viol,
              [&] { return nlohmann::json{{"a", mat_json(a)}, {"b", mat_json(b)}}; });
    }
    props.push_back(finish("geometric_midpoint", w, kMetricSlack));
  }

  props.push_back(guarded("idempotent", [&] {
    auto rng = fresh();
    Worst w;
    for (int i = 0; i < samples; ++i) {
      auto a = sample::random_spd(rng, dim_at(i), lo, hi);
      w.offer(dist(mean(a, a), a), [&] { return nlohmann::json{{"a", mat_json(a)}}; });
    }
    return finish("idempotent", w, kMetricSlack);
  }));

  if (mean.symmetric) {
    props.push_back(guarded("symmetry", [&] {
      auto rng = fresh();
      Worst w;
      for (int i = 0; i < samples; ++i) {
        const int d = dim_at(i);
        auto a = sample::random_spd(rng, d, lo, hi);
        auto b = sample::random_spd(rng, d, lo, hi);
        w.offer(dist(mean(a, b), mean(b, a)),
                [&] { return nlohmann::json{{"a", mat_json(a)}, {"b", mat_json(b)}}; });
      }
      return finish("symmetry", w, kMetricSlack);
    }));
  }

  props.push_back(guarded("nonexpansive", [&] {
    auto rng = fresh();
    Worst w;
    for (int i = 0; i < samples; ++i) {
      const int d = dim_at(i);
      auto a = sample::random_spd(rng, d, lo, hi);
      auto b = sample::random_spd(rng, d, lo, hi);
      auto c = sample::random_spd(rng, d, lo, hi);
      auto e = sample::random_spd(rng, d, lo, hi);
      const double viol = dist(mean(a, b), mean(c, e)) - std::max(dist(a, c), dist(b, e));
      w.offer(viol, [&] {
        return nlohmann::json{{"a", mat_json(a)},
                              {"b", mat_json(b)},
                              {"c", mat_json(c)},
                              {"d", mat_json(e)}};
      });
    }
    return finish("nonexpansive", w, kMetricSlack);
  }));

  props.push_back(guarded("contraction", [&] {
    auto rng = fresh();
    int i = 0;
    auto est = estimate_contraction(bundle.space, mean, samples, [&] {
      return sample::random_spd(rng, dim_at(i++ / 3), lo, hi);
    });
    const double bound =
        mean.declared_rho ? *mean.declared_rho + 1e-6 : 1.0 - 1e-6;
    PropertyResult r;
    r.property = "contraction";
    r.margin = est.rho;
    r.pass = est.rho <= bound;
    r.witness = r.pass ? nlohmann::json(nullptr)
                       : nlohmann::json{{"anchor", mat_json(est.witness_anchor)},
                                        {"x", mat_json(est.witness_x)},
                                        {"y", mat_json(est.witness_y)},
                                        {"bound", bound}};
    return r;
  }));

  props.push_back(guarded("monotone2", [&] {
    auto rng = fresh();
    Worst w;
    for (int i = 0; i < samples; ++i) {
      const int d = dim_at(i);
      auto a = sample::random_spd(rng, d, lo, hi);
      auto b = sample::random_spd(rng, d, lo, hi);
      auto a2 = a + sample::random_psd(rng, d, 0.5);
      auto b2 = b + sample::random_psd(rng, d, 0.5);
      const double viol = -la::min_eigenvalue(mean(a2, b2) - mean(a, b));
      w.offer(viol, [&] {
        return nlohmann::json{
            {"a", mat_json(a)}, {"b", mat_json(b)}, {"a2", mat_json(a2)}, {"b2", mat_json(b2)}};
      });
    }
    return finish("monotone2", w, kLoewnerSlack);
  }));

  const int tower_arity = std::clamp(cfg.arity, 3, 4);
  const double tower_tol = 1e-8;

  props.push_back(guarded("tower_invariance", [&] {
    auto rng = fresh();
    auto levels =
        extend_tower(bundle.space, mean, tower_arity, tower_tol, cfg.max_iter, cfg.variant);
    const auto& ext = levels.back();
    const auto& inner = tower_arity == 3 ? mean : levels[levels.size() - 2];
    Worst w;
    for (int i = 0; i < heavy; ++i) {
      auto xs = sample::random_spd_tuple(rng, tower_arity, 2 + i % 3, lo, hi);
      const double res = beta_invariance_residual(
          bundle.space, ext, inner, std::span<const la::Matrix>(xs), cfg.variant);
      w.offer(res, [&] {
        nlohmann::json tuple = nlohmann::json::array();
        for (const auto& x : xs) tuple.push_back(mat_json(x));
        return nlohmann::json{{"tuple", tuple}};
      });
    }
    return finish("tower_invariance", w, 1e-6);
  }));

  props.push_back(guarded("monotone_tower", [&] {
    auto rng = fresh();
    auto levels =
        extend_tower(bundle.space, mean, tower_arity, tower_tol, cfg.max_iter, cfg.variant);
    const auto& ext = levels.back();
    Worst w;
    for (int i = 0; i < heavy; ++i) {
      const int d = 2 + i % 3;
      auto xs = sample::random_spd_tuple(rng, tower_arity, d, lo, hi);
      auto ys = xs;
      for (auto& y : ys) y = y + sample::random_psd(rng, d, 0.5);
      const double viol = -la::min_eigenvalue(ext(ys) - ext(xs));
      w.offer(viol, [&] {
        nlohmann::json jx = nlohmann::json::array(), jy = nlohmann::json::array();
        for (const auto& x : xs) jx.push_back(mat_json(x));
        for (const auto& y : ys) jy.push_back(mat_json(y));
        return nlohmann::json{{"x", jx}, {"y", jy}};
      });
    }
    return finish("monotone_tower", w, kLoewnerSlack);
  }));

  props.push_back(guarded("order_log_leq_agm", [&] {
    auto rng = fresh();
    auto space = op::thompson_space();
    auto l3 = extend_tower(space, op::logarithmic_mean(1e-9, cfg.max_iter).spec, 3, tower_tol,
                           cfg.max_iter, cfg.variant)
                  .back();
    auto agm3 = extend_tower(space, op::agm_mean(1e-9, cfg.max_iter).spec, 3, tower_tol,
                             cfg.max_iter, cfg.variant)
                    .back();
    Worst w;
    for (int i = 0; i < heavy; ++i) {
      auto xs = sample::random_spd_tuple(rng, 3, 2 + i % 3, lo, hi);
      const double viol = -la::min_eigenvalue(agm3(xs) - l3(xs));
      w.offer(viol, [&] {
        nlohmann::json tuple = nlohmann::json::array();
        for (const auto& x : xs) tuple.push_back(mat_json(x));
        return nlohmann::json{{"tuple", tuple}};
      });
    }
    return finish("order_log_leq_agm", w, kOrderSlack);
  }));

  props.push_back(guarded("order_geom_leq_arith", [&] {
    auto rng = fresh();
    auto space = op::thompson_space();
    auto g3 = extend_tower(space, op::geometric_mean().spec, 3, tower_tol, cfg.max_iter,
                           cfg.variant)
                  .back();
    auto a3 = extend_tower(space, op::arithmetic_mean().spec, 3, tower_tol, cfg.max_iter,
                           cfg.variant)
                  .back();
    Worst w;
    for (int i = 0; i < heavy; ++i) {
      auto xs = sample::random_spd_tuple(rng, 3, 2 + i % 3, lo, hi);
      const double viol = -la::min_eigenvalue(a3(xs) - g3(xs));
      w.offer(viol, [&] {
        nlohmann::json tuple = nlohmann::json::array();
        for (const auto& x : xs) tuple.push_back(mat_json(x));
        return nlohmann::json{{"tuple", tuple}};
      });
    }
    return finish("order_geom_leq_arith", w, kOrderSlack);
  }));

  report.pass = std::all_of(props.begin(), props.end(),
                            [](const PropertyResult& p) { return p.pass; });
  return report;
}

}  // namespace

AuditReport run_audit(const JobConfig& cfg) {
  return cfg.space == SpaceKind::Spd ? audit_spd(cfg) : audit_scalar(cfg);
}

nlohmann::json to_json(const AuditReport& report) {
  nlohmann::json props = nlohmann::json::array();
  for (const auto& p : report.properties)
    props.push_back({{"property", p.property},
                     {"pass", p.pass},
                     {"margin", p.margin},
                     {"witness", p.witness}});
  nlohmann::json config = job_config_to_json(report.config);
  config["tolerance"] = report.config.effective_tolerance();
  return {{"config", std::move(config)},
          {"metric", report.metric_name},
          {"properties", props},
          {"pass", report.pass}};
}

}  // namespace meanx
