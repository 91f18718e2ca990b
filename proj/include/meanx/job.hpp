// Job configuration shared by the C API, the audit driver and the CLI:
// which mean, which space, how far to extend, and the numeric knobs.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "meanx/iterated_means.hpp"
#include "meanx/means_core.hpp"
#include "meanx/operator_means.hpp"
#include "meanx/scalar_means.hpp"

namespace meanx {

enum class SpaceKind : std::uint8_t { Scalar, Spd };

struct JobConfig {
  std::string mean = "arithmetic";
  SpaceKind space = SpaceKind::Scalar;
  BarycentricVariant variant = BarycentricVariant::Beta;
  int arity = 2;
  std::optional<double> tolerance;  // absent: per-space default
  int max_iter = 10000;
  std::uint64_t seed = 2026;
  std::optional<int> interval_n;  // certify contraction on [(1/n)I, nI]
  int samples = 100;              // audit / certification draws

  // 1e-12 for scalars, 1e-10 in the Thompson metric.
  double effective_tolerance() const {
    if (tolerance) return *tolerance;
    return space == SpaceKind::Spd ? 1e-10 : 1e-12;
  }
};

JobConfig default_job_config();

// Accepts partial objects; unknown keys are rejected. Throws ParseError.
JobConfig job_config_from_json(const nlohmann::json& j);
nlohmann::json job_config_to_json(const JobConfig& cfg);

// mean grammar: arithmetic | geometric | harmonic | logarithmic | agm | hgm
//             | power:<alpha> | quasi:<name> | weighted:<s>
//             | max | left | right          (scalar diagnostic fixtures)
struct MeanName {
  std::string family;
  std::optional<double> parameter;     // power exponent or affine weight
  std::optional<std::string> flavour;  // quasi function name
};
MeanName parse_mean_name(const std::string& name);

// A 2-mean bound to the metric that certifies it, ready for the engine.
struct ScalarBundle {
  MetricSpace<double> space;
  MeanSpec<double> mean;
  std::string metric_name;
  bool requires_positive = true;
};

struct SpdBundle {
  MetricSpace<la::Matrix> space;
  MeanSpec<la::Matrix> mean;
  std::optional<op::IntervalCertificate> certificate;
  std::string metric_name;
};

// Internal tolerances follow the tower schedule: the 2-mean of a composed
// family runs at effective_tolerance() / 10^(arity-2).
ScalarBundle build_scalar_mean(const JobConfig& cfg);
SpdBundle build_spd_mean(const JobConfig& cfg, int dim);

}  // namespace meanx
