#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "meanx/job.hpp"

namespace meanx {

// One sampled property check. margin is the worst observed value of the
// property's violation functional (lhs - rhs for inequalities, |lhs - rhs|
// for equalities, the raw estimate for contraction factors); pass compares
// it against the property's slack. witness holds the violating sample when
// the check fails and is null otherwise.
struct PropertyResult {
  std::string property;
  bool pass = false;
  double margin = 0.0;
  nlohmann::json witness;
};

struct AuditReport {
  JobConfig config;
  std::string metric_name;
  std::vector<PropertyResult> properties;
  bool pass = false;
};

AuditReport run_audit(const JobConfig& cfg);

nlohmann::json to_json(const AuditReport& report);

}  // namespace meanx
