#include "negdimcd/check_report.hpp"

#include <cmath>
#include <utility>

namespace negdimcd {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "true";
    case CheckStatus::kFail: return "false";
    case CheckStatus::kVacuous: return "vacuous";
    case CheckStatus::kInconclusive: return "inconclusive";
  }
  return "?";
}

void CheckReport::record(double margin, std::vector<double> location, bool keep_sample) {
  if (std::isnan(margin)) {
    record_failure(std::move(location), "margin evaluated to NaN");
    return;
  }
  ++n_evaluations;
  if (keep_sample) samples.push_back({location, margin});
  if (margin < worst_margin) {
    worst_margin = margin;
    worst_location = std::move(location);
  }
}

void CheckReport::record_trivial() {
  ++n_evaluations;
  ++n_trivial;
}

void CheckReport::record_failure(std::vector<double> location, std::string diagnostic) {
  ++n_evaluations;
  worst_margin = -std::numeric_limits<double>::infinity();
  worst_location = std::move(location);
  diagnostics.push_back(std::move(diagnostic));
}

void CheckReport::mark_inconclusive(std::string diagnostic) {
  status = CheckStatus::kInconclusive;
  diagnostics.push_back(std::move(diagnostic));
}

void CheckReport::finalize() {
  if (status == CheckStatus::kInconclusive) {
    pass = false;
    return;
  }
  pass = worst_margin >= -tolerance;
  if (!pass) {
    status = CheckStatus::kFail;
  } else if (n_evaluations > 0 && n_trivial == n_evaluations) {
    status = CheckStatus::kVacuous;
  } else {
    status = CheckStatus::kPass;
  }
}

CheckReport merge_reports(const std::vector<CheckReport>& reports, double tol) {
  CheckReport out(tol);
  bool inconclusive = false;
  for (const auto& r : reports) {
    out.n_evaluations += r.n_evaluations;
    out.n_trivial += r.n_trivial;
    if (r.worst_margin < out.worst_margin) {
      out.worst_margin = r.worst_margin;
      out.worst_location = r.worst_location;
    }
    out.diagnostics.insert(out.diagnostics.end(), r.diagnostics.begin(), r.diagnostics.end());
    inconclusive = inconclusive || r.status == CheckStatus::kInconclusive;
  }
  if (inconclusive) out.status = CheckStatus::kInconclusive;
  out.finalize();
  return out;
}

}  // namespace negdimcd
