#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace negdimcd {

enum class CheckStatus {
  kPass,
  kFail,
  kVacuous,       ///< Every evaluated inequality held trivially (e.g. +inf coefficients).
  kInconclusive,  ///< Discretization did not resolve the answer.
};

const char* to_string(CheckStatus s);

/// One evaluated margin with the coordinates it was evaluated at.
struct MarginSample {
  std::vector<double> at;
  double margin = 0.0;
};

/// Uniform result of every inequality checker.
///
/// A margin is the slack "right-hand side minus left-hand side" of the checked
/// inequality, so nonnegative means the inequality holds. The invariant is
/// pass <=> worst_margin >= -tolerance, except that an inconclusive report
/// never passes.
struct CheckReport {
  bool pass = true;
  CheckStatus status = CheckStatus::kVacuous;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<double> worst_location;
  std::size_t n_evaluations = 0;
  std::size_t n_trivial = 0;
  double tolerance = 0.0;
  std::vector<std::string> diagnostics;
  std::vector<MarginSample> samples;

  explicit CheckReport(double tol = 0.0) : tolerance(tol) {}

  /// Folds one margin in. Ties keep the earlier location, so the reduction is
  /// deterministic in evaluation order.
  void record(double margin, std::vector<double> location, bool keep_sample = false);

  /// Counts an inequality that holds trivially.
  void record_trivial();

  /// A hard failure that has no finite margin (e.g. an undefined derivative).
  void record_failure(std::vector<double> location, std::string diagnostic);

  void mark_inconclusive(std::string diagnostic);

  /// Recomputes pass/status from the accumulated margins.
  void finalize();
};

/// Combines reports: worst margin wins, counts add up.
CheckReport merge_reports(const std::vector<CheckReport>& reports, double tol);

}  // namespace negdimcd
