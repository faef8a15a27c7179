#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "screenbie/estimates_lab.hpp"

namespace screenbie {

// One acceptance criterion: verdict, the numbers behind it, and any sweeps.
struct CriterionResult {
  int id = 0;
  std::string title;
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;
  double seconds = 0.0;
  std::vector<EstimateReport> reports;
  std::vector<std::string> warnings;
};

struct AcceptanceOptions {
  std::uint64_t seed = 42;  // random ensembles and probe points
};

constexpr int kCriterionCount = 9;

CriterionResult run_criterion(int id, const AcceptanceOptions& o = {});

// Runs criteria 1..9 in order; on_done sees each result as it completes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o = {},
                                            const std::function<void(const CriterionResult&)>& on_done = {});

// "[PASS] 3 scaling exponents (12.3 s): ..." style line.
std::string format_line(const CriterionResult& r);

// Pass if all pass, fail if any fails, otherwise inconclusive.
Verdict overall(const std::vector<CriterionResult>& rs);

}  // namespace screenbie
