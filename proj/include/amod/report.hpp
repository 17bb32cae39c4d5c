#pragma once

#include <string>
#include <vector>

#include "amod/calibrate.hpp"
#include "amod/planner.hpp"
#include "amod/simulate.hpp"

namespace amod {

// 17 significant digits: doubles round-trip exactly.
std::string format_double(double v);

// Versioned frozen column set; per-row failures land in the status column.
extern const char* const kSweepCsvHeader;

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::string& parameter);
std::string compare_csv(const std::vector<CompareCell>& cells, const std::string& axis_parameter);
std::string calibration_csv(const SqrtLawFit& fit);

std::string equilibrium_text(const MarketEquilibrium& eq, const WelfareBreakdown& w);
std::string plan_text(const PlanOutcome& outcome);

std::string solve_json(const StationPlan& plan, const MarketEquilibrium& eq,
                       const WelfareBreakdown& w);
std::string plan_json(const PlanOutcome& outcome);
std::string validation_json(const SimResult& sim, double analytic_blocking,
                            double analytic_wait, double analytic_mean);
std::string calibration_json(const SqrtLawFit& fit);

}  // namespace amod
