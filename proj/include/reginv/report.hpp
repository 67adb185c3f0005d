#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "reginv/policy.hpp"
#include "reginv/simulate.hpp"

namespace reginv {

nlohmann::json to_json(const ProfitBreakdown& b);
nlohmann::json to_json(const Evaluation& e);
nlohmann::json to_json(const OptimizationResult& result);
nlohmann::json to_json(const SimulationReport& report);

ProfitBreakdown breakdown_from_json(const nlohmann::json& j);
Evaluation evaluation_from_json(const nlohmann::json& j);

/// Header line of the sweep CSV.
extern const char* const kSweepHeader;

/// %.17g with "inf"/"nan" spelled as in C.
std::string format_double(double v);

/// One row per evaluation in the given order: r,A,B,I,income,holding,purchase,deficit,lost.
void write_sweep_csv(std::ostream& out, const std::vector<Evaluation>& table);
/// Inverse of write_sweep_csv for the columns it writes. Throws ConfigError on
/// malformed input.
std::vector<Evaluation> read_sweep_csv(std::istream& in);

/// Sweep columns plus s_truncated_at, tail_bound and flagged.
void write_evaluation_csv(std::ostream& out, const std::vector<Evaluation>& table);

/// Fixed-width text table for people; flagged rows are marked.
void write_evaluation_table(std::ostream& out, const std::vector<Evaluation>& table);

}  // namespace reginv
