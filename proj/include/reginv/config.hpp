#pragma once

#include <cstdint>
#include <string>

#include "reginv/profit.hpp"

namespace reginv {

struct SimulationSettings {
    std::int64_t cycles = 100000;
    std::uint64_t seed = 1;

    friend bool operator==(const SimulationSettings&, const SimulationSettings&) = default;
};

/// Everything one run needs, as read from a JSON document.
struct RunConfig {
    ModelParams model;
    CostParams costs;
    DelaySpec delay{Exponential{1.0}};
    ProfitOptions options;
    SimulationSettings simulation;

    KernelContext kernel_context(int r = 0) const { return KernelContext{model.lambda, delay, r}; }
};

bool same_config(const RunConfig& a, const RunConfig& b);

/// Throws ConfigError for malformed JSON, wrong types or unknown keys, and
/// ValidationError for values that break a model invariant.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Inverse of parse_config; `indent` < 0 gives a compact document.
std::string serialize_config(const RunConfig& config, int indent = 2);

void validate(const RunConfig& config);

}  // namespace reginv
