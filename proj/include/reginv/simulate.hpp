#pragma once

#include <cstdint>
#include <map>
#include <random>

#include "reginv/profit.hpp"

namespace reginv {

struct CycleOutcome {
    double duration = 0.0;
    double consumption_span = 0.0;  // order placed this long after the cycle starts
    double delay = 0.0;
    double profit = 0.0;
    ProfitBreakdown breakdown;
    int s = 0;     // arrivals during the delay
    int lost = 0;  // of those, turned away at the deficit cap
    double residual_after_last = 0.0;
};

/// One regeneration cycle by exact event-driven accounting. Arrivals are
/// counted strictly inside [order time, order time + delay).
CycleOutcome simulate_cycle(std::mt19937_64& rng, const ModelParams& model, const CostParams& costs,
                            const DelaySpec& delay, int r);

struct Estimate {
    double mean = 0.0;
    double se = 0.0;

    friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// Statistics over cycles that saw exactly s delay arrivals. Means are taken
/// over all cycles, so `profit.mean` estimates E[profit; A_s].
struct ArrivalBucket {
    std::int64_t hits = 0;
    Estimate probability;
    Estimate profit;
    Estimate residual;

    friend bool operator==(const ArrivalBucket&, const ArrivalBucket&) = default;
};

struct SimulationReport {
    int r = 0;
    std::int64_t cycles = 0;
    std::uint64_t seed = 0;
    Estimate profit;
    Estimate duration;
    Estimate ratio;  // delta-method standard error
    Estimate arrivals;
    ProfitBreakdown mean_breakdown;
    std::map<int, ArrivalBucket> per_s;
    bool low_sample = false;  // fewer than 100 cycles

    friend bool operator==(const SimulationReport&, const SimulationReport&) = default;
};

struct SimulationOptions {
    int workers = 0;  // 0: REGINV_WORKERS, else hardware concurrency
};

/// Worker count from REGINV_WORKERS, falling back to hardware concurrency.
int default_workers();

/// Cycles run in fixed blocks, each with its own stream seeded from
/// (seed, block index), and are merged in block order, so the report does not
/// depend on the worker count. Requires n_cycles >= 2.
SimulationReport estimate(const ModelParams& model, const CostParams& costs, const DelaySpec& delay, int r,
                          std::int64_t n_cycles, std::uint64_t seed, const SimulationOptions& options = {});

}  // namespace reginv
