#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "reginv/profit.hpp"

namespace reginv {

/// Probability vector over U = {-N0, ..., N}; weights[i] belongs to r = N - i
/// (descending, matching scan order).
struct PolicyDistribution {
    int N = 1;
    int N0 = 1;
    std::vector<double> weights;

    double weight(int r) const;
    static PolicyDistribution degenerate(int N, int N0, int r);
    static PolicyDistribution uniform(int N, int N0);
    /// Uniform draw from the simplex.
    static PolicyDistribution random(int N, int N0, std::mt19937_64& rng);
};

/// Throws ValidationError unless weights has N + N0 + 1 entries, each >= 0,
/// summing to 1 within 1e-12.
void validate(const PolicyDistribution& alpha);

struct OptimizationResult {
    int r_star = 0;
    double I_star = 0.0;
    std::vector<Evaluation> table;
    std::vector<int> ties;  // descending
};

/// One Evaluation per r in U, descending. Reorder levels sharing a delay law
/// share one kernel table.
std::vector<Evaluation> scan(const ModelParams& model, const CostParams& costs, const DelaySpec& delay,
                             const ProfitOptions& options = {});

/// Largest I wins; exact ties go to the larger r.
OptimizationResult argmax(std::vector<Evaluation> table);

OptimizationResult optimize(const ModelParams& model, const CostParams& costs, const DelaySpec& delay,
                            const ProfitOptions& options = {});

/// sum_r A(r) alpha_r / sum_r B(r) alpha_r over a full scan table.
double mixed_value(const std::vector<Evaluation>& table, const PolicyDistribution& alpha);

}  // namespace reginv
