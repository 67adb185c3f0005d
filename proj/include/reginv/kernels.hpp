#pragma once

#include <vector>

#include "reginv/distributions.hpp"
#include "reginv/quadrature.hpp"

namespace reginv {

struct KernelContext {
    double lambda = 1.0;  // demand rate, 1/time
    DelaySpec delay{Exponential{1.0}};
    int r = 0;  // selects the per-r delay override, if any

    const DelayFamily& family() const { return delay.at(r); }
};

/// Throws ValidationError unless lambda is finite and > 0.
void validate(const KernelContext& ctx);

/// P(A_s): probability that exactly s demands arrive during one delay.
double mixture_prob(const KernelContext& ctx, int s, const QuadratureConfig& config = {});

/// tau_{r,s} = E[residual delay after the s-th arrival; A_s], via the
/// order-exchanged form (1/lambda) * P(A_{s+1}).
double residual_tau(const KernelContext& ctx, int s, const QuadratureConfig& config = {});

/// Same quantity evaluated literally as the iterated integral over the
/// residual level x and the delay z. Slow; kept for verification.
double residual_tau_literal(const KernelContext& ctx, int s, double rel_tol = 1e-11);

struct TailMass {
    double probability = 0.0;     // sum_{s>S} P(A_s)
    double expected_count = 0.0;  // sum_{s>S} s P(A_s)
};

/// Tail moments past S, as complements of partial sums. S = -1 gives the full
/// mass (1, lambda * mean delay).
TailMass tail_mass(const KernelContext& ctx, int S, const QuadratureConfig& config = {});

/// Larger of ceil(lambda * (mean + 12 sd)) + 64 and ceil(q + 8 sqrt(q)) + 16,
/// q = lambda * (1 - 1e-12 delay quantile).
int kernel_hard_cap(const KernelContext& ctx);

/// P(A_s) for s = 0..s_max + 1 computed in one vector quadrature pass, plus
/// tau_{r,s} and tail moments for s = 0..s_max.
class KernelTable {
public:
    KernelTable() = default;
    KernelTable(const KernelContext& ctx, int s_max, const QuadratureConfig& config = {});

    int s_max() const noexcept { return s_max_; }
    double lambda() const noexcept { return lambda_; }
    double mean_delay() const noexcept { return mean_delay_; }

    double prob(int s) const;
    double tau(int s) const;
    TailMass tail(int S) const;

private:
    int s_max_ = -1;
    double lambda_ = 1.0;
    double mean_delay_ = 0.0;
    std::vector<double> prob_;       // s = 0..s_max + 1
    std::vector<double> tail_prob_;  // index S = 0..s_max
    std::vector<double> tail_count_;
};

}  // namespace reginv
