#include "reginv/kernels.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "reginv/errors.hpp"

namespace reginv {
namespace {

// Components below this are underflow noise; relative accuracy is not asked of them.
constexpr double kKernelFloor = 1e-250;
constexpr double kLogUnderflow = -745.0;

double log_poisson(int s, double x) {
    if (x <= 0.0) return s == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return s * std::log(x) - x - std::lgamma(s + 1.0);
}

double poisson_pmf(int s, double x) { return std::exp(log_poisson(s, x)); }

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double c = 0.0;
    void add(double v) {
        const double t = sum + v;
        c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

}  // namespace

void validate(const KernelContext& ctx) {
    if (!std::isfinite(ctx.lambda) || ctx.lambda <= 0.0) throw ValidationError("model.lambda", "must be finite and > 0");
}

double mixture_prob(const KernelContext& ctx, int s, const QuadratureConfig& config) {
    if (s < 0) throw std::out_of_range("mixture_prob: s must be >= 0");
    const double lambda = ctx.lambda;
    return expect_g(ctx.family(), [lambda, s](double y) { return poisson_pmf(s, lambda * y); }, config);
}

double residual_tau(const KernelContext& ctx, int s, const QuadratureConfig& config) {
    if (s < 0) throw std::out_of_range("residual_tau: s must be >= 0");
    return mixture_prob(ctx, s + 1, config) / ctx.lambda;
}

double residual_tau_literal(const KernelContext& ctx, int s, double rel_tol) {
    if (s < 0) throw std::out_of_range("residual_tau_literal: s must be >= 0");
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    constexpr unsigned kDepth = 15;
    const double lambda = ctx.lambda;
    const DelayFamily& fam = ctx.family();
    const double inf = std::numeric_limits<double>::infinity();
    const double log_fact = std::lgamma(s + 1.0);

    // (lambda^s / s!) (z - x)^s e^{-lambda z}, in log space
    auto kernel = [=](double x, double z) {
        const double w = z - x;
        if (w <= 0.0) return s == 0 ? std::exp(-lambda * z) : 0.0;
        return std::exp(s * std::log(lambda * w) - log_fact - lambda * z);
    };

    if (const auto* pm = std::get_if<PointMass>(&fam)) {
        const double T = pm->T;
        auto outer = [&](double x) { return kernel(x, T); };
        return GK::integrate(outer, 0.0, T, kDepth, rel_tol);
    }

    double z_hi = inf;
    double z_lo = 0.0;
    if (const auto* u = std::get_if<UniformDelay>(&fam)) {
        z_lo = u->a;
        z_hi = u->b;
    }
    auto inner = [&](double x) {
        const double from = std::max(x, z_lo);
        if (from >= z_hi) return 0.0;
        auto f = [&](double z) { return kernel(x, z) * density(fam, z); };
        return GK::integrate(f, from, z_hi, kDepth, rel_tol * 0.1);
    };
    return GK::integrate(inner, 0.0, z_hi, kDepth, rel_tol);
}

TailMass tail_mass(const KernelContext& ctx, int S, const QuadratureConfig& config) {
    if (S < -1) throw std::out_of_range("tail_mass: S must be >= -1");
    CompensatedSum mass, count;
    for (int s = 0; s <= S; ++s) {
        const double p = mixture_prob(ctx, s, config);
        mass.add(p);
        count.add(s * p);
    }
    const double full_count = ctx.lambda * mean(ctx.family());
    return TailMass{std::max(0.0, 1.0 - mass.value()), std::max(0.0, full_count - count.value())};
}

int kernel_hard_cap(const KernelContext& ctx) {
    const DelayFamily& fam = ctx.family();
    const double moments = std::ceil(ctx.lambda * (mean(fam) + 12.0 * std::sqrt(variance(fam)))) + 64.0;
    // Long exponential-type tails outrun the moment rule; cover the 1 - 1e-12
    // delay quantile plus eight Poisson standard deviations as well.
    const double q = ctx.lambda * upper_quantile(fam, 1e-12);
    const double quantile = std::ceil(q + 8.0 * std::sqrt(q)) + 16.0;
    return static_cast<int>(std::max(moments, quantile));
}

KernelTable::KernelTable(const KernelContext& ctx, int s_max, const QuadratureConfig& config)
    : s_max_(s_max), lambda_(ctx.lambda), mean_delay_(mean(ctx.family())) {
    validate(ctx);
    if (s_max < 0) throw std::out_of_range("KernelTable: s_max must be >= 0");
    const std::size_t n = static_cast<std::size_t>(s_max) + 2;
    const double lambda = ctx.lambda;
    const DelayFamily& fam = ctx.family();

    if (const auto* pm = std::get_if<PointMass>(&fam)) {
        prob_.resize(n);
        for (std::size_t s = 0; s < n; ++s) prob_[s] = poisson_pmf(static_cast<int>(s), lambda * pm->T);
    } else {
        // Poisson weights at each node by the recurrence
        // log p_{s} = log p_{s-1} + log(lambda y) - log s.
        auto integrand = [&](double t, std::span<double> out) {
            const MappedPoint p = map_point(fam, t);
            const double x = lambda * p.y;
            double logp = -x + p.log_weight;
            const double logx = std::log(x);
            for (std::size_t s = 0; s < n; ++s) {
                if (s > 0) logp += logx - std::log(static_cast<double>(s));
                if (logp < kLogUnderflow && static_cast<double>(s) > x) {
                    std::fill(out.begin() + static_cast<std::ptrdiff_t>(s), out.end(), 0.0);
                    return;
                }
                out[s] = logp < kLogUnderflow ? 0.0 : std::exp(logp);
            }
        };
        VectorIntegral vi = integrate_vector(integrand, n, 0.0, 1.0, config.rel_tol, kKernelFloor,
                                             config.max_intervals);
        prob_ = std::move(vi.value);
    }

    tail_prob_.resize(static_cast<std::size_t>(s_max) + 1);
    tail_count_.resize(static_cast<std::size_t>(s_max) + 1);
    CompensatedSum mass, count;
    const double full_count = lambda * mean_delay_;
    for (int s = 0; s <= s_max; ++s) {
        mass.add(prob_[s]);
        count.add(s * prob_[s]);
        tail_prob_[s] = std::max(0.0, 1.0 - mass.value());
        tail_count_[s] = std::max(0.0, full_count - count.value());
    }
}

double KernelTable::prob(int s) const {
    if (s < 0 || s > s_max_ + 1) throw std::out_of_range("KernelTable::prob: s=" + std::to_string(s));
    return prob_[static_cast<std::size_t>(s)];
}

double KernelTable::tau(int s) const {
    if (s < 0 || s > s_max_) throw std::out_of_range("KernelTable::tau: s=" + std::to_string(s));
    return prob_[static_cast<std::size_t>(s) + 1] / lambda_;
}

TailMass KernelTable::tail(int S) const {
    if (S < -1 || S > s_max_) throw std::out_of_range("KernelTable::tail: S=" + std::to_string(S));
    if (S == -1) return TailMass{1.0, lambda_ * mean_delay_};
    return TailMass{tail_prob_[static_cast<std::size_t>(S)], tail_count_[static_cast<std::size_t>(S)]};
}

}  // namespace reginv
