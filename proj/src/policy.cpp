#include "reginv/policy.hpp"

#include <cmath>
#include <algorithm>
#include <string>

#include "reginv/errors.hpp"

namespace reginv {
namespace {

std::size_t size_of_u(int N, int N0) { return static_cast<std::size_t>(N + N0 + 1); }

}  // namespace

double PolicyDistribution::weight(int r) const {
    if (r < -N0 || r > N) throw std::out_of_range("PolicyDistribution::weight: r outside U");
    return weights.at(static_cast<std::size_t>(N - r));
}

PolicyDistribution PolicyDistribution::degenerate(int N, int N0, int r) {
    if (r < -N0 || r > N) throw ValidationError("alpha", "degenerate point outside U");
    PolicyDistribution a{N, N0, std::vector<double>(size_of_u(N, N0), 0.0)};
    a.weights[static_cast<std::size_t>(N - r)] = 1.0;
    return a;
}

PolicyDistribution PolicyDistribution::uniform(int N, int N0) {
    const std::size_t n = size_of_u(N, N0);
    return PolicyDistribution{N, N0, std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

PolicyDistribution PolicyDistribution::random(int N, int N0, std::mt19937_64& rng) {
    std::exponential_distribution<double> e(1.0);
    PolicyDistribution a{N, N0, std::vector<double>(size_of_u(N, N0))};
    double sum = 0.0;
    for (double& w : a.weights) sum += (w = e(rng));
    for (double& w : a.weights) w /= sum;
    return a;
}

void validate(const PolicyDistribution& alpha) {
    if (alpha.N < 1 || alpha.N0 < 1) throw ValidationError("alpha", "N and N0 must be >= 1");
    if (alpha.weights.size() != size_of_u(alpha.N, alpha.N0)) {
        throw ValidationError("alpha", "expected " + std::to_string(size_of_u(alpha.N, alpha.N0)) + " weights");
    }
    double sum = 0.0;
    for (double w : alpha.weights) {
        if (!std::isfinite(w) || w < 0.0) throw ValidationError("alpha", "weights must be finite and >= 0");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("alpha", "weights must sum to 1");
}

std::vector<Evaluation> scan(const ModelParams& model, const CostParams& costs, const DelaySpec& delay,
                             const ProfitOptions& options) {
    validate(model);
    validate(costs);
    std::vector<std::pair<DelayFamily, KernelTable>> tables;
    std::vector<Evaluation> out;
    out.reserve(size_of_u(model.N, model.N0));
    for (int r = model.N; r >= -model.N0; --r) {
        const DelayFamily& fam = delay.at(r);
        const KernelTable* table = nullptr;
        for (const auto& [f, t] : tables) {
            if (f == fam) table = &t;
        }
        if (table == nullptr) {
            const KernelContext ctx{model.lambda, delay, r};
            tables.emplace_back(fam, make_kernel_table(model, ctx, options));
            table = &tables.back().second;
        }
        out.push_back(efficiency(model, costs, *table, r, options));
    }
    return out;
}

OptimizationResult argmax(std::vector<Evaluation> table) {
    if (table.empty()) throw std::invalid_argument("argmax: empty table");
    OptimizationResult res;
    res.r_star = table.front().r;
    res.I_star = table.front().I;
    for (const Evaluation& e : table) {
        if (e.I > res.I_star || (e.I == res.I_star && e.r > res.r_star)) {
            res.I_star = e.I;
            res.r_star = e.r;
        }
    }
    for (const Evaluation& e : table) {
        if (e.I == res.I_star) res.ties.push_back(e.r);
    }
    std::sort(res.ties.rbegin(), res.ties.rend());
    res.table = std::move(table);
    return res;
}

OptimizationResult optimize(const ModelParams& model, const CostParams& costs, const DelaySpec& delay,
                            const ProfitOptions& options) {
    return argmax(scan(model, costs, delay, options));
}

double mixed_value(const std::vector<Evaluation>& table, const PolicyDistribution& alpha) {
    validate(alpha);
    if (table.size() != alpha.weights.size()) {
        throw ValidationError("alpha", "table and distribution cover different control sets");
    }
    double num = 0.0;
    double den = 0.0;
    for (const Evaluation& e : table) {
        const double w = alpha.weight(e.r);
        if (w == 0.0) continue;
        num += e.A * w;
        den += e.B * w;
    }
    if (!(den > 0.0)) throw InvariantViolation("mixed_value: nonpositive expected cycle length");
    return num / den;
}

}  // namespace reginv
