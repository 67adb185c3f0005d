// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "grid.hpp"
#include "reginv/policy.hpp"
#include "reginv/report.hpp"
#include "reginv/simulate.hpp"

using namespace reginv;
using reginv::testing::grid_costs;
using reginv::testing::grid_model;
using reginv::testing::kGridLevels;

namespace {

constexpr std::uint64_t kSeed = 20240611;
constexpr std::int64_t kCycles = 200000;

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

struct Cell {
    DelayFamily family;
    int r;
    SimulationReport sim;
    Evaluation eval;
    KernelTable table;
};

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

int main() {
    const ModelParams m = grid_model();
    const CostParams c = grid_costs();
    const std::vector<DelayFamily> families = {PointMass{1.0}, Exponential{1.0}, GammaDelay{2.0, 0.5}};

    // Criterion 1: simulated ratio against analytic I on the 3 x 5 grid.
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Cell> cells;
    std::uint64_t cell_seed = kSeed;
    for (const DelayFamily& f : families) {
        const DelaySpec d(f);
        const KernelTable table = make_kernel_table(m, KernelContext{m.lambda, d, 0});
        for (int r : kGridLevels) {
            Cell cell{f, r, estimate(m, c, d, r, kCycles, cell_seed++), efficiency(m, c, table, r), table};
            cells.push_back(std::move(cell));
        }
    }
    const double grid_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int within3 = 0, within4 = 0;
    double worst_z = 0.0;
    for (const Cell& cell : cells) {
        const double z = (cell.sim.ratio.mean - cell.eval.I) / cell.sim.ratio.se;
        std::printf("  %-12s r=%2d  I=%.6f  sim=%.6f +- %.6f  z=%+.2f\n", family_name(cell.family).c_str(), cell.r,
                    cell.eval.I, cell.sim.ratio.mean, cell.sim.ratio.se, z);
        within3 += std::abs(z) <= 3.0;
        within4 += std::abs(z) <= 4.0;
        worst_z = std::max(worst_z, std::abs(z));
    }
    report(1, within3 >= 14 && within4 == 15 && grid_seconds <= 60.0,
           fmt("|z|<=3 in %.0f/15 cells, |z|<=4 in %.0f/15, max |z| %.2f, %.1f s", within3, within4, worst_z,
               grid_seconds));

    // Criterion 2: per-s profit buckets against the per-case terms.
    int buckets = 0, bucket_fail = 0;
    double worst_bucket = 0.0;
    for (const Cell& cell : cells) {
        for (const auto& [s, b] : cell.sim.per_s) {
            if (b.hits < 200) continue;
            ++buckets;
            const double term = term_profit(m, c, cell.table, cell.r, s).value;
            const double z = std::abs(b.profit.mean - term) / b.profit.se;
            worst_bucket = std::max(worst_bucket, z);
            if (z > 3.0) {
                ++bucket_fail;
                std::printf("  bucket outside 3 sigma: %s r=%d s=%d z=%.2f\n", family_name(cell.family).c_str(),
                            cell.r, s, z);
            }
        }
    }
    report(2, bucket_fail == 0,
           fmt("%.0f buckets with >=200 hits, %.0f outside 3 sigma, max |z| %.2f", buckets, bucket_fail,
               worst_bucket));

    // Criterion 3: residual buckets, and fast vs literal residual kernel.
    int res_checked = 0, res_fail = 0;
    double worst_res = 0.0;
    for (const Cell& cell : cells) {
        if (std::holds_alternative<PointMass>(cell.family)) continue;
        for (int s = 0; s <= 8; ++s) {
            auto it = cell.sim.per_s.find(s);
            if (it == cell.sim.per_s.end()) {
                ++res_fail;
                continue;
            }
            ++res_checked;
            const double z = std::abs(it->second.residual.mean - cell.table.tau(s)) / it->second.residual.se;
            worst_res = std::max(worst_res, z);
            if (z > 3.0) {
                ++res_fail;
                std::printf("  residual outside 3 sigma: %s r=%d s=%d z=%.2f\n", family_name(cell.family).c_str(),
                            cell.r, s, z);
            }
        }
    }
    double worst_fubini = 0.0;
    const auto t3 = std::chrono::steady_clock::now();
    for (const DelayFamily& f : {DelayFamily{PointMass{1.0}}, DelayFamily{Exponential{1.0}},
                                 DelayFamily{GammaDelay{2.0, 0.5}}, DelayFamily{UniformDelay{0.5, 1.5}}}) {
        for (double lambda : {1.0, 2.5}) {
            const KernelContext ctx{lambda, DelaySpec(f), 0};
            const KernelTable t(ctx, 40);
            for (int s = 0; s <= 40; ++s) worst_fubini = std::max(worst_fubini, rel_err(t.tau(s), residual_tau_literal(ctx, s)));
        }
    }
    const double fubini_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t3).count();
    report(3, res_fail == 0 && worst_fubini <= 1e-8,
           fmt("%.0f residual buckets, %.0f outside 3 sigma (max |z| %.2f); fast vs literal max rel err %.2e",
               res_checked, res_fail, worst_res, worst_fubini) +
               fmt(" (%.1f s)", fubini_seconds));

    // Criterion 4: no mixed strategy beats the best deterministic level.
    bool dominance = true;
    double worst_gap = -INFINITY;
    std::mt19937_64 rng(kSeed);
    for (const DelayFamily& f : families) {
        const OptimizationResult res = optimize(m, c, DelaySpec(f));
        for (int i = 0; i < 1000; ++i) {
            const double v = mixed_value(res.table, PolicyDistribution::random(m.N, m.N0, rng));
            worst_gap = std::max(worst_gap, v - res.I_star);
            dominance = dominance && v <= res.I_star + 1e-9;
        }
        const bool attained = mixed_value(res.table, PolicyDistribution::degenerate(m.N, m.N0, res.r_star)) == res.I_star;
        dominance = dominance && attained;
        std::printf("  %-12s r*=%d I*=%.6f degenerate attains I*: %s\n", family_name(f).c_str(), res.r_star,
                    res.I_star, attained ? "yes" : "no");
    }
    report(4, dominance, fmt("3 x 1000 random strategies, max I_alpha - I* = %.3e", worst_gap));

    // Criterion 5: kernel identities.
    bool kernels_ok = true;
    double min_mass = 1.0, worst_moment = 0.0, worst_closed = 0.0;
    for (const DelayFamily& f : {DelayFamily{PointMass{1.0}}, DelayFamily{Exponential{1.0}},
                                 DelayFamily{GammaDelay{2.0, 0.5}}, DelayFamily{GammaDelay{0.5, 2.0}},
                                 DelayFamily{UniformDelay{0.0, 2.0}}, DelayFamily{Exponential{0.05}}}) {
        for (double lambda : {0.5, 1.0, 3.0}) {
            const KernelContext ctx{lambda, DelaySpec(f), 0};
            const int cap = kernel_hard_cap(ctx);
            const KernelTable t(ctx, cap);
            double mass = 0.0, first = 0.0;
            for (int s = 0; s <= cap; ++s) {
                mass += t.prob(s);
                first += s * t.prob(s);
            }
            const double target = lambda * mean(f);
            min_mass = std::min(min_mass, mass);
            worst_moment = std::max(worst_moment, std::abs(first - target) / std::max(1.0, target));
        }
    }
    for (double lambda : {0.5, 1.0, 3.0}) {
        for (double mu : {0.25, 1.0, 4.0}) {
            const KernelTable t(KernelContext{lambda, DelaySpec(Exponential{mu}), 0}, 60);
            for (int s = 0; s <= 60; ++s) {
                const double p = mu / (lambda + mu) * std::pow(lambda / (lambda + mu), s);
                const double tau = mu * std::pow(lambda, s) / std::pow(lambda + mu, s + 2);
                worst_closed = std::max({worst_closed, rel_err(t.prob(s), p), rel_err(t.tau(s), tau)});
            }
        }
    }
    kernels_ok = min_mass >= 1.0 - 1e-9 && worst_moment <= 1e-8 && worst_closed <= 1e-9;
    report(5, kernels_ok,
           fmt("min mass before cap 1-%.2e, first-moment rel err %.2e, exponential closed forms rel err %.2e",
               1.0 - min_mass, worst_moment, worst_closed));

    // Criterion 6: structural invariants.
    bool partition = true;
    for (int N = 1; N <= 8 && partition; ++N) {
        for (int N0 = 1; N0 <= 8 && partition; ++N0) {
            const ModelParams mm{1.0, N, N0};
            for (int r = N; r >= -N0; --r) {
                const int room = r + N0;
                for (int s = 0; s <= 10 * (N + N0); ++s) {
                    const DelayOutcome o = classify(mm, r, s).outcome;
                    DelayOutcome want;
                    if (s == 0) want = DelayOutcome::kNoArrivals;
                    else if (s < r) want = DelayOutcome::kStockRemains;
                    else if (s == r) want = DelayOutcome::kStockExhausted;
                    else if (s < room) want = DelayOutcome::kDeficitGrows;
                    else if (s == room) want = DelayOutcome::kDeficitFull;
                    else want = DelayOutcome::kClientsLost;
                    partition = partition && o == want;
                }
            }
        }
    }
    bool positive_B = true;
    for (const DelayFamily& f : families) {
        for (int r = m.N; r >= -m.N0; --r) positive_B = positive_B && cycle_length(m, KernelContext{1.0, DelaySpec(f), r}, r) > 0.0;
    }
    bool scale_ok = true;
    for (const DelayFamily& f : families) {
        const OptimizationResult a = optimize(m, c, DelaySpec(f));
        const OptimizationResult b = optimize(m, c.scaled(10.0), DelaySpec(f));
        scale_ok = scale_ok && a.r_star == b.r_star;
        for (std::size_t i = 0; i < a.table.size(); ++i) {
            scale_ok = scale_ok && rel_err(b.table[i].I, 10.0 * a.table[i].I) <= 1e-12;
        }
    }
    const DelaySpec gd(GammaDelay{2.0, 0.5});
    const std::string rep1 = to_json(estimate(m, c, gd, 2, 50000, kSeed, SimulationOptions{1})).dump();
    const std::string rep2 = to_json(estimate(m, c, gd, 2, 50000, kSeed, SimulationOptions{4})).dump();
    const bool reproducible = rep1 == rep2;
    report(6, partition && positive_B && scale_ok && reproducible,
           std::string("partition ") + (partition ? "ok" : "broken") + ", B>0 " + (positive_B ? "ok" : "broken") +
               ", scale invariance " + (scale_ok ? "ok" : "broken") + ", report bytes " +
               (reproducible ? "identical" : "differ"));

    // Criterion 7: full analytic scan with N + N0 = 200.
    double slowest = 0.0;
    for (const DelayFamily& f : {DelayFamily{Exponential{0.05}}, DelayFamily{GammaDelay{2.0, 10.0}},
                                 DelayFamily{PointMass{20.0}}, DelayFamily{UniformDelay{0.0, 40.0}}}) {
        const ModelParams big{1.0, 150, 50};
        const auto a = std::chrono::steady_clock::now();
        const OptimizationResult res = optimize(big, c, DelaySpec(f));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - a).count();
        bool flagged = false;
        for (const Evaluation& e : res.table) flagged = flagged || e.flagged;
        std::printf("  %-12s N=150 N0=50: r*=%d, %.3f s%s\n", family_name(f).c_str(), res.r_star, secs,
                    flagged ? " (flagged)" : "");
        slowest = std::max(slowest, secs);
    }
    report(7, slowest < 1.0, fmt("slowest optimize over 201 levels took %.3f s", slowest));

    return failures;
}
