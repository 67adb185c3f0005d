#include <doctest.h>

#include <cmath>

#include "grid.hpp"
#include "reginv/errors.hpp"
#include "reginv/policy.hpp"
#include "reginv/simulate.hpp"

using namespace reginv;
using reginv::testing::grid_costs;
using reginv::testing::grid_model;

TEST_CASE("vanishing delay: no delay arrivals, margin on N - r units") {
    const ModelParams m{1.0, 5, 2};
    const CostParams c{10.0, 1.0, 4.0, 2.0, LostClientPenalty::linear(1.0)};
    const DelaySpec d(PointMass{1e-12});
    std::mt19937_64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        const CycleOutcome o = simulate_cycle(rng, m, c, d, 2);
        REQUIRE(o.s == 0);
        CHECK(o.lost == 0);
        CHECK(o.breakdown.income == 30.0);
        CHECK(o.breakdown.purchase == 12.0);
        CHECK(o.breakdown.deficit == 0.0);
        // stock 5, 4, 3 over three exponential gaps, then 2 over the delay
        CHECK(o.breakdown.holding >= 3.0 * o.consumption_span);
        CHECK(o.breakdown.holding <= 5.0 * o.consumption_span + 2.0 * 1e-12 + 1e-15);
    }
}

TEST_CASE("ordering at the cap sells N + N0 every cycle") {
    const ModelParams m = grid_model();
    const DelaySpec d(Exponential{1.0});
    std::mt19937_64 rng(4);
    for (int i = 0; i < 2000; ++i) {
        const CycleOutcome o = simulate_cycle(rng, m, grid_costs(), d, -m.N0);
        CHECK(o.breakdown.income == 10.0 * (m.N + m.N0));
        CHECK(o.lost == o.s);
    }
}

TEST_CASE("per-cycle bookkeeping") {
    const ModelParams m = grid_model();
    const DelaySpec d(GammaDelay{2.0, 0.5});
    std::mt19937_64 rng(11);
    for (int r = m.N; r >= -m.N0; --r) {
        for (int i = 0; i < 500; ++i) {
            const CycleOutcome o = simulate_cycle(rng, m, grid_costs(), d, r);
            CHECK(o.duration == o.consumption_span + o.delay);
            CHECK(o.duration > 0.0);
            CHECK(o.lost == std::max(0, o.s - (r + m.N0)));
            CHECK(o.profit == o.breakdown.total());
            CHECK(o.residual_after_last >= 0.0);
            CHECK(o.residual_after_last <= o.delay);
            if (o.s == 0) CHECK(o.residual_after_last == o.delay);
            if (r == m.N) CHECK(o.consumption_span == 0.0);
        }
    }
}

TEST_CASE("arrival counts follow the geometric mixture law") {
    const ModelParams m = grid_model();
    const SimulationReport rep = estimate(m, grid_costs(), DelaySpec(Exponential{1.0}), 1, 100000, 2024);
    for (int k = 0; k <= 6; ++k) {
        const ArrivalBucket& b = rep.per_s.at(k);
        const double p = std::ldexp(1.0, -(k + 1));
        CAPTURE(k);
        CHECK(std::abs(b.probability.mean - p) <= 3.0 * b.probability.se);
    }
    double total = 0.0;
    for (const auto& [s, b] : rep.per_s) total += b.probability.mean;
    CHECK(total <= 1.0 + 1e-12);
    // Wald: E[s] = lambda * mean delay
    CHECK(std::abs(rep.arrivals.mean - 1.0) <= 3.0 * rep.arrivals.se);
}

TEST_CASE("zero costs give an exactly zero ratio") {
    const SimulationReport rep = estimate(grid_model(), CostParams{}, DelaySpec(Exponential{1.0}), 0, 5000, 1);
    CHECK(rep.ratio.mean == 0.0);
    CHECK(rep.ratio.se == 0.0);
    CHECK(rep.profit.mean == 0.0);
}

TEST_CASE("means agree with the analytic cycle quantities") {
    const ModelParams m{1.5, 3, 2};
    const CostParams c{8.0, 0.7, 2.0, 1.3, LostClientPenalty({2.0, 5.0})};
    const DelaySpec d(UniformDelay{0.2, 2.2});
    const KernelContext ctx{m.lambda, d, 0};
    const KernelTable table = make_kernel_table(m, ctx);
    for (int r = m.N; r >= -m.N0; --r) {
        CAPTURE(r);
        const SimulationReport rep = estimate(m, c, d, r, 100000, 77 + r);
        const Evaluation e = efficiency(m, c, table, r);
        CHECK(std::abs(rep.duration.mean - e.B) <= 3.0 * rep.duration.se);
        CHECK(std::abs(rep.ratio.mean - e.I) <= 3.0 * rep.ratio.se);
        for (const auto& [s, b] : rep.per_s) {
            if (b.hits < 200) continue;
            CAPTURE(s);
            CHECK(std::abs(b.profit.mean - term_profit(m, c, table, r, s).value) <= 3.0 * b.profit.se);
            CHECK(std::abs(b.residual.mean - table.tau(s)) <= 3.0 * b.residual.se);
        }
    }
}

TEST_CASE("simplified pricing is rejected by the simulation") {
    const ModelParams m = grid_model();
    const DelaySpec d(Exponential{1.0});
    ProfitOptions pub;
    pub.formulas = FormulaSet::kPublished;
    const SimulationReport rep = estimate(m, grid_costs(), d, m.N, 100000, 5);
    const Evaluation exact = efficiency(m, grid_costs(), KernelContext{1.0, d, m.N}, m.N);
    const Evaluation simplified = efficiency(m, grid_costs(), KernelContext{1.0, d, m.N}, m.N, pub);
    CHECK(std::abs(rep.ratio.mean - exact.I) / rep.ratio.se <= 3.0);
    CHECK(std::abs(rep.ratio.mean - simplified.I) / rep.ratio.se > 20.0);
}

TEST_CASE("same seed, same report, whatever the worker count") {
    const ModelParams m = grid_model();
    const DelaySpec d(GammaDelay{2.0, 0.5});
    const SimulationReport a = estimate(m, grid_costs(), d, 0, 30000, 42, SimulationOptions{1});
    const SimulationReport b = estimate(m, grid_costs(), d, 0, 30000, 42, SimulationOptions{3});
    const SimulationReport c = estimate(m, grid_costs(), d, 0, 30000, 43, SimulationOptions{1});
    CHECK(a == b);
    CHECK_FALSE(a == c);
    CHECK(a.seed == 42);
    CHECK(a.cycles == 30000);
}

TEST_CASE("small samples are reported with a flag") {
    const SimulationReport rep = estimate(grid_model(), grid_costs(), DelaySpec(Exponential{1.0}), 1, 10, 9);
    CHECK(rep.low_sample);
    CHECK(rep.cycles == 10);
    CHECK_FALSE(estimate(grid_model(), grid_costs(), DelaySpec(Exponential{1.0}), 1, 100, 9).low_sample);
    CHECK_THROWS_AS(estimate(grid_model(), grid_costs(), DelaySpec(Exponential{1.0}), 1, 1, 9), ValidationError);
    CHECK_THROWS_AS(estimate(grid_model(), grid_costs(), DelaySpec(Exponential{1.0}), 5, 100, 9), ValidationError);
}

TEST_CASE("worker count comes from the environment") {
    setenv("REGINV_WORKERS", "3", 1);
    CHECK(default_workers() == 3);
    setenv("REGINV_WORKERS", "zero", 1);
    CHECK(default_workers() >= 1);
    unsetenv("REGINV_WORKERS");
}
