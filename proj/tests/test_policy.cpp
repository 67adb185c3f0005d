#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "grid.hpp"
#include "reginv/errors.hpp"
#include "reginv/policy.hpp"

using namespace reginv;
using reginv::testing::grid_costs;
using reginv::testing::grid_model;

namespace {

Evaluation row(int r, double A, double B) {
    Evaluation e;
    e.r = r;
    e.A = A;
    e.B = B;
    e.I = A / B;
    return e;
}

}  // namespace

TEST_CASE("scan covers U in descending order") {
    const ModelParams m{1.0, 3, 2};
    const auto table = scan(m, grid_costs(), DelaySpec(Exponential{1.0}));
    REQUIRE(table.size() == 6);
    for (std::size_t i = 0; i < table.size(); ++i) CHECK(table[i].r == 3 - static_cast<int>(i));
}

TEST_CASE("scan rows are the single-level evaluations, bit for bit") {
    const ModelParams m = grid_model();
    const DelaySpec delay(GammaDelay{2.0, 0.5}, {{-1, UniformDelay{0.5, 2.5}}});
    const auto table = scan(m, grid_costs(), delay);
    for (const Evaluation& e : table) {
        const Evaluation one = efficiency(m, grid_costs(), KernelContext{m.lambda, delay, e.r}, e.r);
        CHECK(e.A == one.A);
        CHECK(e.B == one.B);
        CHECK(e.I == one.I);
        CHECK(e.breakdown == one.breakdown);
        CHECK(e.s_truncated_at == one.s_truncated_at);
    }
    CHECK(table[5].r == -1);
    CHECK(table[5].B == 5.0 + 1.5);  // uniform override
    CHECK(table[4].B == 4.0 + 1.0);
}

TEST_CASE("all-zero costs tie everywhere and the tie goes to N") {
    const ModelParams m{1.0, 3, 2};
    const OptimizationResult res = optimize(m, CostParams{}, DelaySpec(Exponential{1.0}));
    CHECK(res.r_star == 3);
    CHECK(res.I_star == 0.0);
    CHECK(res.ties == std::vector<int>{3, 2, 1, 0, -1, -2});
}

TEST_CASE("argmax picks a unique maximum") {
    const std::vector<Evaluation> t = {row(2, 1.0, 1.0), row(1, 5.0, 2.0), row(0, 2.0, 1.0), row(-1, 1.0, 4.0)};
    const OptimizationResult res = argmax(t);
    CHECK(res.r_star == 1);
    CHECK(res.I_star == 2.5);
    CHECK(res.ties == std::vector<int>{1});
    CHECK_THROWS(argmax({}));
}

TEST_CASE("argmax ties prefer the larger level regardless of order") {
    const std::vector<Evaluation> t = {row(-1, 3.0, 1.0), row(0, 1.0, 1.0), row(2, 6.0, 2.0)};
    const OptimizationResult res = argmax(t);
    CHECK(res.r_star == 2);
    CHECK(res.ties == std::vector<int>{2, -1});
}

TEST_CASE("optimum matches an independent pass over the table") {
    const ModelParams m = grid_model();
    for (DelayFamily f : {DelayFamily{PointMass{1.0}}, DelayFamily{Exponential{1.0}}, DelayFamily{GammaDelay{2.0, 0.5}}}) {
        const DelaySpec d(f);
        const OptimizationResult res = optimize(m, grid_costs(), d);
        int best = m.N;
        double best_I = -INFINITY;
        for (int r = m.N; r >= -m.N0; --r) {
            const double I = efficiency(m, grid_costs(), KernelContext{m.lambda, d, r}, r).I;
            if (I > best_I) {
                best_I = I;
                best = r;
            }
        }
        CHECK(res.r_star == best);
        CHECK(res.I_star == best_I);
    }
}

TEST_CASE("mixed strategies") {
    const ModelParams m = grid_model();
    const auto table = scan(m, grid_costs(), DelaySpec(Exponential{1.0}));
    for (const Evaluation& e : table) {
        CHECK(mixed_value(table, PolicyDistribution::degenerate(m.N, m.N0, e.r)) == e.I);
    }
    std::vector<Evaluation> flat;
    for (int r = 3; r >= -2; --r) flat.push_back(row(r, 2.5 * (5.0 - r), 5.0 - r));
    CHECK(mixed_value(flat, PolicyDistribution::uniform(3, 2)) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("no mixed strategy beats the best level") {
    const ModelParams m = grid_model();
    for (DelayFamily f : {DelayFamily{PointMass{1.0}}, DelayFamily{Exponential{1.0}}, DelayFamily{GammaDelay{2.0, 0.5}}}) {
        const OptimizationResult res = optimize(m, grid_costs(), DelaySpec(f));
        std::mt19937_64 rng(99);
        for (int i = 0; i < 1000; ++i) {
            const PolicyDistribution a = PolicyDistribution::random(m.N, m.N0, rng);
            CHECK(mixed_value(res.table, a) <= res.I_star + 1e-9);
        }
        CHECK(mixed_value(res.table, PolicyDistribution::degenerate(m.N, m.N0, res.r_star)) == res.I_star);
    }
}

TEST_CASE("scaling every cost scales I and keeps the optimum") {
    const ModelParams m = grid_model();
    const DelaySpec d(GammaDelay{2.0, 0.5});
    const OptimizationResult base = optimize(m, grid_costs(), d);
    const OptimizationResult big = optimize(m, grid_costs().scaled(10.0), d);
    CHECK(big.r_star == base.r_star);
    for (std::size_t i = 0; i < base.table.size(); ++i) {
        CHECK(big.table[i].I == doctest::Approx(10.0 * base.table[i].I).epsilon(1e-12));
    }
}

TEST_CASE("invalid distributions are rejected") {
    const ModelParams m{1.0, 3, 2};
    const auto table = scan(m, grid_costs(), DelaySpec(Exponential{1.0}));
    PolicyDistribution a = PolicyDistribution::uniform(3, 2);
    a.weights[0] += 1e-6;
    CHECK_THROWS_AS(mixed_value(table, a), ValidationError);
    a = PolicyDistribution::uniform(3, 2);
    a.weights.pop_back();
    CHECK_THROWS_AS(mixed_value(table, a), ValidationError);
    a = PolicyDistribution::degenerate(3, 2, 0);
    a.weights[1] = -0.5;
    a.weights[2] = 0.5;
    CHECK_THROWS_AS(validate(a), ValidationError);
    CHECK_THROWS_AS(PolicyDistribution::degenerate(3, 2, 4), ValidationError);
    CHECK_THROWS_AS(mixed_value(table, PolicyDistribution::uniform(2, 2)), ValidationError);
}

TEST_CASE("random distributions are valid and reproducible") {
    std::mt19937_64 a(5), b(5);
    for (int i = 0; i < 20; ++i) {
        const PolicyDistribution x = PolicyDistribution::random(4, 3, a);
        CHECK_NOTHROW(validate(x));
        CHECK(x.weights == PolicyDistribution::random(4, 3, b).weights);
    }
}
