#include "reginv/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "reginv/errors.hpp"

namespace reginv {
namespace {

constexpr std::int64_t kBlockCycles = 4096;

// Time integral of stock and deficit at a constant level.
void accrue(int level, double span, double& stock_time, double& deficit_time) {
    if (level > 0) {
        stock_time += level * span;
    } else if (level < 0) {
        deficit_time += -level * span;
    }
}

// Running moments of (x, y) with co-moment; merged pairwise (Chan et al.).
struct PairMoments {
    double n = 0.0;
    double mx = 0.0, my = 0.0;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;

    void add(double x, double y) {
        n += 1.0;
        const double dx = x - mx;
        mx += dx / n;
        const double dy = y - my;
        my += dy / n;
        sxx += dx * (x - mx);
        syy += dy * (y - my);
        sxy += dx * (y - my);
    }

    void merge(const PairMoments& o) {
        if (o.n == 0.0) return;
        if (n == 0.0) {
            *this = o;
            return;
        }
        const double total = n + o.n;
        const double dx = o.mx - mx;
        const double dy = o.my - my;
        const double f = n * o.n / total;
        sxx += o.sxx + dx * dx * f;
        syy += o.syy + dy * dy * f;
        sxy += o.sxy + dx * dy * f;
        mx += dx * o.n / total;
        my += dy * o.n / total;
        n = total;
    }
};

// Per-s sums over the cycles that landed in the bucket.
struct BucketSums {
    std::int64_t hits = 0;
    double profit = 0.0, profit_sq = 0.0;
    double residual = 0.0, residual_sq = 0.0;

    void merge(const BucketSums& o) {
        hits += o.hits;
        profit += o.profit;
        profit_sq += o.profit_sq;
        residual += o.residual;
        residual_sq += o.residual_sq;
    }
};

struct BlockStats {
    PairMoments profit_duration;
    PairMoments arrivals;  // x = s; y unused
    ProfitBreakdown breakdown_sum;
    std::vector<BucketSums> buckets;

    void merge(const BlockStats& o) {
        profit_duration.merge(o.profit_duration);
        arrivals.merge(o.arrivals);
        breakdown_sum += o.breakdown_sum;
        if (buckets.size() < o.buckets.size()) buckets.resize(o.buckets.size());
        for (std::size_t s = 0; s < o.buckets.size(); ++s) buckets[s].merge(o.buckets[s]);
    }
};

BlockStats run_block(std::uint64_t seed, std::uint64_t block, std::int64_t cycles, const ModelParams& model,
                     const CostParams& costs, const DelaySpec& delay, int r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    std::mt19937_64 rng(seq);
    BlockStats st;
    for (std::int64_t i = 0; i < cycles; ++i) {
        const CycleOutcome c = simulate_cycle(rng, model, costs, delay, r);
        st.profit_duration.add(c.profit, c.duration);
        st.arrivals.add(c.s, 0.0);
        st.breakdown_sum += c.breakdown;
        if (st.buckets.size() <= static_cast<std::size_t>(c.s)) st.buckets.resize(static_cast<std::size_t>(c.s) + 1);
        BucketSums& b = st.buckets[static_cast<std::size_t>(c.s)];
        ++b.hits;
        b.profit += c.profit;
        b.profit_sq += c.profit * c.profit;
        b.residual += c.residual_after_last;
        b.residual_sq += c.residual_after_last * c.residual_after_last;
    }
    return st;
}

// Mean and standard error of X * 1{bucket} over n cycles, from in-bucket sums.
Estimate indicator_estimate(double sum, double sum_sq, double n) {
    const double m = sum / n;
    const double var = std::max(0.0, (sum_sq / n - m * m) * n / (n - 1.0));
    return Estimate{m, std::sqrt(var / n)};
}

}  // namespace

CycleOutcome simulate_cycle(std::mt19937_64& rng, const ModelParams& model, const CostParams& costs,
                            const DelaySpec& delay, int r) {
    if (r < -model.N0 || r > model.N) throw ValidationError("r", "reorder level outside admissible range");
    std::exponential_distribution<double> gap(model.lambda);
    CycleOutcome out;
    double stock_time = 0.0;
    double deficit_time = 0.0;

    int level = model.N;
    for (int k = model.N; k > r; --k) {
        const double g = gap(rng);
        accrue(level, g, stock_time, deficit_time);
        out.consumption_span += g;
        --level;
    }

    out.delay = sample(delay.at(r), rng);
    double elapsed = 0.0;
    int accepted = 0;
    while (true) {
        const double g = gap(rng);
        if (elapsed + g >= out.delay) break;
        accrue(level, g, stock_time, deficit_time);
        elapsed += g;
        ++out.s;
        if (level > -model.N0) {
            --level;
            ++accepted;
        } else {
            ++out.lost;
        }
    }
    out.residual_after_last = out.delay - elapsed;
    accrue(level, out.residual_after_last, stock_time, deficit_time);
    out.duration = out.consumption_span + out.delay;

    const int sold = (model.N - r) + accepted;
    ProfitBreakdown& b = out.breakdown;
    b.income = costs.c0 * sold;
    b.holding = costs.c1 * stock_time;
    b.purchase = costs.c2 * (model.N - level);
    b.deficit = costs.c3 * deficit_time;
    if (out.lost >= 1) b.lost_client = costs.c4(out.lost);
    out.profit = b.total();
    return out;
}

int default_workers() {
    if (const char* env = std::getenv("REGINV_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

SimulationReport estimate(const ModelParams& model, const CostParams& costs, const DelaySpec& delay, int r,
                          std::int64_t n_cycles, std::uint64_t seed, const SimulationOptions& options) {
    validate(model);
    validate(costs);
    if (r < -model.N0 || r > model.N) {
        throw ValidationError("r", "reorder level " + std::to_string(r) + " outside admissible range [" +
                                       std::to_string(-model.N0) + ", " + std::to_string(model.N) + "]");
    }
    if (n_cycles < 2) throw ValidationError("simulation.cycles", "must be >= 2");

    const std::int64_t blocks = (n_cycles + kBlockCycles - 1) / kBlockCycles;
    std::vector<BlockStats> results(static_cast<std::size_t>(blocks));
    auto work = [&](std::int64_t first, std::int64_t stride) {
        for (std::int64_t b = first; b < blocks; b += stride) {
            const std::int64_t cycles = std::min(kBlockCycles, n_cycles - b * kBlockCycles);
            results[static_cast<std::size_t>(b)] =
                run_block(seed, static_cast<std::uint64_t>(b), cycles, model, costs, delay, r);
        }
    };
    const int workers = static_cast<int>(
        std::min<std::int64_t>(blocks, options.workers > 0 ? options.workers : default_workers()));
    if (workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    }

    BlockStats all;
    for (const BlockStats& b : results) all.merge(b);

    const PairMoments& pd = all.profit_duration;
    const double n = pd.n;
    SimulationReport rep;
    rep.r = r;
    rep.cycles = n_cycles;
    rep.seed = seed;
    rep.low_sample = n_cycles < 100;
    const double var_x = pd.sxx / (n - 1.0);
    const double var_y = pd.syy / (n - 1.0);
    const double cov = pd.sxy / (n - 1.0);
    rep.profit = Estimate{pd.mx, std::sqrt(var_x / n)};
    rep.duration = Estimate{pd.my, std::sqrt(var_y / n)};
    const double ratio = pd.mx / pd.my;
    const double var_lin = std::max(0.0, var_x - 2.0 * ratio * cov + ratio * ratio * var_y);
    rep.ratio = Estimate{ratio, std::sqrt(var_lin / n) / pd.my};
    rep.arrivals = Estimate{all.arrivals.mx, std::sqrt(all.arrivals.sxx / (n - 1.0) / n)};
    const ProfitBreakdown& bs = all.breakdown_sum;
    rep.mean_breakdown = ProfitBreakdown{bs.income / n, bs.holding / n, bs.purchase / n, bs.deficit / n,
                                         bs.lost_client / n};
    for (std::size_t s = 0; s < all.buckets.size(); ++s) {
        const BucketSums& b = all.buckets[s];
        if (b.hits == 0) continue;
        ArrivalBucket out;
        out.hits = b.hits;
        const double h = static_cast<double>(b.hits);
        out.probability = indicator_estimate(h, h, n);
        out.profit = indicator_estimate(b.profit, b.profit_sq, n);
        out.residual = indicator_estimate(b.residual, b.residual_sq, n);
        rep.per_s.emplace(static_cast<int>(s), out);
    }
    return rep;
}

}  // namespace reginv
