#include "reginv/profit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reginv/errors.hpp"

namespace reginv {
namespace {

bool nonneg_finite(double x) { return std::isfinite(x) && x >= 0.0; }

// a + (a+1) + ... + b, zero when b < a.
double range_sum(long a, long b) {
    if (b < a) return 0.0;
    return 0.5 * static_cast<double>(a + b) * static_cast<double>(b - a + 1);
}

void check_r(const ModelParams& model, int r) {
    if (r < -model.N0 || r > model.N) {
        throw ValidationError("r", "reorder level " + std::to_string(r) + " outside admissible range [" +
                                       std::to_string(-model.N0) + ", " + std::to_string(model.N) + "]");
    }
}

void check_lambda(const ModelParams& model, const KernelContext& ctx) {
    if (ctx.lambda != model.lambda) {
        throw ValidationError("model.lambda", "kernel context demand rate differs from the model's");
    }
}

KernelContext at_r(const KernelContext& ctx, int r) {
    KernelContext out = ctx;
    out.r = r;
    return out;
}

}  // namespace

void validate(const ModelParams& model) {
    if (!std::isfinite(model.lambda) || model.lambda <= 0.0) {
        throw ValidationError("model.lambda", "must be finite and > 0");
    }
    if (model.N < 1) throw ValidationError("model.N", "must be >= 1");
    if (model.N0 < 1) throw ValidationError("model.N0", "must be >= 1");
}

LostClientPenalty::LostClientPenalty(std::vector<double> list, std::optional<AffineTail> tail)
    : list_(std::move(list)), tail_explicit_(tail.has_value()) {
    if (tail) {
        tail_ = *tail;
    } else if (list_.size() == 1) {
        tail_ = AffineTail{list_.back(), 0.0};
    } else if (list_.size() >= 2) {
        const double n = static_cast<double>(list_.size());
        const double slope = list_[list_.size() - 1] - list_[list_.size() - 2];
        tail_ = AffineTail{list_.back() - slope * n, slope};
    }
}

double LostClientPenalty::operator()(int lost) const {
    if (lost < 1) throw std::out_of_range("LostClientPenalty: lost must be >= 1");
    if (static_cast<std::size_t>(lost) <= list_.size()) return list_[static_cast<std::size_t>(lost) - 1];
    return tail_.base + tail_.slope * lost;
}

double LostClientPenalty::list_max() const noexcept {
    double m = 0.0;
    for (double v : list_) m = std::max(m, v);
    return m;
}

LostClientPenalty LostClientPenalty::scaled(double k) const {
    LostClientPenalty out = *this;
    for (double& v : out.list_) v *= k;
    out.tail_.base *= k;
    out.tail_.slope *= k;
    return out;
}

CostParams CostParams::scaled(double k) const {
    return CostParams{c0 * k, c1 * k, c2 * k, c3 * k, c4.scaled(k)};
}

void validate(const CostParams& costs) {
    const std::pair<const char*, double> scalars[] = {
        {"costs.c0", costs.c0}, {"costs.c1", costs.c1}, {"costs.c2", costs.c2}, {"costs.c3", costs.c3}};
    for (const auto& [field, v] : scalars) {
        if (!nonneg_finite(v)) throw ValidationError(field, "must be finite and >= 0");
    }
    const auto& list = costs.c4.list();
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (!nonneg_finite(list[i])) {
            throw ValidationError("costs.c4.list[" + std::to_string(i) + "]", "must be finite and >= 0");
        }
    }
    const AffineTail& t = costs.c4.tail();
    if (!std::isfinite(t.base) || !std::isfinite(t.slope)) {
        throw ValidationError("costs.c4.affine_tail", "must be finite");
    }
    if (t.slope < 0.0) {
        throw ValidationError("costs.c4.affine_tail.slope",
                              "must be >= 0 so the penalty stays nonnegative; give an explicit affine_tail");
    }
    if (t.base + t.slope * static_cast<double>(list.size() + 1) < 0.0) {
        throw ValidationError("costs.c4.affine_tail.base", "penalty past the list would be negative");
    }
}

ProfitBreakdown& ProfitBreakdown::operator+=(const ProfitBreakdown& o) noexcept {
    income += o.income;
    holding += o.holding;
    purchase += o.purchase;
    deficit += o.deficit;
    lost_client += o.lost_client;
    return *this;
}

Regime regime_of(const ModelParams& model, int r) {
    check_r(model, r);
    if (r == model.N) return Regime::kOrderAtFull;
    if (r >= 1) return Regime::kOrderWithStock;
    if (r == 0) return Regime::kOrderAtZero;
    if (r > -model.N0) return Regime::kOrderInDeficit;
    return Regime::kOrderAtCap;
}

CaseId classify(const ModelParams& model, int r, int s) {
    if (r < -model.N0 || r > model.N || s < 0) {
        throw InvariantViolation("no case for r=" + std::to_string(r) + ", s=" + std::to_string(s));
    }
    const Regime regime = regime_of(model, r);
    if (s == 0) return {regime, DelayOutcome::kNoArrivals};
    const int room = r + model.N0;  // arrivals that can still be served
    switch (regime) {
        case Regime::kOrderAtFull:
        case Regime::kOrderWithStock:
            if (s < r) return {regime, DelayOutcome::kStockRemains};
            if (s == r) return {regime, DelayOutcome::kStockExhausted};
            [[fallthrough]];
        case Regime::kOrderAtZero:
        case Regime::kOrderInDeficit:
            if (s < room) return {regime, DelayOutcome::kDeficitGrows};
            if (s == room) return {regime, DelayOutcome::kDeficitFull};
            return {regime, DelayOutcome::kClientsLost};
        case Regime::kOrderAtCap:
            return {regime, DelayOutcome::kClientsLost};
    }
    throw InvariantViolation("unreachable case dispatch");
}

CaseCoefficients case_coefficients(const ModelParams& model, int r, int s) {
    const CaseId id = classify(model, r, s);
    const long N = model.N;
    const long N0 = model.N0;
    const long room = r + N0;

    CaseCoefficients c;
    c.sold = static_cast<int>(N - r + std::min<long>(s, room));
    c.lost = static_cast<int>(std::max<long>(0, s - room));
    if (r >= 0) {
        c.consumption_stock = range_sum(r + 1, N);
    } else {
        c.consumption_stock = range_sum(1, N);
        c.consumption_deficit = range_sum(1, -r - 1);
    }

    if (r >= 1) {
        // Stock r at the order; the first r arrivals draw it down.
        const double stock_run = range_sum(1, r);
        switch (id.outcome) {
            case DelayOutcome::kNoArrivals:
                c.residual_stock = r;
                break;
            case DelayOutcome::kStockRemains:
                c.gap_stock = range_sum(r - s + 1, r);
                c.residual_stock = r - s;
                break;
            case DelayOutcome::kStockExhausted:
                c.gap_stock = stock_run;
                break;
            case DelayOutcome::kDeficitGrows:
                c.gap_stock = stock_run;
                c.gap_deficit = range_sum(1, s - r - 1);
                c.residual_deficit = s - r;
                break;
            case DelayOutcome::kDeficitFull:
                c.gap_stock = stock_run;
                c.gap_deficit = range_sum(1, N0 - 1);
                c.residual_deficit = N0;
                break;
            case DelayOutcome::kClientsLost:
                c.gap_stock = stock_run;
                c.gap_deficit = range_sum(1, N0 - 1) + static_cast<double>(N0 * (s - room));
                c.residual_deficit = N0;
                break;
        }
        return c;
    }

    // Deficit d = -r >= 0 at the order; it grows by one per arrival up to N0.
    const long d = -r;
    switch (id.outcome) {
        case DelayOutcome::kNoArrivals:
            c.residual_deficit = d;
            break;
        case DelayOutcome::kDeficitGrows:
            c.gap_deficit = range_sum(d, d + s - 1);
            c.residual_deficit = d + s;
            break;
        case DelayOutcome::kDeficitFull:
            c.gap_deficit = range_sum(d, N0 - 1);
            c.residual_deficit = N0;
            break;
        case DelayOutcome::kClientsLost:
            c.gap_deficit = range_sum(d, N0 - 1) + static_cast<double>(N0 * (s - room));
            c.residual_deficit = N0;
            break;
        default:
            throw InvariantViolation("stock outcome for a non-positive reorder level");
    }
    return c;
}

TermProfit term_profit(const ModelParams& model, const CostParams& costs, const KernelTable& table, int r, int s,
                       FormulaSet formulas) {
    const CaseCoefficients c = case_coefficients(model, r, s);
    const double lambda = model.lambda;
    const double p = table.prob(s);
    const double tau = table.tau(s);

    double gap_price = tau;
    double residual_price = tau;
    if (formulas == FormulaSet::kPublished) {
        gap_price = p / lambda;
        if (s == 0) residual_price = table.mean_delay() * p;
    }

    TermProfit t;
    ProfitBreakdown& b = t.breakdown;
    b.income = costs.c0 * c.sold * p;
    b.purchase = costs.c2 * c.sold * p;
    b.holding = costs.c1 * (c.consumption_stock * p / lambda + c.gap_stock * gap_price +
                            c.residual_stock * residual_price);
    if (formulas == FormulaSet::kPublished && r == -model.N0) {
        // Whole delay spent at the cap.
        b.deficit = costs.c3 * (c.consumption_deficit * p / lambda + model.N0 * table.mean_delay() * p);
    } else {
        b.deficit = costs.c3 * (c.consumption_deficit * p / lambda + c.gap_deficit * gap_price +
                                c.residual_deficit * residual_price);
    }
    if (c.lost >= 1) b.lost_client = costs.c4(c.lost) * p;
    t.value = b.total();
    return t;
}

TermProfit term_profit(const ModelParams& model, const CostParams& costs, const KernelContext& ctx, int r, int s,
                       const ProfitOptions& options) {
    validate(model);
    check_lambda(model, ctx);
    check_r(model, r);
    if (s < 0) throw std::out_of_range("term_profit: s must be >= 0");
    const KernelTable table(at_r(ctx, r), s, options.quadrature);
    return term_profit(model, costs, table, r, s, options.formulas);
}

int series_cap(const ModelParams& model, const KernelContext& ctx) {
    return std::max(kernel_hard_cap(ctx), model.N + model.N0 + 1);
}

KernelTable make_kernel_table(const ModelParams& model, const KernelContext& ctx, const ProfitOptions& options) {
    validate(model);
    check_lambda(model, ctx);
    return KernelTable(ctx, series_cap(model, ctx), options.quadrature);
}

CycleProfit cycle_profit(const ModelParams& model, const CostParams& costs, const KernelTable& table, int r,
                         const ProfitOptions& options) {
    validate(model);
    validate(costs);
    check_r(model, r);

    const double lambda = model.lambda;
    const double N = model.N;
    const double N0 = model.N0;
    const double stock_levels = 0.5 * N * (N + 1.0);
    // Per-term magnitude past the last case boundary is at most
    // k_const * P(A_s) + k_slope * s * P(A_s).
    const double k_const = (costs.c0 + costs.c2) * (N + N0) +
                           (costs.c1 * stock_levels + costs.c3 * 0.5 * N0 * (N0 + 1.0)) / lambda +
                           costs.c4.list_max() + std::abs(costs.c4.tail().base) + costs.c1 * stock_levels / lambda +
                           costs.c3 * N0 / lambda + costs.c3 * N0 * table.mean_delay();
    const double k_slope = std::abs(costs.c4.tail().slope) + costs.c3 * N0 / lambda;
    const int boundary = model.N + model.N0;

    CycleProfit out;
    out.flagged = true;
    for (int s = 0; s <= table.s_max(); ++s) {
        out.breakdown += term_profit(model, costs, table, r, s, options.formulas).breakdown;
        out.s_truncated_at = s;
        if (s <= boundary) continue;
        const TailMass tail = table.tail(s);
        out.tail_bound = k_const * tail.probability + k_slope * tail.expected_count;
        if (out.tail_bound < options.truncation_rel * std::max(1.0, std::abs(out.breakdown.total()))) {
            out.flagged = false;
            break;
        }
    }
    out.A = out.breakdown.total();
    return out;
}

CycleProfit cycle_profit(const ModelParams& model, const CostParams& costs, const KernelContext& ctx, int r,
                         const ProfitOptions& options) {
    check_r(model, r);
    const KernelContext here = at_r(ctx, r);
    return cycle_profit(model, costs, make_kernel_table(model, here, options), r, options);
}

double cycle_length(const ModelParams& model, const KernelContext& ctx, int r) {
    validate(model);
    check_r(model, r);
    const double b = (model.N - r) / model.lambda + mean(ctx.delay.at(r));
    if (!(b > 0.0)) throw InvariantViolation("cycle length must be positive");
    return b;
}

Evaluation efficiency(const ModelParams& model, const CostParams& costs, const KernelTable& table, int r,
                      const ProfitOptions& options) {
    const CycleProfit cp = cycle_profit(model, costs, table, r, options);
    Evaluation e;
    e.r = r;
    e.A = cp.A;
    e.B = (model.N - r) / model.lambda + table.mean_delay();
    if (!(e.B > 0.0)) throw InvariantViolation("cycle length must be positive");
    e.I = e.A / e.B;
    e.breakdown = cp.breakdown;
    e.s_truncated_at = cp.s_truncated_at;
    e.tail_bound = cp.tail_bound;
    e.flagged = cp.flagged;
    return e;
}

Evaluation efficiency(const ModelParams& model, const CostParams& costs, const KernelContext& ctx, int r,
                      const ProfitOptions& options) {
    check_r(model, r);
    const KernelContext here = at_r(ctx, r);
    return efficiency(model, costs, make_kernel_table(model, here, options), r, options);
}

}  // namespace reginv
