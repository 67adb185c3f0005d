#pragma once

#include <optional>
#include <vector>

#include "reginv/kernels.hpp"

namespace reginv {

struct ModelParams {
    double lambda = 1.0;  // demand rate, 1/time
    int N = 1;            // stock level after replenishment, units
    int N0 = 1;           // deferred-demand cap, units

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Throws ValidationError unless lambda > 0, N >= 1, N0 >= 1.
void validate(const ModelParams& model);

struct AffineTail {
    double base = 0.0;
    double slope = 0.0;

    friend bool operator==(const AffineTail&, const AffineTail&) = default;
};

/// Penalty for losing i clients in one cycle, i >= 1. Entry k of `list` is the
/// penalty for k + 1 clients; past the list the penalty is base + slope * i.
class LostClientPenalty {
public:
    LostClientPenalty() = default;
    /// Without an explicit tail the slope is the last difference of the list
    /// (0 for a single entry) and the base continues the list's last entry.
    explicit LostClientPenalty(std::vector<double> list, std::optional<AffineTail> tail = std::nullopt);

    static LostClientPenalty linear(double per_client) { return LostClientPenalty({}, AffineTail{0.0, per_client}); }

    double operator()(int lost) const;
    const std::vector<double>& list() const noexcept { return list_; }
    const AffineTail& tail() const noexcept { return tail_; }
    bool tail_explicit() const noexcept { return tail_explicit_; }
    /// Largest listed penalty, 0 for an empty list.
    double list_max() const noexcept;

    LostClientPenalty scaled(double k) const;

    friend bool operator==(const LostClientPenalty&, const LostClientPenalty&) = default;

private:
    std::vector<double> list_;
    AffineTail tail_;
    bool tail_explicit_ = false;
};

struct CostParams {
    double c0 = 0.0;  // income per unit sold
    double c1 = 0.0;  // holding, per unit per time
    double c2 = 0.0;  // purchase, per unit
    double c3 = 0.0;  // deficit, per deferred unit per time
    LostClientPenalty c4;

    CostParams scaled(double k) const;

    friend bool operator==(const CostParams&, const CostParams&) = default;
};

/// Throws ValidationError on negative costs or a penalty sequence that goes
/// negative for some i >= 1.
void validate(const CostParams& costs);

/// Money per cycle by category. Costs are stored as positive amounts.
struct ProfitBreakdown {
    double income = 0.0;
    double holding = 0.0;
    double purchase = 0.0;
    double deficit = 0.0;
    double lost_client = 0.0;

    double total() const noexcept { return income - holding - purchase - deficit - lost_client; }
    ProfitBreakdown& operator+=(const ProfitBreakdown& o) noexcept;

    friend bool operator==(const ProfitBreakdown&, const ProfitBreakdown&) = default;
};

struct Evaluation {
    int r = 0;
    double A = 0.0;  // expected profit per cycle
    double B = 0.0;  // expected cycle length
    double I = 0.0;  // A / B
    ProfitBreakdown breakdown;
    int s_truncated_at = 0;  // last s included in the series
    double tail_bound = 0.0;
    bool flagged = false;  // hard cap reached before the tail bound met tolerance
};

/// kExact prices every delay segment with the residual kernel, which is what
/// the simulated process does. kPublished keeps the simplified pricing of
/// in-delay gaps as P(A_s)/lambda and of whole-delay spans as
/// mean_delay * P(A_s); it does not match the simulated process.
enum class FormulaSet { kExact, kPublished };

struct ProfitOptions {
    FormulaSet formulas = FormulaSet::kExact;
    QuadratureConfig quadrature{};
    double truncation_rel = 1e-9;
};

/// Which stretch of the reorder range r sits in.
enum class Regime {
    kOrderAtFull,      // r = N
    kOrderWithStock,   // 1 <= r < N
    kOrderAtZero,      // r = 0
    kOrderInDeficit,   // -N0 < r <= -1
    kOrderAtCap,       // r = -N0
};

/// What the s delay-period arrivals do to the stock.
enum class DelayOutcome {
    kNoArrivals,       // s = 0
    kStockRemains,     // stock stays positive
    kStockExhausted,   // stock hits exactly zero
    kDeficitGrows,     // deficit stays below N0
    kDeficitFull,      // deficit reaches N0 with no loss
    kClientsLost,      // arrivals past the cap are lost
};

struct CaseId {
    Regime regime;
    DelayOutcome outcome;

    friend bool operator==(const CaseId&, const CaseId&) = default;
};

Regime regime_of(const ModelParams& model, int r);

/// Dispatch for (r, s). Throws InvariantViolation outside U x {0, 1, ...}.
CaseId classify(const ModelParams& model, int r, int s);

/// Level counts of one (r, s) case: units sold and lost, and level sums over
/// each stretch of the cycle. Consumption-phase levels each last one
/// inter-arrival gap; the s in-delay gaps and the final residual share the
/// delay.
struct CaseCoefficients {
    int sold = 0;
    int lost = 0;
    double consumption_stock = 0.0;    // sum of positive levels
    double consumption_deficit = 0.0;  // sum of deficits
    double gap_stock = 0.0;
    double gap_deficit = 0.0;
    double residual_stock = 0.0;
    double residual_deficit = 0.0;
};

CaseCoefficients case_coefficients(const ModelParams& model, int r, int s);

struct TermProfit {
    double value = 0.0;
    ProfitBreakdown breakdown;
};

/// E[cycle profit; exactly s arrivals during the delay] using a prepared
/// kernel table (table.s_max() >= s).
TermProfit term_profit(const ModelParams& model, const CostParams& costs, const KernelTable& table, int r, int s,
                       FormulaSet formulas = FormulaSet::kExact);
TermProfit term_profit(const ModelParams& model, const CostParams& costs, const KernelContext& ctx, int r, int s,
                       const ProfitOptions& options = {});

/// max(kernel_hard_cap, N + N0 + 1).
int series_cap(const ModelParams& model, const KernelContext& ctx);

struct CycleProfit {
    double A = 0.0;
    ProfitBreakdown breakdown;
    int s_truncated_at = 0;
    double tail_bound = 0.0;
    bool flagged = false;
};

CycleProfit cycle_profit(const ModelParams& model, const CostParams& costs, const KernelTable& table, int r,
                         const ProfitOptions& options = {});
CycleProfit cycle_profit(const ModelParams& model, const CostParams& costs, const KernelContext& ctx, int r,
                         const ProfitOptions& options = {});

/// (N - r) / lambda + mean delay.
double cycle_length(const ModelParams& model, const KernelContext& ctx, int r);

Evaluation efficiency(const ModelParams& model, const CostParams& costs, const KernelTable& table, int r,
                      const ProfitOptions& options = {});
Evaluation efficiency(const ModelParams& model, const CostParams& costs, const KernelContext& ctx, int r,
                      const ProfitOptions& options = {});

/// Builds the kernel table efficiency() would build for this r.
KernelTable make_kernel_table(const ModelParams& model, const KernelContext& ctx, const ProfitOptions& options = {});

}  // namespace reginv
