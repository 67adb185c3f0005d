#include "reginv/report.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "reginv/errors.hpp"

namespace reginv {

using nlohmann::json;

const char* const kSweepHeader = "r,A,B,I,income,holding,purchase,deficit,lost";

json to_json(const ProfitBreakdown& b) {
    return json{{"income", b.income},
                {"holding", b.holding},
                {"purchase", b.purchase},
                {"deficit", b.deficit},
                {"lost_client", b.lost_client}};
}

json to_json(const Evaluation& e) {
    return json{{"r", e.r},
                {"A", e.A},
                {"B", e.B},
                {"I", e.I},
                {"breakdown", to_json(e.breakdown)},
                {"s_truncated_at", e.s_truncated_at},
                {"tail_bound", e.tail_bound},
                {"flagged", e.flagged}};
}

json to_json(const OptimizationResult& result) {
    json table = json::array();
    for (const Evaluation& e : result.table) table.push_back(to_json(e));
    return json{{"r_star", result.r_star}, {"I_star", result.I_star}, {"ties", result.ties}, {"table", table}};
}

namespace {

json estimate_json(const Estimate& e) { return json{{"mean", e.mean}, {"se", e.se}}; }

}  // namespace

json to_json(const SimulationReport& report) {
    json per_s = json::array();
    for (const auto& [s, b] : report.per_s) {
        per_s.push_back(json{{"s", s},
                             {"hits", b.hits},
                             {"probability", estimate_json(b.probability)},
                             {"profit", estimate_json(b.profit)},
                             {"residual", estimate_json(b.residual)}});
    }
    return json{{"r", report.r},
                {"cycles", report.cycles},
                {"seed", report.seed},
                {"profit", estimate_json(report.profit)},
                {"duration", estimate_json(report.duration)},
                {"ratio", estimate_json(report.ratio)},
                {"arrivals", estimate_json(report.arrivals)},
                {"mean_breakdown", to_json(report.mean_breakdown)},
                {"per_s", per_s},
                {"low_sample", report.low_sample}};
}

ProfitBreakdown breakdown_from_json(const json& j) {
    return ProfitBreakdown{j.at("income").get<double>(), j.at("holding").get<double>(),
                           j.at("purchase").get<double>(), j.at("deficit").get<double>(),
                           j.at("lost_client").get<double>()};
}

Evaluation evaluation_from_json(const json& j) {
    Evaluation e;
    e.r = j.at("r").get<int>();
    e.A = j.at("A").get<double>();
    e.B = j.at("B").get<double>();
    e.I = j.at("I").get<double>();
    e.breakdown = breakdown_from_json(j.at("breakdown"));
    e.s_truncated_at = j.at("s_truncated_at").get<int>();
    e.tail_bound = j.at("tail_bound").get<double>();
    e.flagged = j.at("flagged").get<bool>();
    return e;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void write_sweep_fields(std::ostream& out, const Evaluation& e) {
    const ProfitBreakdown& b = e.breakdown;
    out << e.r << ',' << format_double(e.A) << ',' << format_double(e.B) << ',' << format_double(e.I) << ','
        << format_double(b.income) << ',' << format_double(b.holding) << ',' << format_double(b.purchase) << ','
        << format_double(b.deficit) << ',' << format_double(b.lost_client);
}

double parse_field(const std::string& s, std::size_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        throw ConfigError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<Evaluation>& table) {
    out << kSweepHeader << "\r\n";
    for (const Evaluation& e : table) {
        write_sweep_fields(out, e);
        out << "\r\n";
    }
}

std::vector<Evaluation> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSweepHeader) throw ConfigError("csv: unexpected header '" + line + "'");
    std::vector<Evaluation> out;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 9) throw ConfigError("csv line " + std::to_string(n) + ": expected 9 fields");
        Evaluation e;
        e.r = static_cast<int>(parse_field(f[0], n));
        e.A = parse_field(f[1], n);
        e.B = parse_field(f[2], n);
        e.I = parse_field(f[3], n);
        e.breakdown = ProfitBreakdown{parse_field(f[4], n), parse_field(f[5], n), parse_field(f[6], n),
                                      parse_field(f[7], n), parse_field(f[8], n)};
        out.push_back(e);
    }
    return out;
}

void write_evaluation_csv(std::ostream& out, const std::vector<Evaluation>& table) {
    out << kSweepHeader << ",s_truncated_at,tail_bound,flagged\r\n";
    for (const Evaluation& e : table) {
        write_sweep_fields(out, e);
        out << ',' << e.s_truncated_at << ',' << format_double(e.tail_bound) << ',' << (e.flagged ? 1 : 0)
            << "\r\n";
    }
}

void write_evaluation_table(std::ostream& out, const std::vector<Evaluation>& table) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%5s %14s %12s %14s %14s %12s %12s %12s %12s %5s %10s\n", "r", "A", "B", "I",
                  "income", "holding", "purchase", "deficit", "lost", "s_cut", "tail");
    out << buf;
    for (const Evaluation& e : table) {
        const ProfitBreakdown& b = e.breakdown;
        std::snprintf(buf, sizeof buf, "%5d %14.6f %12.6f %14.6f %14.6f %12.6f %12.6f %12.6f %12.6f %5d %10.2e%s\n",
                      e.r, e.A, e.B, e.I, b.income, b.holding, b.purchase, b.deficit, b.lost_client,
                      e.s_truncated_at, e.tail_bound, e.flagged ? "  WARNING: truncation tolerance not met" : "");
        out << buf;
    }
}

}  // namespace reginv
