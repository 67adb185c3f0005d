#include "reginv/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "reginv/config.hpp"
#include "reginv/errors.hpp"
#include "reginv/report.hpp"

namespace reginv {
namespace {

struct Options {
    std::string config_path;
    std::optional<int> r;
    std::optional<std::int64_t> cycles;
    std::optional<std::uint64_t> seed;
    std::string format = "table";
    std::string out_path;
    std::string formulas;
    bool strict = false;
};

bool any_flagged(const std::vector<Evaluation>& table, std::ostream& err) {
    bool flagged = false;
    for (const Evaluation& e : table) {
        if (e.flagged) {
            err << "warning: r=" << e.r << ": series truncated at s=" << e.s_truncated_at
                << " with tail bound " << format_double(e.tail_bound) << " above tolerance\n";
            flagged = true;
        }
    }
    return flagged;
}

RunConfig load(const Options& o) {
    RunConfig cfg = load_config(o.config_path);
    if (o.formulas == "published") cfg.options.formulas = FormulaSet::kPublished;
    if (o.formulas == "exact") cfg.options.formulas = FormulaSet::kExact;
    return cfg;
}

void check_r(const RunConfig& cfg, int r) {
    if (r < -cfg.model.N0 || r > cfg.model.N) {
        throw ValidationError("--r", "reorder level " + std::to_string(r) + " outside admissible range [" +
                                         std::to_string(-cfg.model.N0) + ", " + std::to_string(cfg.model.N) +
                                         "]");
    }
}

int finish(const std::vector<Evaluation>& table, const Options& o, std::ostream& err) {
    return any_flagged(table, err) && o.strict ? kExitTruncation : kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load(o);
    std::vector<Evaluation> table;
    if (o.r) {
        check_r(cfg, *o.r);
        table.push_back(efficiency(cfg.model, cfg.costs, cfg.kernel_context(*o.r), *o.r, cfg.options));
    } else {
        table = scan(cfg.model, cfg.costs, cfg.delay, cfg.options);
    }
    if (o.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const Evaluation& e : table) arr.push_back(to_json(e));
        out << nlohmann::json{{"evaluations", arr}}.dump(2) << '\n';
    } else if (o.format == "csv") {
        write_evaluation_csv(out, table);
    } else {
        write_evaluation_table(out, table);
    }
    return finish(table, o, err);
}

int cmd_optimize(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load(o);
    const OptimizationResult res = optimize(cfg.model, cfg.costs, cfg.delay, cfg.options);
    if (o.format == "json") {
        out << to_json(res).dump(2) << '\n';
    } else if (o.format == "csv") {
        write_evaluation_csv(out, res.table);
    } else {
        write_evaluation_table(out, res.table);
        out << "\nr* = " << res.r_star << "   I* = " << format_double(res.I_star) << "   ties:";
        for (int r : res.ties) out << ' ' << r;
        out << '\n';
    }
    return finish(res.table, o, err);
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load(o);
    if (!o.r) throw ValidationError("--r", "simulate needs a reorder level");
    check_r(cfg, *o.r);
    const std::int64_t cycles = o.cycles.value_or(cfg.simulation.cycles);
    if (cycles < 2) throw ValidationError("--cycles", "must be >= 2");
    const std::uint64_t seed = o.seed.value_or(cfg.simulation.seed);

    const SimulationReport rep = estimate(cfg.model, cfg.costs, cfg.delay, *o.r, cycles, seed);
    const Evaluation ev = efficiency(cfg.model, cfg.costs, cfg.kernel_context(*o.r), *o.r, cfg.options);
    const double diff = rep.ratio.mean - ev.I;
    const double z = rep.ratio.se > 0.0 ? diff / rep.ratio.se : (diff == 0.0 ? 0.0 : std::copysign(HUGE_VAL, diff));
    if (rep.low_sample) {
        err << "warning: only " << cycles << " cycles simulated; standard errors are unreliable below 100\n";
    }

    if (o.format == "json") {
        nlohmann::json j{{"simulation", to_json(rep)}, {"analytic", to_json(ev)}, {"z", z}};
        out << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        out << "r,cycles,seed,ratio,ratio_se,analytic_I,z,mean_profit,profit_se,mean_duration,duration_se,"
               "low_sample\r\n";
        out << rep.r << ',' << rep.cycles << ',' << rep.seed << ',' << format_double(rep.ratio.mean) << ','
            << format_double(rep.ratio.se) << ',' << format_double(ev.I) << ',' << format_double(z) << ','
            << format_double(rep.profit.mean) << ',' << format_double(rep.profit.se) << ','
            << format_double(rep.duration.mean) << ',' << format_double(rep.duration.se) << ','
            << (rep.low_sample ? 1 : 0) << "\r\n";
    } else {
        char buf[160];
        out << "r = " << rep.r << ", cycles = " << rep.cycles << ", seed = " << rep.seed
            << (rep.low_sample ? "  (LOW SAMPLE)" : "") << '\n';
        std::snprintf(buf, sizeof buf, "profit/cycle  %14.6f +- %.6f   analytic %14.6f\n", rep.profit.mean,
                      rep.profit.se, ev.A);
        out << buf;
        std::snprintf(buf, sizeof buf, "cycle length  %14.6f +- %.6f   analytic %14.6f\n", rep.duration.mean,
                      rep.duration.se, ev.B);
        out << buf;
        std::snprintf(buf, sizeof buf, "profit/time   %14.6f +- %.6f   analytic %14.6f   z = %.3f\n",
                      rep.ratio.mean, rep.ratio.se, ev.I, z);
        out << buf;
        out << "\n    s       hits    P(A_s)     E[profit; A_s]     E[residual; A_s]\n";
        for (const auto& [s, b] : rep.per_s) {
            std::snprintf(buf, sizeof buf, "%5d %10lld  %.6f  %12.6f +- %.6f  %10.6f +- %.6f\n", s,
                          static_cast<long long>(b.hits), b.probability.mean, b.profit.mean, b.profit.se,
                          b.residual.mean, b.residual.se);
            out << buf;
        }
    }
    return finish({ev}, o, err);
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load(o);
    const std::vector<Evaluation> table = scan(cfg.model, cfg.costs, cfg.delay, cfg.options);
    write_sweep_csv(out, table);
    return finish(table, o, err);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reorder-level evaluation for a regenerative inventory model with Poisson demand"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", o.config_path, "JSON run configuration")->required();
        cmd->add_option("--out", o.out_path, "write the report here instead of stdout");
        cmd->add_flag("--strict", o.strict, "exit with status 4 if any series hits its cap");
        cmd->add_option("--formulas", o.formulas, "override the config's formula set")
            ->check(CLI::IsMember({"exact", "published"}));
    };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", o.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
    };

    CLI::App* evaluate = app.add_subcommand("evaluate", "A, B and I for one or every reorder level");
    add_common(evaluate);
    add_format(evaluate);
    evaluate->add_option("--r", o.r, "single reorder level");

    CLI::App* opt = app.add_subcommand("optimize", "best reorder level with the full table");
    add_common(opt);
    add_format(opt);

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo estimate next to the analytic value");
    add_common(sim);
    add_format(sim);
    sim->add_option("--r", o.r, "reorder level")->required();
    sim->add_option("--cycles", o.cycles, "regeneration cycles to simulate");
    sim->add_option("--seed", o.seed, "master seed");

    CLI::App* sweep = app.add_subcommand("sweep", "CSV of every reorder level");
    add_common(sweep);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParseError;
    }

    std::ofstream file;
    std::ostringstream buffer;
    std::ostream& dest = o.out_path.empty() ? out : static_cast<std::ostream&>(buffer);
    int code = kExitFailure;
    try {
        if (evaluate->parsed()) code = cmd_evaluate(o, dest, err);
        else if (opt->parsed()) code = cmd_optimize(o, dest, err);
        else if (sim->parsed()) code = cmd_simulate(o, dest, err);
        else if (sweep->parsed()) code = cmd_sweep(o, dest, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParseError;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidationError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    if (!o.out_path.empty()) {
        file.open(o.out_path, std::ios::binary);
        if (!file || !(file << buffer.str())) {
            err << "error: cannot write '" << o.out_path << "'\n";
            return kExitFailure;
        }
    }
    return code;
}

}  // namespace reginv
