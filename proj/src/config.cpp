#include "reginv/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <json.hpp>

#include "reginv/errors.hpp"

namespace reginv {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(path + "." + key + ": missing");
    return *it;
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(path + "." + key + ": unknown key");
    }
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

long long as_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
    return j.get<long long>();
}

int as_int(const json& j, const std::string& path) {
    const long long v = as_integer(j, path);
    if (v < -1000000000LL || v > 1000000000LL) throw ValidationError(path, "out of range");
    return static_cast<int>(v);
}

double number_at(const json& obj, const char* key, const std::string& path) {
    return as_number(require(obj, key, path), path + "." + key);
}

DelayFamily parse_family(const json& j, const std::string& path, std::initializer_list<const char*> extra) {
    expect_object(j, path);
    const json& fam = require(j, "family", path);
    if (!fam.is_string()) throw ConfigError(path + ".family: expected a string");
    const std::string name = fam.get<std::string>();
    auto keys = [&](std::initializer_list<const char*> own) {
        std::vector<const char*> all(own);
        all.push_back("family");
        all.insert(all.end(), extra.begin(), extra.end());
        for (const auto& [key, _] : j.items()) {
            bool ok = false;
            for (const char* a : all) ok = ok || key == a;
            if (!ok) throw ConfigError(path + "." + key + ": unknown key for family " + name);
        }
    };
    if (name == "point_mass") {
        keys({"T"});
        return PointMass{number_at(j, "T", path)};
    }
    if (name == "exponential") {
        keys({"rate"});
        return Exponential{number_at(j, "rate", path)};
    }
    if (name == "gamma") {
        keys({"shape", "scale"});
        return GammaDelay{number_at(j, "shape", path), number_at(j, "scale", path)};
    }
    if (name == "uniform") {
        keys({"a", "b"});
        return UniformDelay{number_at(j, "a", path), number_at(j, "b", path)};
    }
    throw ConfigError(path + ".family: unknown family '" + name +
                      "' (expected point_mass, exponential, gamma or uniform)");
}

json family_json(const DelayFamily& f) {
    json j;
    j["family"] = family_name(f);
    if (const auto* d = std::get_if<PointMass>(&f)) j["T"] = d->T;
    if (const auto* d = std::get_if<Exponential>(&f)) j["rate"] = d->rate;
    if (const auto* d = std::get_if<GammaDelay>(&f)) {
        j["shape"] = d->shape;
        j["scale"] = d->scale;
    }
    if (const auto* d = std::get_if<UniformDelay>(&f)) {
        j["a"] = d->a;
        j["b"] = d->b;
    }
    return j;
}

LostClientPenalty parse_penalty(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path, {"list", "affine_tail"});
    std::vector<double> list;
    if (auto it = j.find("list"); it != j.end()) {
        if (!it->is_array()) throw ConfigError(path + ".list: expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            list.push_back(as_number((*it)[i], path + ".list[" + std::to_string(i) + "]"));
        }
    }
    std::optional<AffineTail> tail;
    if (auto it = j.find("affine_tail"); it != j.end()) {
        const std::string tp = path + ".affine_tail";
        expect_object(*it, tp);
        reject_unknown(*it, tp, {"base", "slope"});
        tail = AffineTail{number_at(*it, "base", tp), number_at(*it, "slope", tp)};
    }
    return LostClientPenalty(std::move(list), tail);
}

}  // namespace

bool same_config(const RunConfig& a, const RunConfig& b) {
    const auto& qa = a.options.quadrature;
    const auto& qb = b.options.quadrature;
    return a.model == b.model && a.costs == b.costs && a.delay == b.delay &&
           a.options.formulas == b.options.formulas && a.options.truncation_rel == b.options.truncation_rel &&
           qa.rel_tol == qb.rel_tol && qa.abs_tol == qb.abs_tol && qa.max_intervals == qb.max_intervals &&
           a.simulation == b.simulation;
}

void validate(const RunConfig& config) {
    validate(config.model);
    validate(config.costs);
    for (const auto& [r, fam] : config.delay.per_r()) {
        if (r < -config.model.N0 || r > config.model.N) {
            throw ValidationError("delay.per_r", "override for r=" + std::to_string(r) + " outside [" +
                                                     std::to_string(-config.model.N0) + ", " +
                                                     std::to_string(config.model.N) + "]");
        }
    }
    // A reorder at full stock needs a positive expected delay for the cycle to have length.
    if (!(mean_delay(config.delay, config.model.N) > 0.0)) {
        throw ValidationError("delay", "mean delay at r=N must be positive");
    }
    const auto& q = config.options.quadrature;
    if (!(q.rel_tol > 0.0) || !(q.abs_tol >= 0.0)) throw ValidationError("tolerances", "must be positive");
    if (q.max_intervals < 1) throw ValidationError("tolerances.max_intervals", "must be >= 1");
    if (!(config.options.truncation_rel > 0.0)) throw ValidationError("tolerances.truncation_rel", "must be > 0");
    if (config.simulation.cycles < 2) throw ValidationError("simulation.cycles", "must be >= 2");
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    expect_object(root, "config");
    reject_unknown(root, "config", {"model", "costs", "delay", "tolerances", "simulation", "formulas"});

    RunConfig cfg;
    const json& model = require(root, "model", "config");
    expect_object(model, "model");
    reject_unknown(model, "model", {"lambda", "N", "N0"});
    cfg.model.lambda = number_at(model, "lambda", "model");
    cfg.model.N = as_int(require(model, "N", "model"), "model.N");
    cfg.model.N0 = as_int(require(model, "N0", "model"), "model.N0");

    const json& costs = require(root, "costs", "config");
    expect_object(costs, "costs");
    reject_unknown(costs, "costs", {"c0", "c1", "c2", "c3", "c4"});
    cfg.costs.c0 = number_at(costs, "c0", "costs");
    cfg.costs.c1 = number_at(costs, "c1", "costs");
    cfg.costs.c2 = number_at(costs, "c2", "costs");
    cfg.costs.c3 = number_at(costs, "c3", "costs");
    if (auto it = costs.find("c4"); it != costs.end()) cfg.costs.c4 = parse_penalty(*it, "costs.c4");

    const json& delay = require(root, "delay", "config");
    const DelayFamily base = parse_family(delay, "delay", {"per_r"});
    std::map<int, DelayFamily> per_r;
    if (auto it = delay.find("per_r"); it != delay.end()) {
        if (!it->is_array()) throw ConfigError("delay.per_r: expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string p = "delay.per_r[" + std::to_string(i) + "]";
            const json& entry = (*it)[i];
            expect_object(entry, p);
            const int r = as_int(require(entry, "r", p), p + ".r");
            if (!per_r.emplace(r, parse_family(entry, p, {"r"})).second) {
                throw ConfigError(p + ".r: duplicate override for r=" + std::to_string(r));
            }
        }
    }
    cfg.delay = DelaySpec(base, std::move(per_r));

    if (auto it = root.find("tolerances"); it != root.end()) {
        expect_object(*it, "tolerances");
        reject_unknown(*it, "tolerances", {"quad_rel", "quad_abs", "truncation_rel", "max_intervals"});
        auto& q = cfg.options.quadrature;
        if (it->contains("quad_rel")) q.rel_tol = number_at(*it, "quad_rel", "tolerances");
        if (it->contains("quad_abs")) q.abs_tol = number_at(*it, "quad_abs", "tolerances");
        if (it->contains("truncation_rel")) {
            cfg.options.truncation_rel = number_at(*it, "truncation_rel", "tolerances");
        }
        if (it->contains("max_intervals")) {
            q.max_intervals = as_int((*it)["max_intervals"], "tolerances.max_intervals");
        }
    }
    if (auto it = root.find("simulation"); it != root.end()) {
        expect_object(*it, "simulation");
        reject_unknown(*it, "simulation", {"cycles", "seed"});
        if (it->contains("cycles")) cfg.simulation.cycles = as_integer((*it)["cycles"], "simulation.cycles");
        if (it->contains("seed")) {
            const json& s = (*it)["seed"];
            if (!s.is_number_unsigned()) throw ConfigError("simulation.seed: expected a nonnegative integer");
            cfg.simulation.seed = s.get<std::uint64_t>();
        }
    }
    if (auto it = root.find("formulas"); it != root.end()) {
        const std::string f = it->is_string() ? it->get<std::string>() : "";
        if (f == "exact") {
            cfg.options.formulas = FormulaSet::kExact;
        } else if (f == "published") {
            cfg.options.formulas = FormulaSet::kPublished;
        } else {
            throw ConfigError("formulas: expected \"exact\" or \"published\"");
        }
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& config, int indent) {
    json root;
    root["model"] = {{"lambda", config.model.lambda}, {"N", config.model.N}, {"N0", config.model.N0}};
    json c4;
    c4["list"] = config.costs.c4.list();
    if (config.costs.c4.tail_explicit()) {
        c4["affine_tail"] = {{"base", config.costs.c4.tail().base}, {"slope", config.costs.c4.tail().slope}};
    }
    root["costs"] = {{"c0", config.costs.c0},
                     {"c1", config.costs.c1},
                     {"c2", config.costs.c2},
                     {"c3", config.costs.c3},
                     {"c4", c4}};
    json delay = family_json(config.delay.base());
    if (!config.delay.per_r().empty()) {
        json list = json::array();
        for (const auto& [r, fam] : config.delay.per_r()) {
            json e = family_json(fam);
            e["r"] = r;
            list.push_back(e);
        }
        delay["per_r"] = list;
    }
    root["delay"] = delay;
    const auto& q = config.options.quadrature;
    root["tolerances"] = {{"quad_rel", q.rel_tol},
                          {"quad_abs", q.abs_tol},
                          {"truncation_rel", config.options.truncation_rel},
                          {"max_intervals", q.max_intervals}};
    root["simulation"] = {{"cycles", config.simulation.cycles}, {"seed", config.simulation.seed}};
    root["formulas"] = config.options.formulas == FormulaSet::kExact ? "exact" : "published";
    return root.dump(indent);
}

}  // namespace reginv
