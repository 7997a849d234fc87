#include "stablemc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "stablemc/errors.hpp"

namespace stablemc {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ValidationError("unknown key '" + key + "' in " + where);
        }
    }
}

double get_number(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) {
        throw ValidationError("field '" + key + "' must be a number");
    }
    return obj.at(key).get<double>();
}

std::uint64_t get_uint(const json& obj, const std::string& key, std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number_unsigned() && !obj.at(key).is_number_integer()) {
        throw ValidationError("field '" + key + "' must be a non-negative integer");
    }
    const auto v = obj.at(key).get<std::int64_t>();
    if (v < 0) {
        throw ValidationError("field '" + key + "' must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(v);
}

ULaw parse_u_law(const json& j) {
    if (!j.is_object() || !j.contains("type")) {
        throw ValidationError("u_law must be an object with a 'type'");
    }
    reject_unknown_keys(j, {"type", "mu", "sigma", "value"}, "u_law");
    const std::string type = j.at("type").get<std::string>();
    if (type == "lognormal") {
        return ULaw::lognormal(get_number(j, "mu", 0.0), get_number(j, "sigma", 0.5));
    }
    if (type == "degenerate") {
        return ULaw::degenerate(get_number(j, "value", 1.0));
    }
    throw ValidationError("u_law type must be 'lognormal' or 'degenerate'");
}

WLaw parse_w_law(const json& j) {
    if (!j.is_object() || !j.contains("type")) {
        throw ValidationError("w_law must be an object with a 'type'");
    }
    reject_unknown_keys(j, {"type", "lo", "hi", "value"}, "w_law");
    const std::string type = j.at("type").get<std::string>();
    if (type == "uniform") {
        return WLaw::uniform(get_number(j, "lo", 0.5), get_number(j, "hi", 1.0));
    }
    if (type == "degenerate") {
        return WLaw::degenerate(get_number(j, "value", 1.0));
    }
    throw ValidationError("w_law type must be 'uniform' or 'degenerate'");
}

ScenarioConfig parse_scenario(const json& j) {
    if (j.is_string()) {
        return ScenarioConfig::by_name(j.get<std::string>());
    }
    if (!j.is_object() || !j.contains("name")) {
        throw ValidationError("scenario must be a name or an object with a 'name'");
    }
    ScenarioConfig cfg = ScenarioConfig::by_name(j.at("name").get<std::string>());
    if (cfg.name == "moving_indicator") {
        reject_unknown_keys(j, {"name", "r_values"}, "scenario");
        auto& params = std::get<MovingIndicatorConfig>(cfg.params);
        if (j.contains("r_values")) {
            params.r_values = j.at("r_values").get<std::vector<std::uint32_t>>();
        }
    } else if (cfg.name == "hitting_midpoint") {
        reject_unknown_keys(j, {"name"}, "scenario");
    } else if (cfg.name == "exchangeable_clt") {
        reject_unknown_keys(j, {"name", "u_law"}, "scenario");
        auto& params = std::get<ExchangeableCltConfig>(cfg.params);
        if (j.contains("u_law")) params.u_law = parse_u_law(j.at("u_law"));
    } else {
        reject_unknown_keys(j,
                            {"name", "w_law", "u_factor", "drift_grid", "bridge_grid",
                             "path_metric", "skorohod_resolution"},
                            "scenario");
        auto& params = std::get<ExchangeableEmpiricalConfig>(cfg.params);
        if (j.contains("w_law")) params.w_law = parse_w_law(j.at("w_law"));
        params.u_factor = get_number(j, "u_factor", params.u_factor);
        params.drift_grid = get_uint(j, "drift_grid", params.drift_grid);
        params.bridge_grid = get_uint(j, "bridge_grid", params.bridge_grid);
        if (j.contains("path_metric")) {
            const std::string metric = j.at("path_metric").get<std::string>();
            if (metric == "sup_norm") {
                params.path_metric = PathTrajectory::Metric::sup_norm;
            } else if (metric == "skorohod") {
                params.path_metric = PathTrajectory::Metric::skorohod;
            } else {
                throw ValidationError("path_metric must be 'sup_norm' or 'skorohod'");
            }
        }
        params.skorohod_resolution =
            static_cast<int>(get_uint(j, "skorohod_resolution", 512));
    }
    return cfg;
}

ProbeGrid parse_probe(const json& j, std::vector<ConditionVariant>* variants) {
    reject_unknown_keys(
        j, {"n_values", "delta_values", "epsilon_values", "replications", "variants"}, "probe");
    ProbeGrid grid;
    if (j.contains("n_values")) grid.n_values = j.at("n_values").get<std::vector<std::uint32_t>>();
    if (j.contains("delta_values")) {
        grid.delta_values = j.at("delta_values").get<std::vector<double>>();
    }
    if (j.contains("epsilon_values")) {
        grid.epsilon_values = j.at("epsilon_values").get<std::vector<double>>();
    }
    grid.replications = get_uint(j, "replications", grid.replications);
    if (j.contains("variants")) {
        variants->clear();
        for (const auto& name : j.at("variants")) {
            variants->push_back(variant_from_name(name.get<std::string>()));
        }
        if (variants->empty()) {
            throw ValidationError("probe.variants must not be empty when given");
        }
    }
    for (const double d : grid.delta_values) {
        if (!(d > 0.0 && d <= 1.0)) {
            throw ValidationError("delta must lie in (0,1]");
        }
    }
    return grid;
}

DiagnosticsConfig parse_diagnostics(const json& j) {
    reject_unknown_keys(j, {"n", "reps", "alpha", "events"}, "diagnostics");
    DiagnosticsConfig d;
    d.n = static_cast<std::uint32_t>(get_uint(j, "n", d.n));
    d.reps = get_uint(j, "reps", d.reps);
    d.alpha = get_number(j, "alpha", d.alpha);
    if (!(d.alpha > 0.0 && d.alpha < 1.0)) {
        throw ValidationError("diagnostics.alpha must lie in (0,1)");
    }
    if (d.n == 0 || d.reps == 0) {
        throw ValidationError("diagnostics.n and diagnostics.reps must be positive");
    }
    if (j.contains("events")) {
        const json& ev = j.at("events");
        if (ev.is_string()) {
            if (ev.get<std::string>() != "quartiles") {
                throw ValidationError("diagnostics.events must be 'quartiles' or an object");
            }
            d.events.kind = EventsSpec::Kind::quartiles;
        } else if (ev.is_object()) {
            reject_unknown_keys(ev, {"intervals"}, "diagnostics.events");
            d.events.kind = EventsSpec::Kind::intervals;
            for (const auto& pair : ev.at("intervals")) {
                if (!pair.is_array() || pair.size() != 2) {
                    throw ValidationError("each event interval must be a [lo, hi) pair");
                }
                const double lo = pair[0].get<double>();
                const double hi = pair[1].get<double>();
                if (!(lo < hi)) {
                    throw ValidationError("event intervals need lo < hi");
                }
                d.events.intervals.emplace_back(lo, hi);
            }
            if (d.events.intervals.empty()) {
                throw ValidationError("diagnostics.events.intervals must not be empty");
            }
        } else {
            throw ValidationError("diagnostics.events must be 'quartiles' or an object");
        }
    }
    return d;
}

}  // namespace

std::vector<ConditioningEvent> EventsSpec::build(const Scenario& scenario) const {
    if (kind == Kind::quartiles) {
        return scenario.quartile_events();
    }
    std::vector<ConditioningEvent> events;
    for (const auto& [lo, hi] : intervals) {
        std::ostringstream label;
        label << "U_in_[" << lo << "," << hi << ")";
        events.push_back({label.str(), [lo = lo, hi = hi](const MixingState& m) {
                              return m.u >= lo && m.u < hi;
                          }});
    }
    return events;
}

ProbeGrid RunConfig::effective_grid() const {
    if (probe.has_value()) return *probe;
    return default_probe_grid(scenario.name);
}

RunOptions RunConfig::run_options() const {
    RunOptions opts;
    opts.min_event_count = min_event_count;
    opts.workers = workers;
    return opts;
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) {
        throw ValidationError("config must be a JSON object");
    }
    reject_unknown_keys(j,
                        {"scenario", "master_seed", "probe", "diagnostics", "output_dir",
                         "workers", "max_horizon", "min_event_count", "dump_paths"},
                        "config");
    if (!j.contains("scenario")) {
        throw ValidationError("config requires a 'scenario'");
    }

    RunConfig cfg;
    cfg.scenario = parse_scenario(j.at("scenario"));
    cfg.master_seed = get_uint(j, "master_seed", 1);
    if (j.contains("probe")) {
        cfg.probe = parse_probe(j.at("probe"), &cfg.probe_variants);
        ProbeGrid filled = *cfg.probe;
        const ProbeGrid defaults = default_probe_grid(cfg.scenario.name);
        if (filled.n_values.empty()) filled.n_values = defaults.n_values;
        if (filled.delta_values.empty()) filled.delta_values = defaults.delta_values;
        if (filled.epsilon_values.empty()) filled.epsilon_values = defaults.epsilon_values;
        filled.validate();
        cfg.probe = filled;
    }
    if (j.contains("diagnostics")) {
        cfg.diagnostics = parse_diagnostics(j.at("diagnostics"));
    }
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    cfg.workers = static_cast<unsigned>(get_uint(j, "workers", 0));
    cfg.max_horizon = get_uint(j, "max_horizon", kDefaultMaxHorizon);
    cfg.min_event_count = get_uint(j, "min_event_count", 200);
    if (j.contains("dump_paths")) {
        if (!j.at("dump_paths").is_boolean()) {
            throw ValidationError("dump_paths must be a boolean");
        }
        cfg.dump_paths = j.at("dump_paths").get<bool>();
    }
    if (cfg.max_horizon == 0) {
        throw ValidationError("max_horizon must be positive");
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    json scenario{{"name", cfg.scenario.name}};
    if (cfg.scenario.name == "moving_indicator") {
        const auto& p = std::get<MovingIndicatorConfig>(cfg.scenario.params);
        if (!p.r_values.empty()) scenario["r_values"] = p.r_values;
    } else if (cfg.scenario.name == "exchangeable_clt") {
        const auto& p = std::get<ExchangeableCltConfig>(cfg.scenario.params);
        if (p.u_law.kind == ULaw::Kind::lognormal) {
            scenario["u_law"] = {{"type", "lognormal"}, {"mu", p.u_law.mu},
                                 {"sigma", p.u_law.sigma}};
        } else {
            scenario["u_law"] = {{"type", "degenerate"}, {"value", p.u_law.value}};
        }
    } else if (cfg.scenario.name == "exchangeable_empirical") {
        const auto& p = std::get<ExchangeableEmpiricalConfig>(cfg.scenario.params);
        if (p.w_law.kind == WLaw::Kind::uniform) {
            scenario["w_law"] = {{"type", "uniform"}, {"lo", p.w_law.lo}, {"hi", p.w_law.hi}};
        } else {
            scenario["w_law"] = {{"type", "degenerate"}, {"value", p.w_law.value}};
        }
        scenario["u_factor"] = p.u_factor;
        scenario["drift_grid"] = p.drift_grid;
        scenario["bridge_grid"] = p.bridge_grid;
        scenario["path_metric"] =
            p.path_metric == PathTrajectory::Metric::sup_norm ? "sup_norm" : "skorohod";
        scenario["skorohod_resolution"] = p.skorohod_resolution;
    }

    // Worker count and output directory are runtime knobs with no effect on
    // any number; they stay out of the echo so report.json is byte-identical
    // across runs of the same experiment.
    json out{{"scenario", scenario},
             {"master_seed", cfg.master_seed},
             {"max_horizon", cfg.max_horizon},
             {"min_event_count", cfg.min_event_count},
             {"dump_paths", cfg.dump_paths}};
    if (cfg.probe.has_value()) {
        json variants = json::array();
        for (const auto v : cfg.probe_variants) variants.push_back(variant_name(v));
        out["probe"] = {{"n_values", cfg.probe->n_values},
                        {"delta_values", cfg.probe->delta_values},
                        {"epsilon_values", cfg.probe->epsilon_values},
                        {"replications", cfg.probe->replications},
                        {"variants", variants}};
    }
    if (cfg.diagnostics.has_value()) {
        json d{{"n", cfg.diagnostics->n},
               {"reps", cfg.diagnostics->reps},
               {"alpha", cfg.diagnostics->alpha}};
        if (cfg.diagnostics->events.kind == EventsSpec::Kind::quartiles) {
            d["events"] = "quartiles";
        } else {
            json intervals = json::array();
            for (const auto& [lo, hi] : cfg.diagnostics->events.intervals) {
                intervals.push_back(json::array({lo, hi}));
            }
            d["events"] = {{"intervals", intervals}};
        }
        out["diagnostics"] = d;
    }
    return out;
}

}  // namespace stablemc
