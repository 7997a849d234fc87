#include "stablemc/report.hpp"

#include <cstdio>
#include <fstream>

#include "stablemc/errors.hpp"

namespace stablemc {

using nlohmann::json;

namespace {

json grid_to_json(const ProbeGrid& grid) {
    return json{{"n_values", grid.n_values},
                {"delta_values", grid.delta_values},
                {"epsilon_values", grid.epsilon_values},
                {"replications", grid.replications}};
}

ProbeGrid grid_from_json(const json& j) {
    ProbeGrid grid;
    grid.n_values = j.at("n_values").get<std::vector<std::uint32_t>>();
    grid.delta_values = j.at("delta_values").get<std::vector<double>>();
    grid.epsilon_values = j.at("epsilon_values").get<std::vector<double>>();
    grid.replications = j.at("replications").get<std::uint64_t>();
    return grid;
}

json probe_to_json(const ConditionEstimate& est) {
    json cells = json::array();
    for (const auto& c : est.cells) {
        cells.push_back(json{{"n", c.n},
                             {"delta", c.delta},
                             {"epsilon", c.epsilon},
                             {"event", c.event},
                             {"event_count", c.event_count},
                             {"exceed_count", c.exceed_count},
                             {"p_hat", c.p_hat},
                             {"se", c.se}});
    }
    json limsup = json::array();
    for (const auto& r : est.limsup) {
        limsup.push_back(json{{"delta", r.delta},
                              {"epsilon", r.epsilon},
                              {"event", r.event},
                              {"limsup_proxy", r.limsup_proxy}});
    }
    return json{{"variant", variant_name(est.variant)},
                {"grid", grid_to_json(est.grid)},
                {"cells", cells},
                {"limsup", limsup}};
}

ConditionEstimate probe_from_json(const json& j) {
    ConditionEstimate est;
    est.variant = variant_from_name(j.at("variant").get<std::string>());
    est.grid = grid_from_json(j.at("grid"));
    for (const auto& c : j.at("cells")) {
        ConditionCell cell;
        cell.n = c.at("n").get<std::uint32_t>();
        cell.delta = c.at("delta").get<double>();
        cell.epsilon = c.at("epsilon").get<double>();
        cell.event = c.at("event").get<std::string>();
        cell.event_count = c.at("event_count").get<std::uint64_t>();
        cell.exceed_count = c.at("exceed_count").get<std::uint64_t>();
        cell.p_hat = c.at("p_hat").get<double>();
        cell.se = c.at("se").get<double>();
        est.cells.push_back(std::move(cell));
    }
    for (const auto& r : j.at("limsup")) {
        LimsupRow row;
        row.delta = r.at("delta").get<double>();
        row.epsilon = r.at("epsilon").get<double>();
        row.event = r.at("event").get<std::string>();
        row.limsup_proxy = r.at("limsup_proxy").get<double>();
        est.limsup.push_back(std::move(row));
    }
    return est;
}

json equivalence_to_json(const EquivalenceReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) {
        rows.push_back(json{{"n", r.n},
                            {"delta", r.delta},
                            {"epsilon", r.epsilon},
                            {"p_d", r.p_d},
                            {"p_e", r.p_e},
                            {"abs_diff", r.abs_diff},
                            {"joint_3se", r.joint_3se},
                            {"flagged", r.flagged}});
    }
    return json{{"grid", grid_to_json(rep.grid)},
                {"rows", rows},
                {"any_flagged", rep.any_flagged}};
}

EquivalenceReport equivalence_from_json(const json& j) {
    EquivalenceReport rep;
    rep.grid = grid_from_json(j.at("grid"));
    rep.any_flagged = j.at("any_flagged").get<bool>();
    for (const auto& r : j.at("rows")) {
        EquivalenceRow row;
        row.n = r.at("n").get<std::uint32_t>();
        row.delta = r.at("delta").get<double>();
        row.epsilon = r.at("epsilon").get<double>();
        row.p_d = r.at("p_d").get<double>();
        row.p_e = r.at("p_e").get<double>();
        row.abs_diff = r.at("abs_diff").get<double>();
        row.joint_3se = r.at("joint_3se").get<double>();
        row.flagged = r.at("flagged").get<bool>();
        rep.rows.push_back(row);
    }
    return rep;
}

json diagnostic_to_json(const DiagnosticReport& rep) {
    json events = json::array();
    for (const auto& e : rep.events) {
        events.push_back(json{{"event", e.event},
                              {"sample_size", e.sample_size},
                              {"ks_statistic", e.ks_statistic},
                              {"p_value", e.p_value},
                              {"pass", e.pass}});
    }
    return json{{"n", rep.n},
                {"replications", rep.replications},
                {"alpha", rep.alpha},
                {"events", events},
                {"overall_pass", rep.overall_pass}};
}

DiagnosticReport diagnostic_from_json(const json& j) {
    DiagnosticReport rep;
    rep.n = j.at("n").get<std::uint32_t>();
    rep.replications = j.at("replications").get<std::uint64_t>();
    rep.alpha = j.at("alpha").get<double>();
    rep.overall_pass = j.at("overall_pass").get<bool>();
    for (const auto& e : j.at("events")) {
        EventDiagnostic ed;
        ed.event = e.at("event").get<std::string>();
        ed.sample_size = e.at("sample_size").get<std::uint64_t>();
        ed.ks_statistic = e.at("ks_statistic").get<double>();
        ed.p_value = e.at("p_value").get<double>();
        ed.pass = e.at("pass").get<bool>();
        rep.events.push_back(std::move(ed));
    }
    return rep;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << content;
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

}  // namespace

json report_to_json(const RunReport& report) {
    json probes = json::array();
    for (const auto& p : report.probes) probes.push_back(probe_to_json(p));
    json diagnostics = json::array();
    for (const auto& d : report.diagnostics) diagnostics.push_back(diagnostic_to_json(d));
    json errors = json::array();
    for (const auto& e : report.stage_errors) {
        errors.push_back(json{{"stage", e.stage}, {"message", e.message}});
    }
    json out{{"version", report.version},
             {"master_seed", report.master_seed},
             {"config", report.config_echo},
             {"probes", probes},
             {"diagnostics", diagnostics},
             {"stage_errors", errors},
             {"total_replicates", report.total_replicates},
             {"any_fail", report.any_fail}};
    out["equivalence"] =
        report.equivalence.has_value() ? equivalence_to_json(*report.equivalence) : json();
    return out;
}

RunReport report_from_json(const json& j) {
    RunReport report;
    report.version = j.at("version").get<std::string>();
    report.master_seed = j.at("master_seed").get<std::uint64_t>();
    report.config_echo = j.at("config");
    for (const auto& p : j.at("probes")) report.probes.push_back(probe_from_json(p));
    if (!j.at("equivalence").is_null()) {
        report.equivalence = equivalence_from_json(j.at("equivalence"));
    }
    for (const auto& d : j.at("diagnostics")) {
        report.diagnostics.push_back(diagnostic_from_json(d));
    }
    for (const auto& e : j.at("stage_errors")) {
        report.stage_errors.push_back(
            {e.at("stage").get<std::string>(), e.at("message").get<std::string>()});
    }
    report.total_replicates = j.at("total_replicates").get<std::uint64_t>();
    report.any_fail = j.at("any_fail").get<bool>();
    return report;
}

void write_report(const RunReport& report, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir / "tables", ec);
    if (ec) {
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }

    write_file(dir / "report.json", report_to_json(report).dump(2) + "\n");

    const json manifest{{"version", report.version},
                        {"master_seed", report.master_seed},
                        {"config", report.config_echo}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    for (const auto& probe : report.probes) {
        std::string csv = "n,delta,epsilon,event,p_hat,se,limsup_proxy\n";
        for (const auto& c : probe.cells) {
            double limsup_proxy = 0.0;
            for (const auto& r : probe.limsup) {
                if (r.delta == c.delta && r.epsilon == c.epsilon && r.event == c.event) {
                    limsup_proxy = r.limsup_proxy;
                    break;
                }
            }
            csv += std::to_string(c.n) + "," + fmt(c.delta) + "," + fmt(c.epsilon) + "," +
                   c.event + "," + fmt(c.p_hat) + "," + fmt(c.se) + "," + fmt(limsup_proxy) +
                   "\n";
        }
        write_file(dir / "tables" / ("probe_" + variant_name(probe.variant) + ".csv"), csv);
    }

    if (report.equivalence.has_value()) {
        std::string csv = "n,delta,epsilon,p_d,p_e,abs_diff,joint_3se,flagged\n";
        for (const auto& r : report.equivalence->rows) {
            csv += std::to_string(r.n) + "," + fmt(r.delta) + "," + fmt(r.epsilon) + "," +
                   fmt(r.p_d) + "," + fmt(r.p_e) + "," + fmt(r.abs_diff) + "," +
                   fmt(r.joint_3se) + "," + (r.flagged ? "1" : "0") + "\n";
        }
        write_file(dir / "tables" / "equivalence.csv", csv);
    }

    if (!report.diagnostics.empty()) {
        std::string csv = "n,replications,alpha,event,sample_size,ks_statistic,p_value,pass\n";
        for (const auto& d : report.diagnostics) {
            for (const auto& e : d.events) {
                csv += std::to_string(d.n) + "," + std::to_string(d.replications) + "," +
                       fmt(d.alpha) + "," + e.event + "," + std::to_string(e.sample_size) + "," +
                       fmt(e.ks_statistic) + "," + fmt(e.p_value) + "," +
                       (e.pass ? "1" : "0") + "\n";
            }
        }
        write_file(dir / "tables" / "diagnostics.csv", csv);
    }
}

}  // namespace stablemc
