// Command-line front end: named presets, map iteration, event-driven
// simulation, stability/region/bifurcation sweeps, and CSV/JSON output.
//
// Exit codes: 0 success, 2 domain/configuration error, 3 dynamical
// termination (stall or divergence; the trace is still written).

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "beatgen/calibration.hpp"
#include "beatgen/event_sim.hpp"
#include "beatgen/io.hpp"
#include "beatgen/lif.hpp"
#include "beatgen/linear.hpp"
#include "beatgen/maps.hpp"
#include "beatgen/model.hpp"
#include "beatgen/orbit.hpp"
#include "beatgen/parallel.hpp"
#include "beatgen/presets.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_dynamics = 3;

struct CommonOpts {
    std::string preset;
    std::optional<double> tau, t_stim, delta_t, delta_phi;
    std::string out = "-";
    std::string format = "csv";
    std::string presets_file;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--preset", c.preset, "named parameter preset (see `beatgen presets`)");
    cmd->add_option("--tau", c.tau, "membrane time constant (ms)");
    cmd->add_option("--tstim", c.t_stim, "stimulus interonset interval (ms)");
    cmd->add_option("--delta-t", c.delta_t, "period-correction strength");
    cmd->add_option("--delta-phi", c.delta_phi, "phase-correction strength");
    cmd->add_option("--out", c.out, "output path ('-' for stdout)");
    cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--presets-file", c.presets_file, "load presets from a JSON file instead of the built-ins");
}

beatgen::ModelParams params_from_preset_file(const std::string& path, const std::string& name) {
    std::ifstream in(path);
    if (!in) throw beatgen::domain_error("cannot open presets file: " + path);
    auto root = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    for (const auto& p : root.at("presets")) {
        if (p.at("name").get<std::string>() == name)
            return {p.at("tau").get<double>(), p.at("t_stim").get<double>(),
                    p.at("delta_t").get<double>(), p.at("delta_phi").get<double>()};
    }
    throw beatgen::domain_error("preset not found in file: " + name);
}

// Resolve preset + field overrides into concrete parameters and record the
// resolution into the config object.
beatgen::ModelParams resolve_params(const CommonOpts& c, ordered_json& cfg) {
    beatgen::ModelParams p;  // defaults carry the calibrated tau
    p.tau = beatgen::default_tau;
    if (!c.preset.empty()) {
        if (!c.presets_file.empty()) {
            p = params_from_preset_file(c.presets_file, c.preset);
        } else if (auto hit = beatgen::find_preset(c.preset)) {
            p = hit->params;
        } else {
            throw beatgen::domain_error("unknown preset: " + c.preset);
        }
    }
    if (c.tau) p.tau = *c.tau;
    if (c.t_stim) p.t_stim = *c.t_stim;
    if (c.delta_t) p.delta_t = *c.delta_t;
    if (c.delta_phi) p.delta_phi = *c.delta_phi;
    beatgen::validate(p);
    cfg["preset"] = c.preset.empty() ? ordered_json() : ordered_json(c.preset);
    cfg["params"] = {{"tau", p.tau}, {"t_stim", p.t_stim}, {"delta_t", p.delta_t}, {"delta_phi", p.delta_phi}};
    return p;
}

beatgen::ModelParams params_from_config(const ordered_json& cfg) {
    const auto& j = cfg.at("params");
    beatgen::ModelParams p{j.at("tau").get<double>(), j.at("t_stim").get<double>(),
                           j.at("delta_t").get<double>(), j.at("delta_phi").get<double>()};
    beatgen::validate(p);
    return p;
}

int write_output(const beatgen::io::Table& table, const ordered_json& cfg,
                 const ordered_json* result = nullptr) {
    std::string out = cfg.value("out", "-");
    std::string format = cfg.value("format", "csv");
    // The header must reproduce the run, not the destination: identical runs
    // written to different paths stay byte-identical.
    ordered_json header = cfg;
    header.erase("out");
    std::ostringstream buf;
    if (format == "json")
        table.write_json(buf, header, result);
    else
        table.write_csv(buf, header, result);
    if (out == "-") {
        std::cout << buf.str();
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw beatgen::domain_error("cannot open output file: " + out);
        f << buf.str();
    }
    return exit_ok;
}

beatgen::MapKind parse_map_kind(const std::string& s) {
    if (s == "period1d") return beatgen::MapKind::period_1d;
    if (s == "order-preserving" || s == "op") return beatgen::MapKind::order_preserving;
    if (s == "oieb") return beatgen::MapKind::oieb;
    throw beatgen::domain_error("unknown map kind: " + s);
}

// ---------------------------------------------------------------------------
// command handlers (driven by the resolved config object, so `--config FILE`
// reruns are exact)
// ---------------------------------------------------------------------------

int run_presets(const ordered_json& cfg) {
    beatgen::io::Table t;
    std::vector<std::string> names, notes;
    std::vector<double> tau, ts, dt, dp;
    for (const auto& p : beatgen::preset_catalog()) {
        names.emplace_back(p.name);
        tau.push_back(p.params.tau);
        ts.push_back(p.params.t_stim);
        dt.push_back(p.params.delta_t);
        dp.push_back(p.params.delta_phi);
        notes.emplace_back(p.note);
    }
    t.add("name", names);
    t.add("tau", tau);
    t.add("t_stim", ts);
    t.add("delta_t", dt);
    t.add("delta_phi", dp);
    t.add("note", notes);
    return write_output(t, cfg);
}

int run_iterate(const ordered_json& cfg) {
    auto p = params_from_config(cfg);
    const auto& opt = cfg.at("options");
    auto kind = parse_map_kind(opt.at("map").get<std::string>());
    beatgen::MapState x0{opt.at("i0").get<double>(), opt.at("phi0").get<double>()};
    auto steps = opt.at("steps").get<std::size_t>();

    auto traj = beatgen::iterate(kind, x0, p, steps);

    beatgen::io::Table t;
    std::vector<long long> n;
    std::vector<double> i, phi;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        n.push_back(static_cast<long long>(k));
        i.push_back(traj.states[k].drive);
        phi.push_back(traj.states[k].phase);
    }
    t.add("n", n);
    t.add("i", i);
    if (kind != beatgen::MapKind::period_1d) t.add("phi", phi);
    if (kind == beatgen::MapKind::oieb) {
        std::vector<long long> tones{0}, sw{0};  // no cycle precedes the initial state
        for (const auto& c : traj.cycles) {
            tones.push_back(c.tones_in_cycle);
            sw.push_back(c.order_switch ? 1 : 0);
        }
        tones.resize(traj.states.size());
        sw.resize(traj.states.size());
        t.add("tones_in_cycle", tones);
        t.add("order_switch", sw);
    }
    ordered_json result{{"termination", beatgen::to_string(traj.termination)},
                        {"steps_completed", traj.states.size() - 1}};
    write_output(t, cfg, &result);
    if (traj.termination == beatgen::Termination::stalled ||
        traj.termination == beatgen::Termination::divergent) {
        std::cerr << "iterate: terminated early (" << beatgen::to_string(traj.termination) << ")\n";
        return exit_dynamics;
    }
    return exit_ok;
}

void trace_to_table(const beatgen::EventTrace& trace, beatgen::io::Table& t) {
    std::vector<double> time, ib, ia, v;
    std::vector<std::string> kind;
    for (const auto& e : trace.events) {
        time.push_back(e.time);
        kind.emplace_back(beatgen::to_string(e.kind));
        ib.push_back(e.drive_before);
        ia.push_back(e.drive_after);
        v.push_back(e.voltage);
    }
    t.add("time_ms", time);
    t.add("kind", kind);
    t.add("i_before", ib);
    t.add("i_after", ia);
    t.add("v", v);
}

int run_simulate(const ordered_json& cfg) {
    auto p = params_from_config(cfg);
    const auto& opt = cfg.at("options");
    beatgen::MapState x0{opt.at("i0").get<double>(), opt.at("phi0").get<double>()};
    auto cycles = opt.at("cycles").get<std::size_t>();

    beatgen::io::Table t;
    ordered_json result;
    bool early = false;
    if (opt.contains("tempo_change") && !opt.at("tempo_change").is_null()) {
        double t_switch = opt.at("tempo_change").at(0).get<double>();
        double new_ts = opt.at("tempo_change").at(1).get<double>();
        auto r = beatgen::simulate_tempo_change(x0, p, t_switch, new_ts, cycles);
        trace_to_table(r.trace, t);
        result = ordered_json{{"termination", beatgen::to_string(r.trace.termination)},
                              {"switch_time", r.switch_time},
                              {"cycles_to_converge", r.cycles_to_converge},
                              {"converged", r.converged}};
        early = r.trace.termination != beatgen::SimTermination::completed;
    } else {
        auto trace = beatgen::simulate(x0, p, cycles);
        trace_to_table(trace, t);
        result = ordered_json{{"termination", beatgen::to_string(trace.termination)},
                              {"cycles_completed", trace.cycles.size()}};
        early = trace.termination != beatgen::SimTermination::completed;
    }
    write_output(t, cfg, &result);
    if (early) {
        std::cerr << "simulate: terminated early (" << result.at("termination").get<std::string>()
                  << ")\n";
        return exit_dynamics;
    }
    return exit_ok;
}

int run_regions(const ordered_json& cfg) {
    auto p = params_from_config(cfg);
    const auto& opt = cfg.at("options");
    beatgen::ParamWindow w{opt.at("window").at(0).get<double>(), opt.at("window").at(1).get<double>(),
                           opt.at("window").at(2).get<double>(), opt.at("window").at(3).get<double>()};
    auto nx = opt.at("res").at(0).get<std::size_t>();
    auto ny = opt.at("res").at(1).get<std::size_t>();

    auto cells = beatgen::region_map(w, nx, ny, p);

    beatgen::io::Table t;
    std::vector<double> dt, dp;
    std::vector<std::string> region, c0, c1;
    std::vector<long long> flagged;
    for (const auto& c : cells) {
        dt.push_back(c.delta_t);
        dp.push_back(c.delta_phi);
        region.emplace_back(beatgen::to_string(c.region));
        c0.emplace_back(beatgen::to_string(c.class_phi0));
        c1.emplace_back(beatgen::to_string(c.class_phi1));
        flagged.push_back(c.flagged ? 1 : 0);
    }
    t.add("delta_t", dt);
    t.add("delta_phi", dp);
    t.add("region", region);
    t.add("class_phi0", c0);
    t.add("class_phi1", c1);
    t.add("flagged", flagged);
    return write_output(t, cfg);
}

int run_boundaries(const ordered_json& cfg) {
    auto p = params_from_config(cfg);
    const auto& opt = cfg.at("options");
    std::string kind_name = opt.at("kind").get<std::string>();
    int fp = opt.at("fixed_point").get<int>();

    beatgen::BoundaryKind kind;
    if (kind_name == "lambda-minus-one") {
        kind = fp == 0 ? beatgen::BoundaryKind::lambda_minus_one_phi0
                       : beatgen::BoundaryKind::lambda_minus_one_phi1;
    } else if (kind_name == "unit-modulus") {
        if (fp != 1)
            throw beatgen::domain_error(
                "unit-modulus: complex eigenvalues of the phi*=0 point never reach the unit circle; "
                "use --fixed-point 1");
        kind = beatgen::BoundaryKind::unit_modulus_phi1;
    } else if (kind_name == "discriminant-zero") {
        kind = fp == 0 ? beatgen::BoundaryKind::discriminant_zero_phi0
                       : beatgen::BoundaryKind::discriminant_zero_phi1;
    } else {
        throw beatgen::domain_error("unknown boundary kind: " + kind_name);
    }

    beatgen::ParamWindow w{opt.at("window").at(0).get<double>(), opt.at("window").at(1).get<double>(),
                           opt.at("window").at(2).get<double>(), opt.at("window").at(3).get<double>()};
    auto lines = opt.at("lines").get<std::size_t>();
    auto curve = beatgen::trace_boundary(kind, w, lines, p);

    beatgen::io::Table t;
    std::vector<double> dt, dp, res;
    for (const auto& q : curve.points) {
        dt.push_back(q[0]);
        dp.push_back(q[1]);
        res.push_back(beatgen::boundary_residual(kind, q[0], q[1], p));
    }
    t.add("delta_t", dt);
    t.add("delta_phi", dp);
    t.add("residual", res);
    return write_output(t, cfg);
}

int run_sweep1d(const ordered_json& cfg) {
    auto p = params_from_config(cfg);
    const auto& opt = cfg.at("options");
    double lo = opt.at("range").at(0).get<double>();
    double hi = opt.at("range").at(1).get<double>();
    auto n = opt.at("samples").get<std::size_t>();
    auto keep = opt.at("keep").get<std::size_t>();

    auto rows = beatgen::bifurcation_scan_1d(p, lo, hi, n, keep);

    beatgen::io::Table t;
    std::vector<double> dt, val;
    std::vector<long long> period, divergent, sample_idx;
    for (const auto& r : rows) {
        if (r.divergent || r.samples.empty()) {
            dt.push_back(r.delta_t);
            period.push_back(r.period);
            divergent.push_back(r.divergent ? 1 : 0);
            sample_idx.push_back(-1);
            val.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        for (std::size_t k = 0; k < r.samples.size(); ++k) {
            dt.push_back(r.delta_t);
            period.push_back(r.period);
            divergent.push_back(0);
            sample_idx.push_back(static_cast<long long>(k));
            val.push_back(r.samples[k]);
        }
    }
    t.add("delta_t", dt);
    t.add("period", period);
    t.add("divergent", divergent);
    t.add("sample", sample_idx);
    t.add("i", val);
    return write_output(t, cfg);
}

int run_feigenbaum(const ordered_json& cfg) {
    const auto& opt = cfg.at("options");
    std::string map = opt.at("map").get<std::string>();
    int kmax = opt.at("kmax").get<int>();

    beatgen::CascadeReport rep;
    if (map == "logistic") {
        rep = beatgen::feigenbaum_ratios_logistic(kmax);
    } else if (map == "period1d") {
        rep = beatgen::feigenbaum_ratios(params_from_config(cfg), kmax);
    } else {
        throw beatgen::domain_error("feigenbaum: map must be 'period1d' or 'logistic'");
    }

    beatgen::io::Table t;
    std::vector<long long> k;
    std::vector<double> onset;
    for (std::size_t j = 0; j < rep.doubling_params.size(); ++j) {
        k.push_back(static_cast<long long>(j + 1));  // onset of the period-2^k orbit
        onset.push_back(rep.doubling_params[j]);
    }
    t.add("k", k);
    t.add("onset", onset);
    ordered_json result{{"ratios", rep.ratios}, {"truncated", rep.truncated}};
    return write_output(t, cfg, &result);
}

int run_attractor(const ordered_json& cfg) {
    auto p = params_from_config(cfg);
    const auto& opt = cfg.at("options");
    auto kind = parse_map_kind(opt.at("map").get<std::string>());
    beatgen::MapState x0{opt.at("i0").get<double>(), opt.at("phi0").get<double>()};
    beatgen::ClassifyBudget budget;
    if (opt.contains("transient")) budget.transient = opt.at("transient").get<std::size_t>();
    if (opt.contains("observe")) budget.observe = opt.at("observe").get<std::size_t>();

    auto rep = beatgen::classify_attractor(kind, x0, p, budget);

    beatgen::io::Table t;
    t.add("kind", std::vector<std::string>{beatgen::to_string(rep.kind)});
    t.add("period", std::vector<long long>{rep.period});
    t.add("order_switches_per_period", std::vector<long long>{rep.order_switches_per_period});
    t.add("bg_spikes_per_period", std::vector<long long>{rep.bg_spikes_per_period});
    t.add("tones_per_period", std::vector<long long>{rep.tones_per_period});
    t.add("lyapunov", std::vector<double>{rep.lyapunov});
    t.add("final_i", std::vector<double>{rep.final_state.drive});
    t.add("final_phi", std::vector<double>{rep.final_state.phase});
    return write_output(t, cfg);
}

int run_basin(const ordered_json& cfg) {
    auto p = params_from_config(cfg);
    const auto& opt = cfg.at("options");
    auto kind = parse_map_kind(opt.at("map").get<std::string>());
    beatgen::BasinGrid g;
    g.drive_lo = opt.at("grid").at(0).get<double>();
    g.drive_hi = opt.at("grid").at(1).get<double>();
    g.n_drive = opt.at("grid").at(2).get<std::size_t>();
    g.phase_lo = opt.at("grid").at(3).get<double>();
    g.phase_hi = opt.at("grid").at(4).get<double>();
    g.n_phase = opt.at("grid").at(5).get<std::size_t>();
    beatgen::ClassifyBudget budget;
    if (opt.contains("transient")) budget.transient = opt.at("transient").get<std::size_t>();
    if (opt.contains("observe")) budget.observe = opt.at("observe").get<std::size_t>();

    auto cells = beatgen::basin_scan(kind, g, p, budget);

    beatgen::io::Table t;
    std::vector<double> i0, phi0;
    std::vector<std::string> at;
    std::vector<long long> label, switches;
    for (const auto& c : cells) {
        i0.push_back(c.x0.drive);
        phi0.push_back(c.x0.phase);
        at.emplace_back(beatgen::to_string(c.kind));
        label.push_back(c.phase_label);
        switches.push_back(c.order_switches);
    }
    t.add("i0", i0);
    t.add("phi0", phi0);
    t.add("kind", at);
    t.add("phase_label", label);
    t.add("order_switches", switches);
    return write_output(t, cfg);
}

int run_calibrate(const ordered_json& cfg) {
    const auto& opt = cfg.at("options");
    double lo = opt.at("tau_range").at(0).get<double>();
    double hi = opt.at("tau_range").at(1).get<double>();
    auto n = opt.at("steps").get<std::size_t>();
    if (n < 2) throw beatgen::domain_error("calibrate: need at least 2 tau samples");

    std::vector<double> taus(n);
    for (std::size_t k = 0; k < n; ++k)
        taus[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);

    std::vector<beatgen::ReferenceLabels> all(n);
    beatgen::parallel_for(n, 0, [&](std::size_t k) { all[k] = beatgen::check_reference_labels(taus[k]); });

    beatgen::io::Table t;
    std::vector<double> tau_col;
    std::vector<long long> b, c, d, e, f, p3, total;
    for (std::size_t k = 0; k < n; ++k) {
        tau_col.push_back(taus[k]);
        b.push_back(all[k].fig8b.ok);
        c.push_back(all[k].fig8c.ok);
        d.push_back(all[k].fig8d.ok);
        e.push_back(all[k].fig8e.ok);
        f.push_back(all[k].fig8f.ok);
        p3.push_back(all[k].fig6c.ok);
        total.push_back(all[k].reproduced());
    }
    t.add("tau", tau_col);
    t.add("fig8b_period5", b);
    t.add("fig8c_4spikes_3tones", c);
    t.add("fig8d_chaotic", d);
    t.add("fig8e_divergent", e);
    t.add("fig8f_period104", f);
    t.add("fig6c_period3", p3);
    t.add("reproduced", total);

    long long best = -1;
    double best_tau = taus[0];
    for (std::size_t k = 0; k < n; ++k) {
        if (total[k] > best) {
            best = total[k];
            best_tau = taus[k];
        }
    }
    ordered_json result{{"best_tau", best_tau}, {"best_reproduced", best}};
    return write_output(t, cfg, &result);
}

int run_config(const ordered_json& cfg) {
    const std::string cmd = cfg.at("command").get<std::string>();
    if (cmd == "presets") return run_presets(cfg);
    if (cmd == "iterate") return run_iterate(cfg);
    if (cmd == "simulate") return run_simulate(cfg);
    if (cmd == "regions") return run_regions(cfg);
    if (cmd == "boundaries") return run_boundaries(cfg);
    if (cmd == "sweep1d") return run_sweep1d(cfg);
    if (cmd == "feigenbaum") return run_feigenbaum(cfg);
    if (cmd == "attractor") return run_attractor(cfg);
    if (cmd == "basin") return run_basin(cfg);
    if (cmd == "calibrate") return run_calibrate(cfg);
    throw beatgen::domain_error("unknown command: " + cmd);
}

std::vector<double> parse_window(const std::string& s) {
    // "dtlo:dthi,dplo:dphi"
    std::vector<double> out;
    std::string token;
    std::stringstream ss(s);
    while (std::getline(ss, token, ',')) {
        auto colon = token.find(':');
        if (colon == std::string::npos) throw beatgen::domain_error("bad window: " + s);
        out.push_back(std::stod(token.substr(0, colon)));
        out.push_back(std::stod(token.substr(colon + 1)));
    }
    if (out.size() != 4) throw beatgen::domain_error("bad window: " + s);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"beatgen: error-correction maps for a neural beat generator entraining to a metronome"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string config_out = "-";
    app.add_option("--config", config_path, "run a saved configuration (JSON object, as emitted in output headers)");
    app.add_option("--out", config_out, "output path for --config runs ('-' for stdout)");

    // presets
    CommonOpts c_presets;
    auto* sc_presets = app.add_subcommand("presets", "list the named parameter presets");
    sc_presets->add_option("--out", c_presets.out, "output path");
    sc_presets->add_option("--format", c_presets.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    // iterate
    CommonOpts c_it;
    std::string it_map = "oieb";
    double it_i0 = 2.5, it_phi0 = 0.3;
    std::size_t it_steps = 200;
    auto* sc_it = app.add_subcommand("iterate", "iterate a map from an initial state");
    add_common(sc_it, c_it);
    sc_it->add_option("--map", it_map, "period1d, order-preserving, or oieb");
    sc_it->add_option("--i0", it_i0, "initial drive (> 1)");
    sc_it->add_option("--phi0", it_phi0, "initial phase in [0, 1)");
    sc_it->add_option("--steps", it_steps, "number of iterations");

    // simulate
    CommonOpts c_sim;
    double sim_i0 = 2.5, sim_phi0 = 0.3;
    std::size_t sim_cycles = 50;
    std::vector<double> sim_tempo;
    auto* sc_sim = app.add_subcommand("simulate", "event-driven continuous-time simulation");
    add_common(sc_sim, c_sim);
    sc_sim->add_option("--i0", sim_i0, "initial drive (> 1)");
    sc_sim->add_option("--phi0", sim_phi0, "initial phase in [0, 1)");
    sc_sim->add_option("--cycles", sim_cycles, "number of beat-generator cycles");
    sc_sim->add_option("--tempo-change", sim_tempo, "switch time (ms) and new t_stim (ms)")->expected(2);

    // regions
    CommonOpts c_reg;
    std::string reg_window = "0:0.01,0:7";
    std::string reg_res = "200x200";
    auto* sc_reg = app.add_subcommand("regions", "stability-region grid over the learning-rate plane");
    add_common(sc_reg, c_reg);
    sc_reg->add_option("--window", reg_window, "delta_t lo:hi,delta_phi lo:hi");
    sc_reg->add_option("--res", reg_res, "grid resolution NXxNY");

    // boundaries
    CommonOpts c_bnd;
    std::string bnd_kind = "lambda-minus-one";
    int bnd_fp = 0;
    std::string bnd_window = "0:0.01,0:7";
    std::size_t bnd_lines = 200;
    auto* sc_bnd = app.add_subcommand("boundaries", "trace a stability or node/spiral boundary");
    add_common(sc_bnd, c_bnd);
    sc_bnd->add_option("--kind", bnd_kind, "lambda-minus-one, unit-modulus, or discriminant-zero");
    sc_bnd->add_option("--fixed-point", bnd_fp, "0 or 1 (which synchronous fixed point)");
    sc_bnd->add_option("--window", bnd_window, "delta_t lo:hi,delta_phi lo:hi");
    sc_bnd->add_option("--lines", bnd_lines, "number of scan lines");

    // sweep1d
    CommonOpts c_sw;
    std::string sw_range = "0.007:0.011";
    std::size_t sw_samples = 200, sw_keep = 64;
    auto* sc_sw = app.add_subcommand("sweep1d", "bifurcation scan of the 1D period map");
    add_common(sc_sw, c_sw);
    sc_sw->add_option("--dt-range", sw_range, "delta_t lo:hi");
    sc_sw->add_option("--samples", sw_samples, "number of delta_t samples");
    sc_sw->add_option("--keep", sw_keep, "post-transient iterates kept per sample");

    // feigenbaum
    CommonOpts c_fg;
    std::string fg_map = "period1d";
    int fg_kmax = 5;
    auto* sc_fg = app.add_subcommand("feigenbaum", "period-doubling onsets and ratio estimates");
    add_common(sc_fg, c_fg);
    sc_fg->add_option("--map", fg_map, "period1d or logistic (built-in validation target)");
    sc_fg->add_option("--kmax", fg_kmax, "detect onsets of periods 2..2^kmax");

    // attractor
    CommonOpts c_at;
    std::string at_map = "oieb";
    double at_i0 = 2.5, at_phi0 = 0.3;
    std::size_t at_transient = 10000, at_observe = 100000;
    auto* sc_at = app.add_subcommand("attractor", "classify the long-run behavior from one initial state");
    add_common(sc_at, c_at);
    sc_at->add_option("--map", at_map, "period1d, order-preserving, or oieb");
    sc_at->add_option("--i0", at_i0, "initial drive");
    sc_at->add_option("--phi0", at_phi0, "initial phase");
    sc_at->add_option("--transient", at_transient, "transient iterations to discard");
    sc_at->add_option("--observe", at_observe, "iterations available for detection");

    // basin
    CommonOpts c_bs;
    std::string bs_map = "oieb";
    std::string bs_grid = "1.5:5:16,0:1:16";
    std::size_t bs_transient = 2000, bs_observe = 20000;
    auto* sc_bs = app.add_subcommand("basin", "classify a grid of initial conditions");
    add_common(sc_bs, c_bs);
    sc_bs->add_option("--map", bs_map, "period1d, order-preserving, or oieb");
    sc_bs->add_option("--grid", bs_grid, "i lo:hi:n,phi lo:hi:n");
    sc_bs->add_option("--transient", bs_transient, "transient iterations");
    sc_bs->add_option("--observe", bs_observe, "iterations available for detection");

    // calibrate
    CommonOpts c_cal;
    std::string cal_range = "500:2000";
    std::size_t cal_steps = 61;
    auto* sc_cal = app.add_subcommand("calibrate",
                                      "sweep tau and report which reference behaviors are reproduced");
    sc_cal->add_option("--tau-range", cal_range, "tau lo:hi (ms)");
    sc_cal->add_option("--steps", cal_steps, "number of tau samples");
    sc_cal->add_option("--out", c_cal.out, "output path");
    sc_cal->add_option("--format", c_cal.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw beatgen::domain_error("cannot open config file: " + config_path);
            auto cfg = ordered_json::parse(in, nullptr, true, /*ignore_comments=*/true);
            if (!cfg.contains("out") || config_out != "-") cfg["out"] = config_out;
            return run_config(cfg);
        }

        auto split_pair = [](const std::string& s, char sep) {
            auto pos = s.find(sep);
            if (pos == std::string::npos) throw beatgen::domain_error("bad range: " + s);
            return std::pair<std::string, std::string>{s.substr(0, pos), s.substr(pos + 1)};
        };

        if (sc_presets->parsed()) {
            ordered_json cfg{{"command", "presets"}, {"format", c_presets.format}, {"out", c_presets.out}};
            return run_presets(cfg);
        }
        if (sc_it->parsed()) {
            ordered_json cfg{{"command", "iterate"}, {"format", c_it.format}, {"out", c_it.out}};
            resolve_params(c_it, cfg);
            cfg["options"] = {{"map", it_map}, {"i0", it_i0}, {"phi0", it_phi0}, {"steps", it_steps}};
            return run_iterate(cfg);
        }
        if (sc_sim->parsed()) {
            ordered_json cfg{{"command", "simulate"}, {"format", c_sim.format}, {"out", c_sim.out}};
            resolve_params(c_sim, cfg);
            cfg["options"] = {{"i0", sim_i0}, {"phi0", sim_phi0}, {"cycles", sim_cycles}};
            cfg["options"]["tempo_change"] =
                sim_tempo.empty() ? ordered_json() : ordered_json(sim_tempo);
            return run_simulate(cfg);
        }
        if (sc_reg->parsed()) {
            ordered_json cfg{{"command", "regions"}, {"format", c_reg.format}, {"out", c_reg.out}};
            resolve_params(c_reg, cfg);
            auto w = parse_window(reg_window);
            auto [nx, ny] = split_pair(reg_res, 'x');
            cfg["options"] = {{"window", w}, {"res", {std::stoull(nx), std::stoull(ny)}}};
            return run_regions(cfg);
        }
        if (sc_bnd->parsed()) {
            ordered_json cfg{{"command", "boundaries"}, {"format", c_bnd.format}, {"out", c_bnd.out}};
            resolve_params(c_bnd, cfg);
            cfg["options"] = {{"kind", bnd_kind},
                              {"fixed_point", bnd_fp},
                              {"window", parse_window(bnd_window)},
                              {"lines", bnd_lines}};
            return run_boundaries(cfg);
        }
        if (sc_sw->parsed()) {
            ordered_json cfg{{"command", "sweep1d"}, {"format", c_sw.format}, {"out", c_sw.out}};
            resolve_params(c_sw, cfg);
            auto [lo, hi] = split_pair(sw_range, ':');
            cfg["options"] = {{"range", {std::stod(lo), std::stod(hi)}},
                              {"samples", sw_samples},
                              {"keep", sw_keep}};
            return run_sweep1d(cfg);
        }
        if (sc_fg->parsed()) {
            ordered_json cfg{{"command", "feigenbaum"}, {"format", c_fg.format}, {"out", c_fg.out}};
            resolve_params(c_fg, cfg);
            cfg["options"] = {{"map", fg_map}, {"kmax", fg_kmax}};
            return run_feigenbaum(cfg);
        }
        if (sc_at->parsed()) {
            ordered_json cfg{{"command", "attractor"}, {"format", c_at.format}, {"out", c_at.out}};
            resolve_params(c_at, cfg);
            cfg["options"] = {{"map", at_map},
                              {"i0", at_i0},
                              {"phi0", at_phi0},
                              {"transient", at_transient},
                              {"observe", at_observe}};
            return run_attractor(cfg);
        }
        if (sc_bs->parsed()) {
            ordered_json cfg{{"command", "basin"}, {"format", c_bs.format}, {"out", c_bs.out}};
            resolve_params(c_bs, cfg);
            std::vector<double> g;
            std::string token;
            std::stringstream ss(bs_grid);
            while (std::getline(ss, token, ',')) {
                auto [a, rest] = split_pair(token, ':');
                auto [b, c] = split_pair(rest, ':');
                g.push_back(std::stod(a));
                g.push_back(std::stod(b));
                g.push_back(std::stod(c));
            }
            if (g.size() != 6) throw beatgen::domain_error("bad grid: " + bs_grid);
            cfg["options"] = {{"map", bs_map},
                              {"grid", g},
                              {"transient", bs_transient},
                              {"observe", bs_observe}};
            return run_basin(cfg);
        }
        if (sc_cal->parsed()) {
            ordered_json cfg{{"command", "calibrate"}, {"format", c_cal.format}, {"out", c_cal.out}};
            auto [lo, hi] = split_pair(cal_range, ':');
            cfg["options"] = {{"tau_range", {std::stod(lo), std::stod(hi)}}, {"steps", cal_steps}};
            return run_calibrate(cfg);
        }

        std::cout << app.help();
        return exit_ok;
    } catch (const beatgen::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const beatgen::no_crossing_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const beatgen::stalled_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_dynamics;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }
}
