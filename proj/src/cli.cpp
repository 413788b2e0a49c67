#include "cqed/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqed/circuits.hpp"
#include "cqed/config.hpp"
#include "cqed/errors.hpp"
#include "cqed/experiments.hpp"
#include "cqed/io.hpp"
#include "cqed/mna.hpp"
#include "cqed/netlist.hpp"
#include "cqed/params.hpp"
#include "cqed/rbe.hpp"
#include "cqed/spectrum.hpp"

namespace cqed {

namespace {

using nlohmann::json;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_text_atomic(out_path, text);
}

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_parameter(std::string("cannot read ") + what + " file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Channel parse_channel(const std::string& name) {
    if (name == "lambda1") return Channel::lambda1;
    if (name == "lambda2") return Channel::lambda2;
    if (name == "lambda3") return Channel::lambda3;
    if (name == "v") return Channel::v;
    if (name == "i") return Channel::i;
    throw invalid_parameter("unknown channel '" + name +
                            "' (lambda1 | lambda2 | lambda3 | v | i)");
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw invalid_parameter("steps must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (int k = 0; k < n; ++k)
        v[static_cast<std::size_t>(k)] = lo + (hi - lo) * static_cast<double>(k) / (n - 1);
    return v;
}

json table_json(const CircuitParams& cp) {
    json t;
    t["rq1_ohm"] = cp.rq1 ? json(*cp.rq1) : json();
    t["rq2_ohm"] = cp.rq2 ? json(*cp.rq2) : json();
    t["lq_h"] = cp.lq;
    t["cq_f"] = cp.cq;
    t["rr_ohm"] = cp.rr ? json(*cp.rr) : json();
    t["lr_h"] = cp.lr;
    t["cr_f"] = cp.cr;
    t[cp.kind == CircuitKind::electric ? "crq_f" : "lrq_h"] = cp.coupling;
    return t;
}

ExperimentOptions sweep_options(const ScenarioConfig& cfg, const std::optional<double>& dt_ps,
                                const std::optional<double>& t_final_us,
                                const std::optional<int>& decimation,
                                const std::optional<int>& threads) {
    ExperimentOptions opt;
    opt.dt = (dt_ps ? *dt_ps : cfg.dt_ps) * 1e-12;
    opt.t_final = (t_final_us ? *t_final_us : cfg.t_final_us) * 1e-6;
    opt.pad_factor = cfg.pad_factor;
    if (decimation)
        opt.decimation = *decimation;
    else if (cfg.decimation)
        opt.decimation = *cfg.decimation;
    if (threads) opt.threads = *threads;
    return opt;
}

struct ParamsCmd {
    std::string config, out;
};

struct RbeCmd {
    std::string config, out;
    double lambda3 = -0.999;
    bool linearized = false;
    std::optional<double> dt_ps, t_final_us;
    std::optional<int> decimation;
};

struct SpectrumCmd {
    std::string in, out;
    std::string channel = "v";
    std::string window = "hann";
    int pad = 4;
};

struct AcCmd {
    std::string netlist, config, out, port;
    std::optional<double> fmin_ghz, fmax_ghz;
    std::optional<int> points;
};

struct SweepCmd {
    std::string config, out;
    std::string route = "oracle";
    double dmin_mhz = 0.0, dmax_mhz = 0.0;
    int steps = 0;
    std::optional<double> dt_ps, t_final_us;
    std::optional<int> decimation, threads;
};

struct QndCmd {
    std::string config, out;
    double delta_mhz = 1000.0;
    double t1_us = 20.0;
    double window_us = 4.0;
    std::optional<double> dt_ps;
    std::optional<int> decimation, threads;
};

struct OracleCmd {
    std::string config, out;
    std::optional<double> delta_mhz;
};

void cmd_params(const ParamsCmd& c) {
    const ScenarioConfig cfg = load_config(c.config);
    const PhysicalParams p = physical_from_config(cfg);
    const ResonatorLC lc = derive_rms(derive_lc(p.z0, p.omega_r), p.omega_r);
    json j;
    j["resonator"] = {{"c_r_f", lc.c_r},
                      {"l_r_h", lc.l_r},
                      {"v_rms_v", lc.v_rms},
                      {"i_rms_a", lc.i_rms}};
    j["electric"] = table_json(table1(p, CircuitKind::electric));
    j["magnetic"] = table_json(table1(p, CircuitKind::magnetic));
    emit(j.dump(2) + "\n", c.out);
}

void cmd_rbe(const RbeCmd& c) {
    const ScenarioConfig cfg = load_config(c.config);
    const PhysicalParams p = physical_from_config(cfg);
    const double dt = (c.dt_ps ? *c.dt_ps : cfg.dt_ps) * 1e-12;
    const double t_final = (c.t_final_us ? *c.t_final_us : cfg.t_final_us) * 1e-6;
    const int decimation = c.decimation ? *c.decimation : cfg.decimation.value_or(1);

    const RbeState ic{0.04, 0.0, c.lambda3, 0.0, 0.0};
    const IntegrationMode mode =
        c.linearized ? IntegrationMode::linearized_at(p.lambda3_0) : IntegrationMode::full();
    const TimeSeries ts = integrate(ic, p, dt, t_final, mode, decimation);
    emit(time_series_csv(ts), c.out);
}

void cmd_spectrum(const SpectrumCmd& c) {
    const TimeSeries ts = read_time_series_csv(c.in);
    const Spectrum s = periodogram(ts, parse_channel(c.channel), parse_window(c.window), c.pad);
    emit(spectrum_csv(s), c.out);
}

void cmd_ac(const AcCmd& c) {
    const Netlist nl = parse_netlist(read_file(c.netlist, "netlist"));

    std::optional<ScenarioConfig> cfg;
    if (!c.config.empty()) cfg = load_config(c.config);
    auto pick_d = [&](const std::optional<double>& flag, const std::optional<double>& conf,
                      const char* what) {
        if (flag) return *flag;
        if (cfg && conf) return *conf;
        throw invalid_parameter(std::string(what) + " is required (flag or config)");
    };
    const double fmin =
        pick_d(c.fmin_ghz, cfg ? cfg->f_min_ghz : std::optional<double>{}, "--fmin");
    const double fmax =
        pick_d(c.fmax_ghz, cfg ? cfg->f_max_ghz : std::optional<double>{}, "--fmax");
    int points = 0;
    if (c.points)
        points = *c.points;
    else if (cfg && cfg->grid_points)
        points = *cfg->grid_points;
    else
        throw invalid_parameter("--points is required (flag or config)");
    if (!(fmin > 0.0) || !(fmax > fmin)) throw invalid_parameter("need 0 < fmin < fmax");
    if (points < 2) throw invalid_parameter("--points must be >= 2");

    std::string port = c.port;
    if (port.empty()) {
        if (nl.ports().empty()) throw invalid_parameter("netlist declares no .port");
        port = nl.ports().front().name;
    }
    const Spectrum s = transmission_sweep(nl, port, linspace(fmin * 1e9, fmax * 1e9, points));
    emit(spectrum_csv(s), c.out);
}

void cmd_sweep(const SweepCmd& c, bool lamb) {
    const ScenarioConfig cfg = load_config(c.config);
    const PhysicalParams p = physical_from_config(cfg);
    const ExperimentOptions opt =
        sweep_options(cfg, c.dt_ps, c.t_final_us, c.decimation, c.threads);
    const Route route = parse_route(c.route);

    std::vector<double> deltas = linspace(c.dmin_mhz * 1e6, c.dmax_mhz * 1e6, c.steps);
    const SweepResult r = lamb ? lamb_shift_curve(p, deltas, route, opt)
                               : anticrossing_sweep(p, deltas, route, opt);
    emit(sweep_csv(r), c.out);
}

void cmd_qnd(const QndCmd& c) {
    const ScenarioConfig cfg = load_config(c.config);
    const PhysicalParams p = physical_from_config(cfg);
    ExperimentOptions opt = sweep_options(cfg, c.dt_ps, std::nullopt, c.decimation, c.threads);

    const QndResult r =
        qnd_pull(p, c.delta_mhz * 1e6, c.t1_us * 1e-6, c.window_us * 1e-6, opt);
    json j;
    j["pull_hz"] = r.pull_hz;
    j["fwhm_minus_hz"] = r.fwhm_minus_hz;
    j["fwhm_plus_hz"] = r.fwhm_plus_hz;
    if (c.out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        write_spectrum_csv(c.out + "_minus.csv", r.spectrum_minus);
        write_spectrum_csv(c.out + "_plus.csv", r.spectrum_plus);
        write_text_atomic(c.out + ".json", j.dump(2) + "\n");
    }
}

void cmd_oracle(const OracleCmd& c) {
    const ScenarioConfig cfg = load_config(c.config);
    PhysicalParams p = physical_from_config(cfg);
    if (c.delta_mhz) p.omega_q = p.omega_r + hz_to_rad(*c.delta_mhz * 1e6);
    const double delta = p.omega_q - p.omega_r;

    const auto pr = dressed_modes(p).positive_pair_hz();
    json j;
    j["f_minus_hz"] = pr[0];
    j["f_plus_hz"] = pr[1];
    j["splitting_hz"] = pr[1] - pr[0];
    if (std::abs(delta) > p.g) {
        const DispersivePull pull = dispersive_pull(p, delta);
        j["pull_minus_hz"] = rad_to_hz(pull.pull_minus);
        j["pull_plus_hz"] = rad_to_hz(pull.pull_plus);
        j["pull_difference_hz"] = rad_to_hz(pull.difference);
    }
    emit(j.dump(2) + "\n", c.out);
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Resonator + two-level-system simulator: trajectories, spectra, "
                 "equivalent-circuit AC analysis"};
    app.require_subcommand(1);

    ParamsCmd params_cmd;
    {
        auto* sub = app.add_subcommand("params", "Derived element values as JSON");
        sub->add_option("--config", params_cmd.config, "Scenario TOML")->required();
        sub->add_option("--out", params_cmd.out, "Output path (default stdout)");
    }

    RbeCmd rbe_cmd;
    {
        auto* sub = app.add_subcommand("rbe", "Integrate a ring-down trajectory to CSV");
        sub->add_option("--config", rbe_cmd.config, "Scenario TOML")->required();
        sub->add_option("--lambda3", rbe_cmd.lambda3, "Initial inversion (default -0.999)");
        sub->add_flag("--linearized", rbe_cmd.linearized,
                      "Pin the inversion at the config operating point");
        sub->add_option("--dt-ps", rbe_cmd.dt_ps, "Integration step, ps");
        sub->add_option("--t-final-us", rbe_cmd.t_final_us, "Window length, us");
        sub->add_option("--decimation", rbe_cmd.decimation, "Recorded-sample stride");
        sub->add_option("--out", rbe_cmd.out, "Output path (default stdout)");
    }

    SpectrumCmd spectrum_cmd;
    {
        auto* sub = app.add_subcommand("spectrum", "Periodogram of a trajectory CSV");
        sub->add_option("--in", spectrum_cmd.in, "Trajectory CSV")->required();
        sub->add_option("--channel", spectrum_cmd.channel, "Channel (default v)");
        sub->add_option("--window", spectrum_cmd.window, "hann | rectangular");
        sub->add_option("--pad", spectrum_cmd.pad, "Zero-padding factor (default 4)");
        sub->add_option("--out", spectrum_cmd.out, "Output path (default stdout)");
    }

    AcCmd ac_cmd;
    {
        auto* sub = app.add_subcommand("ac", "Transmission sweep of a netlist file");
        sub->add_option("--netlist", ac_cmd.netlist, "Netlist file")->required();
        sub->add_option("--config", ac_cmd.config, "Scenario TOML for grid defaults");
        sub->add_option("--fmin", ac_cmd.fmin_ghz, "Grid start, GHz");
        sub->add_option("--fmax", ac_cmd.fmax_ghz, "Grid end, GHz");
        sub->add_option("--points", ac_cmd.points, "Grid size");
        sub->add_option("--port", ac_cmd.port, "Port name (default: first declared)");
        sub->add_option("--out", ac_cmd.out, "Output path (default stdout)");
    }

    auto add_sweep_flags = [](CLI::App* sub, SweepCmd& c) {
        sub->add_option("--config", c.config, "Scenario TOML")->required();
        sub->add_option("--route", c.route, "rbe-fft | circuit-ac | oracle (default oracle)");
        sub->add_option("--dt-ps", c.dt_ps, "Integration step, ps");
        sub->add_option("--t-final-us", c.t_final_us, "Trajectory window, us");
        sub->add_option("--decimation", c.decimation, "Recorded-sample stride");
        sub->add_option("--threads", c.threads, "Worker threads (0 = sequential)");
        sub->add_option("--out", c.out, "Output path (default stdout)");
    };

    SweepCmd anti_cmd;
    anti_cmd.dmin_mhz = -600.0;
    anti_cmd.dmax_mhz = 600.0;
    anti_cmd.steps = 25;
    {
        auto* sub = app.add_subcommand("anticrossing", "Dressed-mode pair vs detuning, CSV");
        add_sweep_flags(sub, anti_cmd);
        sub->add_option("--delta-min", anti_cmd.dmin_mhz, "Start detuning, MHz (default -600)");
        sub->add_option("--delta-max", anti_cmd.dmax_mhz, "End detuning, MHz (default 600)");
        sub->add_option("--steps", anti_cmd.steps, "Sweep points (default 25)");
    }

    SweepCmd lamb_cmd;
    lamb_cmd.dmin_mhz = 100.0;
    lamb_cmd.dmax_mhz = 600.0;
    lamb_cmd.steps = 11;
    {
        auto* sub = app.add_subcommand("lambshift", "Qubit-like branch shift vs detuning, CSV");
        add_sweep_flags(sub, lamb_cmd);
        sub->add_option("--delta-min", lamb_cmd.dmin_mhz, "Start detuning, MHz (default 100)");
        sub->add_option("--delta-max", lamb_cmd.dmax_mhz, "End detuning, MHz (default 600)");
        sub->add_option("--steps", lamb_cmd.steps, "Sweep points (default 11)");
    }

    QndCmd qnd_cmd;
    {
        auto* sub = app.add_subcommand(
            "qnd", "State-dependent cavity pull: two spectra CSVs plus a JSON summary");
        sub->add_option("--config", qnd_cmd.config, "Scenario TOML")->required();
        sub->add_option("--delta", qnd_cmd.delta_mhz, "Detuning, MHz (default 1000)");
        sub->add_option("--t1-us", qnd_cmd.t1_us, "Qubit relaxation time, us (default 20)");
        sub->add_option("--window-us", qnd_cmd.window_us, "Ring-down window, us (default 4)");
        sub->add_option("--dt-ps", qnd_cmd.dt_ps, "Integration step, ps");
        sub->add_option("--decimation", qnd_cmd.decimation, "Recorded-sample stride");
        sub->add_option("--threads", qnd_cmd.threads, "Worker threads (0 = sequential)");
        sub->add_option("--out", qnd_cmd.out,
                        "Output base path: <out>_minus.csv, <out>_plus.csv, <out>.json "
                        "(default: JSON to stdout)");
    }

    OracleCmd oracle_cmd;
    {
        auto* sub = app.add_subcommand("oracle", "Dressed-mode frequencies and pull as JSON");
        sub->add_option("--config", oracle_cmd.config, "Scenario TOML")->required();
        sub->add_option("--delta", oracle_cmd.delta_mhz, "Override detuning, MHz");
        sub->add_option("--out", oracle_cmd.out, "Output path (default stdout)");
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (app.got_subcommand("params")) cmd_params(params_cmd);
    else if (app.got_subcommand("rbe")) cmd_rbe(rbe_cmd);
    else if (app.got_subcommand("spectrum")) cmd_spectrum(spectrum_cmd);
    else if (app.got_subcommand("ac")) cmd_ac(ac_cmd);
    else if (app.got_subcommand("anticrossing")) cmd_sweep(anti_cmd, false);
    else if (app.got_subcommand("lambshift")) cmd_sweep(lamb_cmd, true);
    else if (app.got_subcommand("qnd")) cmd_qnd(qnd_cmd);
    else if (app.got_subcommand("oracle")) cmd_oracle(oracle_cmd);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    try {
        return dispatch(args);
    } catch (const divergence_error& e) {
        std::cerr << "cqed: error: " << e.what() << "\n";
        return 2;
    } catch (const instability_error& e) {
        std::cerr << "cqed: error: " << e.what() << "\n";
        return 2;
    } catch (const topology_error& e) {
        std::cerr << "cqed: error: " << e.what() << "\n";
        return 2;
    } catch (const extraction_error& e) {
        std::cerr << "cqed: error: " << e.what() << "\n";
        return 2;
    } catch (const invalid_parameter& e) {
        std::cerr << "cqed: error: " << e.what() << "\n";
        return 1;
    } catch (const netlist_error& e) {
        std::cerr << "cqed: error: " << e.what() << "\n";
        return 1;
    } catch (const step_size_error& e) {
        std::cerr << "cqed: error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "cqed: error: " << e.what() << "\n";
        return 2;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
    for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
    return run(args);
}

}  // namespace cqed
