#include <doctest.h>

#include <json.hpp>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cqed/cli.hpp"
#include "cqed/errors.hpp"
#include "cqed/io.hpp"
#include "cqed/spectrum.hpp"
#include "test_util.hpp"

using json = nlohmann::json;
using test_util::throws_naming;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
    CliResult r;
    r.code = cqed::run(args);
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string scenario_path() {
    const char* p = std::getenv("CQED_CONFIG");
    REQUIRE(p != nullptr);
    return p;
}

std::filesystem::path scratch_dir() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("cqed_cli_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string scratch_file(const std::string& name) { return (scratch_dir() / name).string(); }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    REQUIRE(out.good());
    out << content;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_json(const std::string& path) { return json::parse(slurp(path)); }

}  // namespace

TEST_CASE("derived element values as JSON") {
    const std::string out = scratch_file("params.json");
    const CliResult r = run_cli({"params", "--config", scenario_path(), "--out", out});
    REQUIRE(r.code == 0);
    const json j = load_json(out);
    CHECK(j["resonator"]["c_r_f"].get<double>() ==
          doctest::Approx(4.942700096021595e-13).epsilon(1e-12));
    CHECK(j["resonator"]["v_rms_v"].get<double>() ==
          doctest::Approx(2.077656851280184e-06).epsilon(1e-12));
    CHECK(j["electric"]["crq_f"].get<double>() ==
          doctest::Approx(2.041550039661094e-14).epsilon(1e-12));
    CHECK(j["electric"]["rq1_ohm"].get<double>() ==
          doctest::Approx(2023185.6689118268).epsilon(1e-12));
    CHECK(j["electric"]["rr_ohm"].get<double>() == doctest::Approx(201250.0).epsilon(1e-12));
    CHECK(j["magnetic"]["lrq_h"].get<double>() ==
          doctest::Approx(5.103875099152734e-11).epsilon(1e-12));
    CHECK(j["magnetic"]["rq2_ohm"].get<double>() ==
          doctest::Approx(0.0012356750240053987).epsilon(1e-12));
}

TEST_CASE("dressed-mode frequencies as JSON") {
    const CliResult r = run_cli({"oracle", "--config", scenario_path()});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["f_minus_hz"].get<double>() == doctest::Approx(6305597513.321003).epsilon(1e-12));
    CHECK(j["f_plus_hz"].get<double>() == doctest::Approx(6571654281.8380203).epsilon(1e-12));
    CHECK(j["splitting_hz"].get<double>() == doctest::Approx(266056768.517).epsilon(1e-9));
    CHECK_FALSE(j.contains("pull_minus_hz"));  // on resonance there is no pull

    const CliResult d = run_cli({"oracle", "--config", scenario_path(), "--delta", "1000"});
    REQUIRE(d.code == 0);
    const json jd = json::parse(d.out);
    CHECK(jd["pull_minus_hz"].get<double>() ==
          doctest::Approx(-18668029.86158371).epsilon(1e-12));
    CHECK(jd["pull_plus_hz"].get<double>() ==
          doctest::Approx(19280552.696413994).epsilon(1e-12));
    CHECK(jd["pull_difference_hz"].get<double>() ==
          doctest::Approx(37948582.557997704).epsilon(1e-12));
}

TEST_CASE("trajectory export and spectrum pipeline") {
    const std::string ts_path = scratch_file("traj.csv");
    const CliResult r = run_cli({"rbe", "--config", scenario_path(), "--t-final-us", "0.1",
                                 "--decimation", "4", "--out", ts_path});
    REQUIRE(r.code == 0);

    const cqed::TimeSeries ts = cqed::read_time_series_csv(ts_path);
    CHECK(ts.samples.size() == 25001);
    CHECK(ts.dt == doctest::Approx(4e-12).epsilon(1e-9));
    CHECK(ts.samples[0].lambda1 == 0.04);
    CHECK(ts.samples[0].lambda3 == -0.999);

    // The spectrum command must reproduce the library pipeline byte for byte.
    const std::string sp_path = scratch_file("traj_spec.csv");
    const CliResult s = run_cli({"spectrum", "--in", ts_path, "--channel", "v", "--window",
                                 "hann", "--pad", "4", "--out", sp_path});
    REQUIRE(s.code == 0);
    const cqed::Spectrum expect =
        cqed::periodogram(ts, cqed::Channel::v, cqed::Window::hann, 4);
    CHECK(slurp(sp_path) == cqed::spectrum_csv(expect));

    const CliResult excited = run_cli({"rbe", "--config", scenario_path(), "--lambda3",
                                       "0.999", "--t-final-us", "0.001", "--out", ts_path});
    REQUIRE(excited.code == 0);
    CHECK(cqed::read_time_series_csv(ts_path).samples[0].lambda3 == 0.999);
}

TEST_CASE("trajectory reader rejects malformed files") {
    const std::string p = scratch_file("bad.csv");
    write_file(p, "wrong,header\n0,0,0,0,0,0\n");
    CHECK(throws_naming<cqed::invalid_parameter>([&] { cqed::read_time_series_csv(p); },
                                                 "unexpected header"));
    write_file(p, "t,lambda1,lambda2,lambda3,v_norm,i_norm\n0,0,0,0,0,0\n");
    CHECK(throws_naming<cqed::invalid_parameter>([&] { cqed::read_time_series_csv(p); },
                                                 "at least two samples"));
    write_file(p,
               "t,lambda1,lambda2,lambda3,v_norm,i_norm\n"
               "0,0,0,0,0,0\n1e-12,0,0,0,0,0\n3e-12,0,0,0,0,0\n");
    CHECK(throws_naming<cqed::invalid_parameter>([&] { cqed::read_time_series_csv(p); },
                                                 "non-uniform"));
    write_file(p, "t,lambda1,lambda2,lambda3,v_norm,i_norm\n0,0,x,0,0,0\n1e-12,0,0,0,0,0\n");
    CHECK(throws_naming<cqed::invalid_parameter>([&] { cqed::read_time_series_csv(p); },
                                                 "bad number"));
    CHECK(throws_naming<cqed::invalid_parameter>(
        [] { cqed::read_time_series_csv("/nonexistent/t.csv"); }, "cannot open"));
}

TEST_CASE("linear sweep of a netlist file") {
    const std::string net = scratch_file("divider.cir");
    write_file(net,
               "V1 in 0 AC 2\n"
               "R1 in out 100\n"
               "R2 out 0 100\n"
               ".port through out 0\n");
    const std::string out = scratch_file("divider.csv");
    const CliResult r = run_cli(
        {"ac", "--netlist", net, "--fmin", "0.001", "--fmax", "0.002", "--points", "3",
         "--out", out});
    REQUIRE(r.code == 0);
    const std::string csv = slurp(out);
    CHECK(csv.find("freq_hz,magnitude,phase_rad\n") == 0);
    CHECK(csv.find("1000000,0.5,") != std::string::npos);
    CHECK(csv.find("2000000,0.5,") != std::string::npos);

    // Grid bounds may come from the scenario file instead of flags.
    const std::string cfg = scratch_file("grid.toml");
    write_file(cfg,
               "[simulation]\n"
               "f_min_ghz = 0.001\n"
               "f_max_ghz = 0.002\n"
               "grid_points = 3\n");
    CHECK(run_cli({"ac", "--netlist", net, "--config", cfg, "--out", out}).code == 0);
}

TEST_CASE("input failures exit with code 1 and one diagnostic line") {
    const CliResult missing = run_cli({"ac", "--netlist", scratch_file("absent.cir"),
                                       "--fmin", "1", "--fmax", "2", "--points", "3"});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("cqed: error: cannot read netlist file") == 0);
    CHECK(missing.err.find('\n') == missing.err.size() - 1);

    const std::string net = scratch_file("noport.cir");
    write_file(net, "V1 in 0 AC 1\nR1 in 0 50\n");
    const CliResult noport =
        run_cli({"ac", "--netlist", net, "--fmin", "1", "--fmax", "2", "--points", "3"});
    CHECK(noport.code == 1);
    CHECK(noport.err.find("declares no .port") != std::string::npos);

    const CliResult nogrid = run_cli({"ac", "--netlist", net});
    CHECK(nogrid.code == 1);
    CHECK(nogrid.err.find("required (flag or config)") != std::string::npos);

    CHECK(run_cli({}).code == 1);
    CHECK(run_cli({"nope"}).code == 1);
    CHECK(run_cli({"oracle", "--config", scenario_path(), "--nope"}).code == 1);
    CHECK(run_cli({"qnd", "--config", scenario_path(), "--delta", "100"}).code == 1);

    const CliResult help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("Resonator") != std::string::npos);
}

TEST_CASE("numerical failures exit with code 2") {
    const std::string cfg = scratch_file("excited.toml");
    write_file(cfg,
               "[physical]\n"
               "f_r_ghz = 6.44\n"
               "delta_mhz = 0.0\n"
               "g_mhz = 266.0\n"
               "gamma_mhz = 1.6\n"
               "lambda3_0 = 1.0\n");

    const CliResult osc = run_cli({"oracle", "--config", cfg});
    CHECK(osc.code == 2);
    CHECK(osc.err.find("cqed: error:") == 0);

    const CliResult div = run_cli(
        {"rbe", "--config", cfg, "--linearized", "--t-final-us", "0.2", "--dt-ps", "5"});
    CHECK(div.code == 2);
    CHECK(div.err.find("diverged") != std::string::npos);
}

TEST_CASE("detuning sweeps from the command line") {
    const std::string out = scratch_file("anticross.csv");
    const CliResult r = run_cli({"anticrossing", "--config", scenario_path(), "--route",
                                 "oracle", "--steps", "5", "--out", out});
    REQUIRE(r.code == 0);
    std::istringstream csv(slurp(out));
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(csv, line)) lines.push_back(line);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "delta_hz,peak_low_hz,peak_high_hz,lamb_shift_hz,route");
    CHECK(lines[1].rfind("-600000000,", 0) == 0);
    for (size_t k = 1; k < lines.size(); ++k)
        CHECK(lines[k].rfind(",oracle") == lines[k].size() - 7);

    const std::string lout = scratch_file("lamb.csv");
    REQUIRE(run_cli({"lambshift", "--config", scenario_path(), "--route", "oracle", "--out",
                     lout})
                .code == 0);
    std::istringstream lcsv(slurp(lout));
    lines.clear();
    while (std::getline(lcsv, line)) lines.push_back(line);
    REQUIRE(lines.size() == 12);  // default eleven detunings
    double prev = 1e18;
    for (size_t k = 1; k < lines.size(); ++k) {
        const auto a = lines[k].rfind(',');
        const auto b = lines[k].rfind(',', a - 1);
        const double lamb = std::stod(lines[k].substr(b + 1, a - b - 1));
        CHECK(lamb < prev);
        prev = lamb;
    }
}
