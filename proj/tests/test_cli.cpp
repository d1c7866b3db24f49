#include "relcost/commands.hpp"
#include "trace_audit.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace relcost;
namespace fs = std::filesystem;

namespace
{
    fs::path scratch(const std::string &name)
    {
        const fs::path dir = fs::path(RELCOST_TEST_TMP) / name;
        fs::remove_all(dir);
        fs::create_directories(dir);
        return dir;
    }

    fs::path write_config(const fs::path &dir, const std::string &text)
    {
        const fs::path path = dir / "config.json";
        std::ofstream(path) << text;
        return path;
    }

    std::string slurp(const fs::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    struct Result
    {
        int code;
        std::string out;
        std::string err;
        nlohmann::json summary;
    };

    Result run(const std::string &command, const fs::path &dir, const std::string &config, unsigned jobs = 1,
               std::optional<std::uint64_t> seed = std::nullopt)
    {
        CommandRequest req;
        req.command = command;
        req.config = write_config(dir, config);
        req.out = dir / "out";
        req.jobs = jobs;
        req.seed_override = seed;
        std::ostringstream out, err;
        Result r{run_command(req, out, err), out.str(), err.str(), {}};
        if (r.code == kExitOk)
            r.summary = nlohmann::json::parse(slurp(req.out / "summary.json"));
        return r;
    }

    int run_binary(const std::string &args)
    {
        const std::string cmd = std::string(RELCOST_CLI_PATH) + " " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    const char *kHeartbeatDeterministic = R"({
        "protocol": "srhb",
        "params": {"alpha_p": 1, "alpha_q": 1, "gamma": 0, "tau": 4, "delta": 3},
        "n_runs": 1, "horizon": 1000, "seed": 42
    })";
} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("simulate a deterministic heartbeat run")
    {
        const fs::path dir = scratch("sim_hb");
        const Result r = run("simulate", dir, kHeartbeatDeterministic);
        REQUIRE(r.code == kExitOk);
        const auto &run0 = r.summary["runs"][0];
        CHECK(run0["num_sends"]["value"] == 6);
        CHECK(run0["wait"]["value"] == 8);
        CHECK(run0["t_f"] == "8");
        CHECK(run0["t_p"] == "inf");

        const std::uint64_t seed = run0["seed"].get<std::uint64_t>();
        const fs::path trace = dir / "out" / ("trace-" + std::to_string(seed) + ".log");
        REQUIRE(fs::exists(trace));
        CHECK(audit::check(audit::parse(slurp(trace)), 4).empty());
        CHECK(fs::exists(dir / "out" / "table.txt"));
        CHECK(fs::exists(dir / "out" / "series.csv"));
    }

    TEST_CASE("simulate the trivial protocol")
    {
        const fs::path dir = scratch("sim_trivial");
        const Result r = run("simulate", dir, R"({"protocol": "trivial", "n_runs": 50, "traces": 3})");
        REQUIRE(r.code == kExitOk);
        CHECK(r.summary["aggregate"]["n_send"]["mean"] == 0.0);
        CHECK(r.summary["runs"].size() == 3);
        for (const auto &run : r.summary["runs"])
            CHECK(run["num_sends"]["value"] == 0);
    }

    TEST_CASE("simulate repeated mode writes the average-cost series")
    {
        const fs::path dir = scratch("sim_repeated");
        const Result r = run("simulate", dir, R"({
            "mode": "repeated",
            "params": {"alpha_p": 1, "alpha_q": 1, "tau": 2, "delta": 2, "sigma": 0.01},
            "n_runs": 3, "horizon": 20000})");
        REQUIRE(r.code == kExitOk);
        const std::string csv = slurp(dir / "out" / "series.csv");
        CHECK(csv.rfind("t,c_total,num_completed,num_hb,ratio\n", 0) == 0);
        CHECK(r.summary["aggregate"]["c_avg_at_horizon"]["mean"].get<double>() == doctest::Approx(56.5).epsilon(0.1));
    }

    TEST_CASE("bad configs exit with the config status")
    {
        const fs::path dir = scratch("bad");
        CHECK(run("simulate", dir, "{ not json").code == kExitConfigError);
        CHECK(run("simulate", dir, R"({"protcol": "srhb"})").code == kExitConfigError);
        CHECK(run("simulate", dir, R"({"params": {"gamma": 1.0}})").code == kExitConfigError);
        CHECK(run("simulate", dir, R"({"protocol": "udp"})").code == kExitConfigError);
        CHECK(run("s2", dir, R"({"protocol": "srhb"})").code == kExitConfigError);
        const Result r = run("simulate", dir, R"({"params": {"beta_p": 0}})");
        CHECK(r.code == kExitConfigError);
        CHECK(r.err.find("beta_p must be > 0") != std::string::npos);
    }

    TEST_CASE("compare in the no-correct-process regime")
    {
        const fs::path dir = scratch("compare_small_rates");
        const Result r = run("compare", dir, R"({
            "protocol": ["trivial", "sender", "receiver"],
            "params": {"beta_p": 0.001, "beta_q": 0.001, "gamma": 0.001, "tau": 5, "delta": 3},
            "n_runs": 30000, "horizon": 100000, "seed": 2})");
        REQUIRE(r.code == kExitOk);
        REQUIRE(r.summary["rows"].size() == 6);
        for (const auto &row : r.summary["rows"])
        {
            CAPTURE(row.dump());
            CHECK(row["verdict"] == "PASS");
        }
        CHECK(r.out.find("PASS") != std::string::npos);
    }

    TEST_CASE("compare the average cost with perfect processes")
    {
        const fs::path dir = scratch("compare_avg");
        const Result r = run("compare", dir, R"({
            "mode": "repeated",
            "params": {"alpha_p": 1, "alpha_q": 1, "gamma": 0, "tau": 2, "delta": 2, "sigma": 0.01},
            "n_runs": 20, "horizon": 100000})");
        REQUIRE(r.code == kExitOk);
        CHECK(r.summary["rows"][0]["metric"] == "c_avg");
        CHECK(r.summary["rows"][0]["verdict"] == "PASS");
    }

    TEST_CASE("compare outside the gate has no prediction")
    {
        const fs::path dir = scratch("compare_gate");
        const Result r = run("compare", dir, R"({
            "protocol": ["sender", "srhb"],
            "params": {"beta_p": 0.3, "beta_q": 0.3, "tau": 2, "delta": 1},
            "n_runs": 200, "horizon": 10000})");
        REQUIRE(r.code == kExitOk);
        for (const auto &row : r.summary["rows"])
            CHECK(row["verdict"] == "NO-PREDICTION");
    }

    TEST_CASE("s2 on the trivial protocol is flat zero")
    {
        const fs::path dir = scratch("s2_trivial");
        const Result r = run("s2", dir, R"({
            "protocol": "trivial", "params": {"alpha_p": 1, "alpha_q": 1},
            "t_grid": {"min": 0, "max": 20}, "n_runs": 100})");
        REQUIRE(r.code == kExitOk);
        for (const auto &pt : r.summary["curve"])
            CHECK(pt["probability"] == 0.0);
        const std::string csv = slurp(dir / "out" / "series.csv");
        CHECK(csv.find(",1,") == std::string::npos);
    }

    TEST_CASE("probe reports divergence of the pathological protocol")
    {
        const fs::path dir = scratch("probe_div");
        const Result r = run("probe", dir, R"({
            "protocol": "pathological", "ack_base": 2.0,
            "params": {"alpha_p": 1, "alpha_q": 1, "gamma": 0.75, "tau": 2, "delta": 1},
            "probe": "divergence", "horizons": [1024, 2048, 4096], "n_runs": 1000})");
        REQUIRE(r.code == kExitOk);
        CHECK(r.summary["report"]["verdict"] == "DIVERGENT");
    }

    TEST_CASE("probe forced scenarios for several protocols")
    {
        const fs::path dir = scratch("probe_imp");
        const Result r = run("probe", dir, R"({
            "protocol": ["sender", "srhb"], "params": {"tau": 3, "delta": 2},
            "probe": "impossibility", "horizon": 100})");
        REQUIRE(r.code == kExitOk);
        CHECK(r.summary["reports"][0]["scenarios"][0]["num_sends"] == 50);
        CHECK(r.summary["reports"][1]["heartbeat_escape"] == true);
    }

    TEST_CASE("optimize with expensive waiting picks the smallest delta")
    {
        const fs::path dir = scratch("optimize");
        const Result r = run("optimize", dir, R"({
            "params": {"alpha_p": 1, "alpha_q": 1, "tau": 2, "sigma": 0.01},
            "costs": {"c_send": 0.01, "c_wait": 50},
            "delta_range": {"min": 3, "max": 30}})");
        REQUIRE(r.code == kExitOk);
        CHECK(r.summary["predicted"]["delta_star"] == 3);
    }

    TEST_CASE("outputs are byte-identical across reruns and worker counts")
    {
        const std::string config = R"({
            "protocol": "sender", "params": {"beta_p": 0.01, "beta_q": 0.01, "gamma": 0.2, "tau": 3, "delta": 2},
            "n_runs": 1500, "traces": 2, "seed": 5})";
        const fs::path a = scratch("idem_a");
        const fs::path b = scratch("idem_b");
        REQUIRE(run("simulate", a, config).code == kExitOk);
        REQUIRE(run("simulate", b, config, 3).code == kExitOk);
        for (const auto &entry : fs::directory_iterator(a / "out"))
        {
            CAPTURE(entry.path().filename().string());
            CHECK(slurp(entry.path()) == slurp(b / "out" / entry.path().filename()));
        }
    }

    TEST_CASE("seed override replaces the config seed")
    {
        const fs::path dir = scratch("seed_override");
        const Result r = run("simulate", dir, kHeartbeatDeterministic, 1, 99);
        REQUIRE(r.code == kExitOk);
        CHECK(r.summary["config"]["seed"] == 99);
    }

    TEST_CASE("command-line binary")
    {
        const fs::path dir = scratch("binary");
        const fs::path cfg = write_config(dir, kHeartbeatDeterministic);
        const std::string out = (dir / "out").string();
        CHECK(run_binary("simulate --config " + cfg.string() + " --out " + out + " --jobs 2 --seed-override 7") == 0);
        CHECK(fs::exists(dir / "out" / "summary.json"));
        CHECK(run_binary("simulate --config " + (dir / "missing.json").string()) == kExitConfigError);
        CHECK(run_binary("") != 0);
        CHECK(run_binary("frobnicate --config " + cfg.string()) != 0);
        CHECK(run_binary("simulate") != 0);
    }
}
