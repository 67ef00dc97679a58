#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cli/config.hpp"
#include "cli/util.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

int run_tool(const std::string& args) {
    const std::string cmd = std::string(NOMA_REP_BIN) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("dB conversion round trips") {
    for (double db : {-10.0, 0.0, 6.0, 20.0}) {
        CHECK(cli::linear_to_db(cli::db_to_linear(db)) == doctest::Approx(db).epsilon(1e-12));
    }
    CHECK(cli::db_to_linear(6.0) == doctest::Approx(std::pow(10.0, 0.6)).epsilon(1e-15));
}

TEST_CASE("fnv1a64 known vectors") {
    CHECK(cli::fnv1a64("") == 0xCBF29CE484222325ULL);
    CHECK(cli::fnv1a64("a") == 0xAF63DC4C8601EC8CULL);
}

TEST_CASE("config loading and overrides") {
    const std::string path = "test_cli_config.json";
    write_file(path, R"({"outage_sweep": {"D": [4], "M": [0], "T": [1.0],
        "snr_db": [0, 6], "trials": 5000, "seed": 7}})");

    const cli::RunConfig cfg = cli::load_config(path, "outage_sweep", {}, {}, "");
    CHECK(cfg.trials == 5000);
    CHECK(cfg.seed == 7);
    CHECK(cfg.out_path == "outage_sweep.csv");
    CHECK(cfg.integer_list("D") == std::vector<long>{4});
    CHECK(cfg.number_list("snr_db") == std::vector<double>{0.0, 6.0});

    const cli::RunConfig overridden = cli::load_config(path, "outage_sweep", 11, 9000, "custom.csv");
    CHECK(overridden.seed == 11);
    CHECK(overridden.trials == 9000);
    CHECK(overridden.out_path == "custom.csv");

    CHECK_THROWS_AS(cli::load_config(path, "fbl_sweep", {}, {}, ""), cli::ConfigError);
    CHECK_THROWS_AS(cli::load_config("no_such_file.json", "plan", {}, {}, ""), cli::ConfigError);

    write_file(path, R"({"outage_sweep": {"D": [4], "trials": 10}})");
    CHECK_THROWS_AS(cli::load_config(path, "outage_sweep", {}, {}, ""), cli::ConfigError);
    std::remove(path.c_str());
}

TEST_CASE("binary: plan command produces the reference layering") {
    const std::string config = std::string(NOMA_CONFIG_DIR) + "/plan_example.json";
    const int rc = run_tool("plan --config " + config + " --out test_plan_out.json");
    REQUIRE(rc == 0);
    const nlohmann::json plan = nlohmann::json::parse(slurp("test_plan_out.json"));
    CHECK(plan["L"] == 8);
    CHECK(plan["B"] == 3);
    CHECK(plan["layers"][0]["D"] == 8);
    CHECK(plan["layers"][1]["D"] == 4);
    CHECK(plan["layers"][2]["D"] == 2);
    CHECK(plan["layers"][0]["K"] == 1);
    CHECK(plan["layers"][1]["K"] == 2);
    CHECK(plan["layers"][2]["K"] == 4);
    CHECK(plan["feasible"] == true);
    std::remove("test_plan_out.json");
}

TEST_CASE("binary: identical config and seed give byte-identical csv") {
    write_file("test_cli_sweep.json", R"({"outage_sweep": {"D": [4], "M": [0, 1], "T": [1.0],
        "snr_db": [0, 6], "trials": 20000, "seed": 42}})");
    REQUIRE(run_tool("outage-sweep --config test_cli_sweep.json --out run1.csv") == 0);
    REQUIRE(run_tool("outage-sweep --config test_cli_sweep.json --out run2.csv") == 0);
    const std::string a = slurp("run1.csv");
    const std::string b = slurp("run2.csv");
    REQUIRE(!a.empty());
    CHECK(a == b);

    // header and metadata shape
    std::istringstream lines(a);
    std::string meta, header;
    std::getline(lines, meta);
    std::getline(lines, header);
    CHECK(meta.rfind("# noma-rep 0.1.0 command=outage_sweep seed=42 trials=20000 config_fnv1a=",
                     0) == 0);
    CHECK(header ==
          "D,M,T,snr_db,mc_exact,mc_ci_lo,mc_ci_hi,mc_omega,psi,residual,bound_total,bound_valid,"
          "psi_asymptotic");

    // a different seed changes the Monte Carlo columns
    REQUIRE(run_tool("outage-sweep --config test_cli_sweep.json --seed 43 --out run3.csv") == 0);
    CHECK(slurp("run3.csv") != a);
    std::remove("test_cli_sweep.json");
    std::remove("run1.csv");
    std::remove("run2.csv");
    std::remove("run3.csv");
}

TEST_CASE("binary: moment-check and sic-sim run end to end") {
    write_file("test_cli_misc.json", R"({
        "moment_check": {"pairs": [[8, 2]], "trials": 20000, "seed": 5},
        "sic_sim": {"layout": {"L": 4, "layers": [{"D": 4, "K": 1}, {"D": 2, "K": 2}]},
                    "snr_db": 6, "eps_target": 0.01, "trials": 20000, "seed": 6}})");
    REQUIRE(run_tool("moment-check --config test_cli_misc.json --out mc.csv") == 0);
    const std::string mc = slurp("mc.csv");
    CHECK(mc.find("D,M,mean_W,predicted_mean,second_W,predicted_second,ks_distance") !=
          std::string::npos);
    REQUIRE(run_tool("sic-sim --config test_cli_misc.json --out sic.csv") == 0);
    const std::string sic = slurp("sic.csv");
    CHECK(sic.find("rho_union_bound") != std::string::npos);
    CHECK(sic.find("\n1,4,1,1,") != std::string::npos);  // layer rows carry D,K,M
    std::remove("test_cli_misc.json");
    std::remove("mc.csv");
    std::remove("sic.csv");
}

TEST_CASE("binary: linklevel with an explicit layout and user") {
    write_file("test_cli_ll.json", R"({
        "linklevel": {"layout": {"L": 8, "layers": [{"D": 8, "K": 1}, {"D": 8, "K": 1}]},
                      "user": 0, "R": [1.0], "n": 64, "snr_db": 6,
                      "trials": 2000, "seed": 8}})");
    REQUIRE(run_tool("linklevel --config test_cli_ll.json --out ll.csv") == 0);
    const std::string ll = slurp("ll.csv");
    CHECK(ll.find("\n8,1,1,64,6,") != std::string::npos);  // D=8, M=1 target row
    std::remove("test_cli_ll.json");
    std::remove("ll.csv");
}

TEST_CASE("binary: exit codes") {
    CHECK(run_tool("outage-sweep --config missing.json") == 2);

    write_file("test_cli_wrong.json", R"({"plan": {"mode": "dyadic"}})");
    CHECK(run_tool("outage-sweep --config test_cli_wrong.json") == 2);  // wrong section
    CHECK(run_tool("plan --config test_cli_wrong.json") == 2);          // missing fields

    // unreachable target: every layer infeasible
    write_file("test_cli_infeasible.json",
               R"({"plan": {"mode": "dyadic", "L": 4, "B": 1, "snr_db": -90,
                   "eps_target": 0.0001}})");
    CHECK(run_tool("plan --config test_cli_infeasible.json --out infeasible.json") == 3);
    const nlohmann::json plan = nlohmann::json::parse(slurp("infeasible.json"));
    CHECK(plan["feasible"] == false);
    std::remove("test_cli_wrong.json");
    std::remove("test_cli_infeasible.json");
    std::remove("infeasible.json");
}
