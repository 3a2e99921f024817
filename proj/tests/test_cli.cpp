#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "twostep/cli.hpp"

using namespace twostep;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("certify at the constant-model boundary") {
    const auto r = run_cli({"certify", "--model", "constant", "--L", "0.5", "--beta", "1"});
    CHECK(r.code == cli::kSuccess);
    const auto doc = json::parse(r.out);
    CHECK(doc["criterion_holds"] == true);
    CHECK(doc["cubic_holds"] == false);
    CHECK(doc["t_star"].get<double>() == 2.0);
    CHECK(doc["H_star"].is_null());
    CHECK(doc["model"] == "constant");
    for (const char* key : {"beta", "model", "r0", "b", "R", "t_star", "t_star2",
                            "criterion_holds", "cubic_holds", "H_star", "cubic_coefficient", "q"}) {
        CHECK(doc.contains(key));
    }
}

TEST_CASE("certify exit codes") {
    CHECK(run_cli({"certify", "--model", "gamma", "--gamma", "1", "--beta", "0.2"}).code ==
          cli::kCriterionFailed);
    CHECK(run_cli({"certify", "--model", "constant", "--L", "1", "--beta", "-1"}).code ==
          cli::kUsage);
    CHECK(run_cli({"certify", "--model", "constant", "--beta", "0.1"}).code == cli::kUsage);
    CHECK(run_cli({"certify", "--model", "quartic", "--L", "1", "--beta", "0.1"}).code ==
          cli::kUsage);
    CHECK(run_cli({"certify", "--model", "constant", "--L", "x", "--beta", "0.1"}).code ==
          cli::kUsage);
    CHECK(run_cli({}).code == cli::kUsage);
    CHECK(run_cli({"frobnicate"}).code == cli::kUsage);
    const auto help = run_cli({"--help"});
    CHECK(help.code == cli::kSuccess);
    CHECK(help.out.find("solve-riccati") != std::string::npos);
}

TEST_CASE("certify text output") {
    const auto r = run_cli({"certify", "--model", "selfconcordant", "--beta", "0.1", "--format",
                            "text"});
    CHECK(r.code == cli::kSuccess);
    CHECK(r.out.find("model = \"selfconcordant\"") != std::string::npos);
    CHECK(r.out.find("criterion_holds = true") != std::string::npos);
}

TEST_CASE("certificate JSON round-trips") {
    for (double beta : {0.05, 0.1, 3 - 2 * std::sqrt(2.0), 0.2}) {
        const auto cert =
            majorant::certify(beta, majorant::AverageLipschitzModel::gamma_type(1.0));
        const auto doc = cli::certificate_json(cert);
        CHECK(json::parse(doc.dump()) == doc);
        if (cert.t_star) CHECK(doc["t_star"].get<double>() == *cert.t_star);
        if (cert.q) CHECK(doc["q"].get<double>() == *cert.q);
    }
}

TEST_CASE("majorize") {
    const auto r =
        run_cli({"majorize", "--model", "constant", "--L", "1", "--beta", "0.5", "--k", "5"});
    CHECK(r.code == cli::kSuccess);
    CHECK(r.out.rfind("k,t_k,s_k\n"
                      "0,0.0000000000000000e+00,5.0000000000000000e-01\n"
                      "1,6.2500000000000000e-01,8.1250000000000000e-01\n",
                      0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 6);
    CHECK(run_cli({"majorize", "--model", "constant", "--L", "1", "--beta", "0.6"}).code ==
          cli::kCriterionFailed);
}

TEST_CASE("order") {
    const auto r = run_cli({"order", "--errors", "1e-1,1e-3,1e-9"});
    CHECK(r.code == cli::kSuccess);
    CHECK(r.out == "order\n3.0000000000000000e+00\n");
    CHECK(run_cli({"order", "--errors", "1e-1"}).code == cli::kUsage);
    CHECK(run_cli({"order"}).code == cli::kUsage);
}

TEST_CASE("solve-riccati") {
    const fs::path dump = fs::temp_directory_path() / "twostep_cli_x.csv";
    fs::remove(dump);
    const auto r = run_cli({"solve-riccati", "--alpha", "0.5", "--c", "0.333333333333", "--n",
                            "16", "--dump-x", dump.string()});
    CHECK(r.code == cli::kSuccess);
    const auto doc = json::parse(r.out);
    CHECK(doc["iterations"] == 5);
    CHECK(doc["n"] == 16);
    CHECK(doc["res_history"].size() == 5);
    CHECK(doc["riccati_residual"].get<double>() <= 1e-12);
    CHECK(doc["L_beta"].get<double>() == doctest::Approx(0.5).epsilon(1e-11));
    for (const char* key : {"alpha", "c", "n", "L_beta", "iterations", "res_history",
                            "riccati_residual", "t_star", "wall_time_s"}) {
        CHECK(doc.contains(key));
    }
    const auto csv = read_file(dump);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 16);
    CHECK(std::count(csv.begin(), csv.end(), ',') == 16 * 15);
    fs::remove(dump);

    // 1000 = 4·250 is a valid size; 1002 is not.
    CHECK(run_cli({"solve-riccati", "--alpha", "0.5", "--c", "0.3", "--n", "1002"}).code ==
          cli::kUsage);
    CHECK(run_cli({"solve-riccati", "--alpha", "1.5", "--c", "0.3", "--n", "8"}).code ==
          cli::kUsage);
}

TEST_CASE("solution JSON is deterministic apart from timing") {
    auto a = json::parse(
        run_cli({"solve-riccati", "--alpha", "0.25", "--c", "0.1", "--n", "32"}).out);
    auto b = json::parse(
        run_cli({"solve-riccati", "--alpha", "0.25", "--c", "0.1", "--n", "32"}).out);
    CHECK(json::parse(a.dump()) == a);
    a.erase("wall_time_s");
    b.erase("wall_time_s");
    CHECK(a == b);
}

TEST_CASE("bench writes tables and histories") {
    const fs::path dir = fs::temp_directory_path() / "twostep_cli_bench";
    fs::remove_all(dir);
    const auto r = run_cli({"bench", "--sizes", "8,16", "--out", dir.string()});
    CHECK(r.code == cli::kSuccess);
    for (const char* name : {"table_n8.csv", "table_n16.csv"}) {
        const auto table = read_file(dir / name);
        CHECK(table.rfind("alpha,c,L_beta,iter,Res,cpu_time\n", 0) == 0);
        CHECK(std::count(table.begin(), table.end(), '\n') == 7);
    }
    std::size_t histories = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        histories += entry.path().filename().string().rfind("history_", 0) == 0;
        CHECK(entry.path().extension() != ".tmp");
    }
    CHECK(histories == 12);
    fs::remove_all(dir);

    CHECK(run_cli({"bench", "--sizes", "", "--out", dir.string()}).code == cli::kUsage);
    CHECK(run_cli({"bench", "--sizes", "8,10", "--out", dir.string()}).code == cli::kUsage);
    CHECK_FALSE(fs::exists(dir / "table_n8.csv"));
}

TEST_CASE("format_number") {
    CHECK(cli::format_number(0.1) == "1.0000000000000001e-01");
    CHECK(cli::format_number(-2.0) == "-2.0000000000000000e+00");
}

}
