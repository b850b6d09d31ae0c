#include "doctest.h"

#include "dplab/cli.hpp"
#include "dplab/errors.hpp"
#include "oracles.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dplab;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header = nullptr)
{
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            row.push_back(std::stod(cell));
        }
        rows.push_back(row);
    }
    return rows;
}

std::string shape(const char* name) { return oracle::shape_path(name); }

} // namespace

TEST_CASE("parse_grid")
{
    CHECK(cli::parse_grid("0:1:0.25") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(cli::parse_grid("0:1:0.3").size() == 4);
    CHECK(cli::parse_grid("0:1:0.4").size() == 4); // 1.2 is within half a step of 1
    CHECK(cli::parse_grid("0:25:0.02").size() == 1251);
    CHECK(cli::parse_grid("-1,2.5,3") == std::vector<double>{-1.0, 2.5, 3.0});
    CHECK(cli::parse_grid("0.01") == std::vector<double>{0.01});
    CHECK_THROWS_AS(cli::parse_grid(""), ValidationError);
    CHECK_THROWS_AS(cli::parse_grid("1:0:0.1"), ValidationError);
    CHECK_THROWS_AS(cli::parse_grid("0:1:0"), ValidationError);
    CHECK_THROWS_AS(cli::parse_grid("0:1"), ValidationError);
    CHECK_THROWS_AS(cli::parse_grid("a,b"), ValidationError);
    CHECK_THROWS_AS(cli::parse_grid("nan"), ValidationError);
}

TEST_CASE("parse_window and number formatting")
{
    CHECK(cli::parse_window("-1:30") == std::pair<double, double>{-1.0, 30.0});
    CHECK_THROWS_AS(cli::parse_window("3:1"), ValidationError);
    CHECK_THROWS_AS(cli::parse_window("3"), ValidationError);
    CHECK(cli::format_number(0.1) == "0.1");
    CHECK(cli::format_number(-0.0) == "0");
    CHECK(std::stod(cli::format_number(M_PI)) == M_PI);
    CHECK_THROWS_AS(cli::format_number(NAN), NumericalError);
    CHECK_THROWS_AS(cli::format_number(INFINITY), NumericalError);
}

TEST_CASE("moments subcommand")
{
    auto r = run({"moments", "--phi", shape("dprime"), "--psi", shape("box")});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["classification"] == "DeltaPrimeDeltaLimit");
    CHECK(doc["m1_phi"].get<double>() == doctest::Approx(-1.0));
    CHECK(doc["m0_psi"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("resonances subcommand")
{
    auto r = run({"resonances", "--phi", shape("well"), "--window", "-1:30", "--step", "0.05"});
    REQUIRE(r.code == 0);
    std::string header;
    auto rows = parse_csv(r.out, &header);
    CHECK(header == "alpha,theta,kappa,residual");
    REQUIRE(rows.size() == 4);
    for (int n = 0; n < 4; ++n) {
        CHECK(std::abs(rows[n][0] - std::pow(n * oracle::pi / 2.0, 2)) < 1e-6);
    }
}

TEST_CASE("scatter subcommand")
{
    auto r = run({"scatter", "--phi", shape("dprime"), "--psi", shape("box"), "--alpha", "0",
                  "--beta", "2", "--eps", "0.001", "--k", "1"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["limit"]["resonant"] == true);
    CHECK(doc["limit"]["T2"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(doc["T2"].get<double>() - 0.5) < 1e-3);

    auto right = run({"scatter", "--phi", shape("step"), "--alpha", "1", "--eps", "0.1", "--k",
                      "1", "--incidence", "right"});
    auto left = run({"scatter", "--phi", shape("step"), "--alpha", "1", "--eps", "0.1", "--k",
                     "1"});
    REQUIRE(right.code == 0);
    CHECK(nlohmann::json::parse(right.out)["T2"].get<double>() ==
          doctest::Approx(nlohmann::json::parse(left.out)["T2"].get<double>()).epsilon(1e-10));
}

TEST_CASE("sweep subcommand reproduces the resonance spikes")
{
    auto r = run({"sweep", "--phi", shape("well"), "--psi", shape("box"), "--beta", "1", "--eps",
                  "0.01", "--k", "1", "--alpha", "0:25:0.02"});
    REQUIRE(r.code == 0);
    std::string header;
    auto rows = parse_csv(r.out, &header);
    CHECK(header == "alpha,k,eps,ReR,ImR,ReT,ImT,T2");
    REQUIRE(rows.size() == 1251);
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        if (rows[i][7] > rows[i - 1][7] && rows[i][7] >= rows[i + 1][7] && rows[i][7] > 0.1) {
            peaks.push_back(rows[i][0]);
        }
    }
    REQUIRE(peaks.size() == 3);
    for (int n = 1; n <= 3; ++n) {
        CHECK(std::abs(peaks[n - 1] - std::pow(n * oracle::pi / 2.0, 2)) < 0.1);
    }
}

TEST_CASE("converge and resolve subcommands")
{
    auto c = run({"converge", "--phi", shape("well"), "--psi", shape("box"), "--alpha", "1",
                  "--beta", "1", "--k", "1"});
    REQUIRE(c.code == 0);
    std::string header;
    auto rows = parse_csv(c.out, &header);
    CHECK(header == "eps,errR,errT,fitted_order");
    REQUIRE(rows.size() == 7);
    CHECK(rows[0][3] > 0.8);
    CHECK(rows[0][3] < 1.2);

    auto tmp = std::filesystem::temp_directory_path() / "dplab_cli_trace.csv";
    auto r = run({"resolve", "--phi", shape("well"), "--psi", shape("box"), "--alpha",
                  "2.4674011002723395", "--beta", "1", "--eps", "0.125,0.0625,0.03125",
                  "--trace", tmp.string()});
    REQUIRE(r.code == 0);
    rows = parse_csv(r.out, &header);
    CHECK(header == "eps,h,error_L2,fitted_order");
    REQUIRE(rows.size() == 3);
    CHECK(rows[2][1] == doctest::Approx(0.03125 / 64));
    std::ifstream trace(tmp);
    std::string first;
    std::getline(trace, first);
    CHECK(first == "x,ReY,ImY");
    std::filesystem::remove(tmp);
}

TEST_CASE("output file and determinism")
{
    auto tmp = std::filesystem::temp_directory_path() / "dplab_cli_out.csv";
    std::vector<std::string> args{"sweep", "--phi", shape("step"), "--psi", shape("odd"),
                                  "--beta", "-1.5", "--eps", "0.1,0.01", "--k", "0.5:2:0.5",
                                  "--alpha", "-3:3:1"};
    auto a = run(args);
    args.push_back("--out");
    args.push_back(tmp.string());
    auto b = run(args);
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(b.out.empty());
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == a.out);
    std::filesystem::remove(tmp);
}

TEST_CASE("exit codes")
{
    CHECK(run({"--help"}).code == 0);
    CHECK(run({}).code == cli::kExitValidation);
    CHECK(run({"bogus"}).code == cli::kExitValidation);
    CHECK(run({"moments", "--phi", "/no/such/file.json", "--psi", shape("box")}).code ==
          cli::kExitValidation);
    CHECK(run({"moments", "--phi", shape("well")}).code == cli::kExitValidation);
    auto bad_grid = run({"sweep", "--phi", shape("well"), "--alpha", "1:0:1", "--eps", "0.1",
                         "--k", "1"});
    CHECK(bad_grid.code == cli::kExitValidation);
    CHECK(bad_grid.err.find("sweep") != std::string::npos);
    CHECK(run({"scatter", "--phi", shape("well"), "--alpha", "1", "--eps", "0", "--k", "1"}).code ==
          cli::kExitValidation);
    CHECK(run({"resonances", "--phi", shape("well"), "--window", "-1:30", "--step", "-1"}).code ==
          cli::kExitValidation);
    CHECK(run({"resolve", "--phi", shape("well"), "--alpha", "1", "--zeta-im", "0"}).code ==
          cli::kExitValidation);

    auto underflow = run({"scatter", "--phi", shape("dprime"), "--alpha", "1e9", "--eps", "0.1",
                          "--k", "1"});
    CHECK(underflow.code == cli::kExitNumerical);
    CHECK(underflow.err.find("scatter") != std::string::npos);
    CHECK(underflow.out.empty());
}
