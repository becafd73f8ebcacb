#include "fbra/error.hpp"
#include "fbra/io.hpp"

#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace fbra;

TEST_CASE("number formatting round-trips", "[io]") {
    for (double x : {0.0, 0.1, 1.0 / 3.0, 0.45761387158001604, 1e-300, -2.5, 123456789.125}) {
        CHECK(std::stod(format_number(x)) == x);
    }
    CHECK(format_number(0.125) == "0.125");
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("CSV escaping", "[io]") {
    Table t;
    t.columns = {"name", "value"};
    t.rows = {{std::string("a,b"), 1.5}, {std::string("say \"hi\""), std::int64_t{3}}, {Cell{}, true}};
    const auto text = render(t, OutputFormat::CSV);
    CHECK(text == "name,value\n\"a,b\",1.5\n\"say \"\"hi\"\"\",3\n,true\n");
    const auto doc = parse_csv(text);
    REQUIRE(doc.rows.size() == 3);
    CHECK(doc.header == std::vector<std::string>{"name", "value"});
    CHECK(doc.rows[0][0] == "a,b");
    CHECK(doc.rows[1][0] == "say \"hi\"");
    CHECK(doc.rows[2][0].empty());
}

TEST_CASE("JSON mirrors CSV field names", "[io]") {
    Table t;
    t.columns = {"x", "missing"};
    t.rows = {{0.5, Cell{}}};
    auto j = nlohmann::json::parse(render(t, OutputFormat::JSON));
    REQUIRE(j.is_array());
    CHECK(j[0]["x"] == 0.5);
    CHECK(j[0]["missing"].is_null());
    t.single_record = true;
    j = nlohmann::json::parse(render(t, OutputFormat::JSON));
    CHECK(j.is_object());
}

TEST_CASE("datasets re-parse to identical values", "[io]") {
    const auto table = boundary_table(Scheme::Priority, 0.001);
    const auto doc = parse_csv(render(table, OutputFormat::CSV));
    REQUIRE(doc.rows.size() == table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (std::size_t c = 0; c < 2; ++c) CHECK(std::stod(doc.rows[i][c]) == std::get<double>(table.rows[i][c]));
    }
    CHECK(std::stod(doc.rows[500][1]) == 0.125);

    const auto json = nlohmann::json::parse(render(table, OutputFormat::JSON));
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(json[i]["lambda2"].get<double>() == std::get<double>(table.rows[i][1]));
    }

    SimulationConfig cfg;
    cfg.horizon = 20'000;
    const auto sim = simulation_table(run(cfg));
    const auto sdoc = parse_csv(render(sim, OutputFormat::CSV));
    REQUIRE(sdoc.rows.size() == 1);
    CHECK(sdoc.header == sim.columns);
    for (std::size_t c = 0; c < sim.columns.size(); ++c) {
        if (const auto* d = std::get_if<double>(&sim.rows[0][c])) CHECK(std::stod(sdoc.rows[0][c]) == *d);
    }
}

TEST_CASE("boundary rows", "[io]") {
    const auto ra = boundary_table(Scheme::RA, 0.05);
    CHECK(std::get<double>(ra.rows[5][0]) == 0.25);
    CHECK(std::get<double>(ra.rows[5][1]) == 0.25);
    const auto td = boundary_table(Scheme::TD, 0.1);
    CHECK(std::get<double>(td.rows[3][1]) == 0.7);
    CHECK_THROWS_AS(boundary_table(Scheme::TD, 0.0), Error);
}

TEST_CASE("qbd report fields", "[io]") {
    const auto t = qbd_table(analyze_qbd({0.5, 0.5}, 0.1));
    const auto j = nlohmann::json::parse(render(t, OutputFormat::JSON));
    CHECK(j["r_closed_12"].get<double>() == Catch::Approx(4.0 / 9.0));
    CHECK(j["pi0"].get<double>() == Catch::Approx(5.0 / 9.0));
    CHECK(j["stable"] == true);
}

#ifdef FBRA_CLI_PATH
namespace {

int run_cli(const std::string& args, const std::string& out) {
    const std::string cmd = std::string("\"") + FBRA_CLI_PATH + "\" " + args + " > \"" + out + "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("CLI exit codes", "[io][cli]") {
    const std::string out = "fbra_io_test_out.txt";
    CHECK(run_cli("boundary --scheme ra --step 0.05", out) == 0);
    CHECK(slurp(out).find("0.25,0.25\n") != std::string::npos);
    CHECK(run_cli("boundary --scheme bogus", out) == 1);
    CHECK(run_cli("region --p1 1.5 --p2 0.5", out) == 1);
    CHECK(run_cli("analyze qbd --p1 0.5 --p2 0.5 --l2 0.2", out) == 3);
    CHECK(run_cli("analyze qbd --p1 0.5 --p2 0.5 --l2 0.1 --format json", out) == 0);
    CHECK(nlohmann::json::parse(slurp(out))["mu1_closed"].get<double>() == Catch::Approx(0.45));
    CHECK(run_cli("simulate --slots 100 --warmup 100", out) == 1);
    CHECK(run_cli("verify --suite qbd", out) == 0);
    std::remove(out.c_str());
}
#endif
