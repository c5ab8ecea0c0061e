#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gint/cli.hpp"
#include "gint/corpus.hpp"
#include "gint/io.hpp"

using namespace gint;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("gint_test_" + name);
}

}  // namespace

TEST_CASE("format_double reads back exactly") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0})
        CHECK(std::stod(format_double(x)) == x);
    CHECK(format_double(0.25) == "0.25");
}

TEST_CASE("IntegralResult JSON round trip") {
    IntegrateOptions o;
    o.tol = 1e-6;
    o.record_variation = true;
    const auto& fn = lookup("vector2d");
    const IntegralResult r = integrate(fn.f, fn.domain, o);
    const json j = to_json(r);
    CHECK(j.at("value").size() == 2);
    CHECK(j.at("trace").front().at("gap").is_null());
    const IntegralResult back = integral_result_from_json(json::parse(j.dump()));
    CHECK(back == r);
    CHECK(vec_from_json(json::array()) == Vec());
}

TEST_CASE("FubiniReport JSON round trip") {
    const auto& fn = lookup("line_mass2d");
    FubiniOptions o = default_fubini_options(fn);
    o.tol_outer = 1e-4;
    const FubiniReport r = fubini_compare(fn.f, fn.domain, fn.z1, fn.z2, o);
    const json j = to_json(r);
    CHECK(j.at("within_bound").get<bool>() == r.within_bound());
    CHECK(fubini_report_from_json(json::parse(j.dump())) == r);
}

TEST_CASE("CSV layout") {
    IntegrateOptions o;
    o.tol = 1e-3;
    const auto& fn = lookup("vector2d");
    const IntegralResult r = integrate(fn.f, fn.domain, o);
    std::ostringstream os;
    write_csv(os, r);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "depth,cells,estimate_0,estimate_1,gap");
    std::getline(in, line);
    CHECK(line.back() == ',');  // no gap on the first row
    std::size_t rows = 1;
    while (std::getline(in, line)) {
        CHECK(line.back() != ',');
        ++rows;
    }
    CHECK(rows == r.trace.size());
}

TEST_CASE("integrate exits 0 with the corpus value") {
    const Run r = run({"integrate", "--fn", "poly_xy", "--tol", "1e-6"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("result").at("value")[0].get<double>() == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(j.at("result").at("converged").get<bool>());
}

TEST_CASE("non-convergence exits 2") {
    const Run r = run({"integrate", "--fn", "hk1d_cos", "--mode", "mcshane", "--max-depth", "12"});
    CHECK(r.code == 2);
    const json j = json::parse(r.out);
    CHECK_FALSE(j.at("result").at("converged").get<bool>());
}

TEST_CASE("bad input exits 1") {
    CHECK(run({"integrate", "--fn", "nope"}).code == 1);
    CHECK(run({"integrate", "--fn", "poly_xy", "--tol", "0"}).code == 1);
    CHECK(run({"integrate", "--fn", "poly_xy", "--max-depth", "61"}).code == 1);
    CHECK(run({"integrate", "--fn", "poly_xy", "--bogus"}).code == 1);
    CHECK(run({"fubini", "--fn", "hk1d_cos"}).code == 1);
    CHECK(run({}).code == 1);
    const Run e = run({"integrate", "--fn", "nope"});
    CHECK(e.err.find("nope") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("fubini reports within bound") {
    const Run r = run({"fubini", "--fn", "grid_null2d", "--tol", "1e-4"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("report").at("within_bound").get<bool>());
}

TEST_CASE("nullset exit codes") {
    CHECK(run({"nullset", "--fn", "grid_null2d"}).code == 0);
    CHECK(run({"nullset", "--set", "empty"}).code == 0);
    CHECK(run({"nullset", "--fn", "dirichlet1d", "--mode", "hk"}).code == 2);
}

TEST_CASE("sstar on a Lipschitz entry stays under its bound") {
    const Run r = run({"sstar", "--fn", "gauss2d", "--depth-p", "4"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("sum").get<double>() <= j.at("mesh_bound").get<double>());
}

TEST_CASE("config file with flag precedence") {
    const auto path = temp_file("config.json");
    {
        std::ofstream f(path);
        f << R"({"fn": "poly_xy", "tol": 1e-3, "max_depth": 30})";
    }
    const Run a = run({"integrate", "--config", path.string()});
    REQUIRE(a.code == 0);
    CHECK(json::parse(a.out).at("result").at("tol").get<double>() == 1e-3);
    const Run b = run({"integrate", "--config", path.string(), "--tol", "1e-5"});
    REQUIRE(b.code == 0);
    CHECK(json::parse(b.out).at("result").at("tol").get<double>() == 1e-5);

    RunConfig c;
    CHECK_THROWS_AS(apply_config_json(c, json{{"tolerance", 1.0}}), std::invalid_argument);
    std::filesystem::remove(path);
}

TEST_CASE("output file and partition dump") {
    const auto out = temp_file("out.csv");
    const auto dump = temp_file("part.jsonl");
    const Run r = run({"integrate", "--fn", "sum_xy", "--tol", "1e-3", "--out", "csv", "-o", out.string(),
                       "--dump-partition", dump.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "depth,cells,estimate_0,gap");
    std::ifstream parts(dump);
    std::string line;
    int n = 0;
    while (std::getline(parts, line)) {
        const json j = json::parse(line);
        CHECK(j.contains("cell"));
        CHECK(j.contains("tag"));
        ++n;
    }
    CHECK(n > 0);
    std::filesystem::remove(out);
    std::filesystem::remove(dump);
}

TEST_CASE("corpus list") {
    const Run r = run({"corpus", "list", "--json", "--dim", "2", "--class", "bochner"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j.size() == list({2, FnClass::bochner}).size());
    const Run t = run({"corpus", "list"});
    CHECK(t.code == 0);
    CHECK(t.out.find("hk2d_product") != std::string::npos);
}
