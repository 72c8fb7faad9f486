#include <cmath>
#include <functional>
#include <filesystem>
#include <string>

#include <doctest.h>

#include "fixtures.hpp"
#include "hessmetric/error.hpp"
#include "hessmetric/harness.hpp"
#include "hessmetric/io.hpp"

using namespace hessmetric;
using namespace hessmetric::harness;

namespace {

std::string error_message(const std::function<void()>& f, ErrorCode expected) {
    try {
        f();
    } catch (const Error& e) {
        CHECK(e.code() == expected);
        return e.what();
    }
    FAIL("expected an error");
    return "";
}

const char* kScenario = R"js({
  "params": {"n": 2, "m": 2},
  "profiles": {
    "a": {"breakpoints": [-2.0, -1.0], "slopes": [0.0, 0.5, 1.5]},
    "b": {"breakpoints": [-1.0, -0.25], "slopes": [0.0, 1.0, 4.0]}
  },
  "pairs": [["a", "b"]],
  "t_grid": 5,
  "radii": [0.5],
  "expect": {"e1(a)": 138.17446161525102, "d(a,b)": 174.77424460262406}
})js";

}  // namespace

TEST_CASE("doubles print in shortest round-trip form") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(io::format_double(x)) == x);
    CHECK(io::format_double(0.5) == "0.5");
    CHECK(io::format_double(-2.0) == "-2");
}

TEST_CASE("profile JSON round trip") {
    auto g = fixtures::A({3, 2});
    auto back = io::profile_from_json(io::profile_to_json(g));
    CHECK(back == g);
    auto j = nlohmann::json::parse(R"js({"breakpoints": [-1], "slopes": [0, 2]})js");
    CHECK(io::profile_from_json(j, "p", core::Coordinate{2, 1}).coordinate() == core::Coordinate{2, 1});
    auto msg = error_message([&] { io::profile_from_json(j, "p"); }, ErrorCode::Parse);
    CHECK(msg.find("p.coordinate") != std::string::npos);
}

TEST_CASE("measure JSON round trip") {
    calculus::AtomicMeasure mu{{{-2.0, 1.5}, {-0.5, 3.0}}};
    auto back = io::measure_from_json(io::measure_to_json(mu));
    REQUIRE(back.atoms.size() == 2);
    CHECK(back.atoms[1].tau == -0.5);
    CHECK(back.atoms[1].mass == 3.0);
}

TEST_CASE("JSON syntax errors carry a position") {
    auto msg = error_message([] { io::parse_json("{\n  \"a\": [1, 2\n}", "bad.json"); }, ErrorCode::Parse);
    CHECK(msg.find("bad.json") != std::string::npos);
    CHECK(msg.find("line") != std::string::npos);
}

TEST_CASE("scenario parsing") {
    auto s = parse_scenario(kScenario);
    CHECK(s.params.n == 2);
    CHECK(s.profiles.size() == 2);
    CHECK(s.t_grid == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(s.weight_profile().is_zero());
    CHECK(error_message([] { parse_scenario(R"js({"profiles": {}})js"); }, ErrorCode::Parse).find("params") !=
          std::string::npos);
    CHECK(error_message([] { parse_scenario(R"js({"params": {"n": 2, "m": 2}, "pairs": [["x", "y"]]})js"); },
                        ErrorCode::Parse)
              .find("x") != std::string::npos);
    CHECK(error_message([] { parse_scenario(R"js({"params": {"n": 2, "m": 2}, "t_grid": [0.5, 0.2]})js"); },
                        ErrorCode::Parse)
              .find("t_grid") != std::string::npos);
    CHECK(error_message([] { parse_scenario(R"js({"params": {"n": 2, "m": 2}, "tolerance": -1})js"); },
                        ErrorCode::Parse)
              .find("tolerance") != std::string::npos);
    CHECK(error_message([] { parse_scenario(R"js({"params": {"n": 2, "m": 3}})js"); }, ErrorCode::Domain).size() > 0);
}

TEST_CASE("scenario commands check expectations") {
    auto s = parse_scenario(kScenario);
    for (const auto& cmd : {"energy", "metric", "envelope", "geodesic", "capacity"}) {
        CAPTURE(cmd);
        auto r = run_command(cmd, s, {});
        CHECK(r.all_pass());
        CHECK(!r.rows().empty());
    }
    auto e = run_energy(s, {});
    bool found = false;
    for (const auto& row : e.rows())
        if (row.quantity == "e1(a)") {
            found = true;
            CHECK(row.status == Status::Pass);
        }
    CHECK(found);
    auto wrong = parse_scenario(R"js({"params": {"n": 2, "m": 2},
        "profiles": {"a": {"breakpoints": [-1], "slopes": [0, 1]}}, "expect": {"e1(a)": 1.0}})js");
    CHECK(!run_energy(wrong, {}).all_pass());
    error_message([&] { run_command("volume", s, {}); }, ErrorCode::Usage);
    auto bare = parse_scenario(R"js({"params": {"n": 2, "m": 2}})js");
    error_message([&] { run_metric(bare, {}); }, ErrorCode::Usage);
    error_message([&] { run_capacity(bare, {}); }, ErrorCode::Usage);
}

TEST_CASE("report serialization") {
    Report r("unit");
    r.compare("x, quoted \"name\"", "a=1", 2.0, 2.0, 1e-12, "identity");
    r.at_most("y", "", 3.0, 1.0, "bound");
    r.info("z", "", std::nan(""), "note");
    Table& t = r.table("trace", {"k", "value"});
    t.add({1.0, 0.5});
    CHECK(!r.all_pass());
    CHECK(r.failures() == 1);
    std::string csv = checks_to_csv(r);
    CHECK(csv.rfind("quantity,inputs,expected,actual,rel_err,provenance,pass,tolerance\n", 0) == 0);
    CHECK(csv.find("\"x, quoted \"\"name\"\"\"") != std::string::npos);
    CHECK(csv.find(",FAIL,") != std::string::npos);
    auto j = report_to_json(r);
    CHECK(j["all_pass"] == false);
    CHECK(j["checks"][2]["actual"].is_null());
    CHECK(j["tables"]["trace"]["rows"][0][1] == "0.5");
    CHECK_THROWS_AS(t.add(std::vector<double>{1.0}), Error);

    auto dir = std::filesystem::temp_directory_path() / "hessmetric_unit_report";
    std::filesystem::remove_all(dir);
    auto paths = write_report(r, dir.string(), Format::Csv);
    CHECK(paths.size() == 2);
    CHECK(std::filesystem::exists(dir / "unit_trace.csv"));
    CHECK(write_report(r, dir.string(), Format::Json).size() == 1);
    CHECK(parse_format("json") == Format::Json);
    CHECK_THROWS_AS(parse_format("xml"), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("reproduction ids") {
    CHECK(example_ids().size() == 5);
    auto r = reproduce("intro-norm", {});
    CHECK(r.all_pass());
    CHECK(r.rows().size() >= 40);
    error_message([] { reproduce("no-such-example", {}); }, ErrorCode::Usage);
}

TEST_CASE("random profiles respect the documented ranges") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        auto g = random_profile(rng, {2, 2});
        REQUIRE(g.size() >= 1);
        REQUIRE(g.size() <= 4);
        CHECK(g.is_bounded());
        CHECK(g.breakpoints().front() >= -3.0);
        CHECK(g.breakpoints().back() <= -0.1);
        for (std::size_t k = 1; k < g.size(); ++k) CHECK(g.breakpoints()[k] - g.breakpoints()[k - 1] >= 0.05);
    }
}
