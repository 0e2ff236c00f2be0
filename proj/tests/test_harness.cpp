#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <sstream>

#include "omegalab/harness.hpp"

using namespace omegalab;
using namespace omegalab::harness;
using spaces::CantorWord;
using spaces::DendritePoint;
using spaces::EuclidPoint;
using spaces::Point;

namespace {

json rotation_scenario(const char* turn) {
    return json::parse(R"({"id": "rot", "map": {"type": "rotation", "turn": ")" + std::string(turn) +
                       R"("}, "start": {"turn": "0"}, "N": 60, "B": 10, "eps_net": 0.1, "eps_comp": 0.1,
                          "checks": ["thm12", {"name": "cor13", "n": 3}]})");
}

const CheckResult& find_check(const VerificationReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return c;
    throw std::runtime_error("missing check " + name);
}

}  // namespace

TEST_CASE("point encodings round-trip") {
    const std::vector<Point> pts{
        DendritePoint::baseline(spaces::parse_rational("1/3")),
        DendritePoint::arc(6, spaces::parse_rational("1/7")),
        EuclidPoint::interval(spaces::parse_rational("2/5")),
        EuclidPoint::interval(0.3),
        EuclidPoint::circle_turn(spaces::parse_rational("1/3")),
        EuclidPoint::circle_angle(0.1),
        EuclidPoint::disk(0.1, -0.2),
        EuclidPoint::square(0.25, 0.75),
        EuclidPoint::ball({0.1, 0.2, 0.3}),
        CantorWord::parse("0110"),
        spaces::make_product({EuclidPoint::interval(spaces::parse_rational("1/5")), EuclidPoint::circle_turn(0)}),
    };
    for (const auto& p : pts) {
        const json j = point_to_json(p);
        REQUIRE(point_from_json(j) == p);
        REQUIRE(point_from_json(json::parse(j.dump())) == p);
    }
    CHECK(point_from_json(json::parse(R"({"arc": 4})")) == Point(DendritePoint::arc_tip(4)));
    CHECK(point_from_json(json::parse(R"({"cantor": "1", "depth": 4})")) == Point(CantorWord::parse("1000")));
    CHECK_THROWS_AS(point_from_json(json::parse(R"({"baseline": "3/2"})")), ConfigError);
    CHECK_THROWS_AS(point_from_json(json::parse(R"({"nowhere": 1})")), ConfigError);
    CHECK_THROWS_AS(point_from_json(json::parse(R"({"disk": [1, 2, 3]})")), ConfigError);
}

TEST_CASE("scenario validation") {
    CHECK_NOTHROW(scenario_from_json(rotation_scenario("1/3")));
    auto bad = rotation_scenario("1/3");
    bad["B"] = 60;
    CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
    bad = rotation_scenario("1/3");
    bad["eps_net"] = 0;
    CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
    bad = rotation_scenario("1/3");
    bad["checks"] = {"no_such_check"};
    CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
    bad = rotation_scenario("1/3");
    bad["start"] = {{"disk", {0.1, 0.1}}};
    CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
    bad = rotation_scenario("1/3");
    bad["map"] = {{"type", "logistic"}};
    CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
    bad = rotation_scenario("1/3");
    bad["map"]["integrator"] = {{"rel_tol", -1}};
    CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ConfigError);
}

TEST_CASE("rotation scenarios") {
    const auto r = run_scenario(scenario_from_json(rotation_scenario("1/3")));
    CHECK(r.all_passed());
    CHECK(r.component_count == 3);
    CHECK(r.cycle_length == 3);
    CHECK(r.classification == "TotallyPeriodic");

    const auto r26 = run_scenario(scenario_from_json(rotation_scenario("2/6")));
    CHECK(find_check(r26, "cor13").passed);
    CHECK(r26.component_count == 3);

    auto j = rotation_scenario("1/4");
    const auto r4 = run_scenario(scenario_from_json(j));
    CHECK_FALSE(find_check(r4, "cor13").passed);
    CHECK_FALSE(find_check(r4, "cor13").witnesses.empty());
}

TEST_CASE("two fixed points and the corrupted fixture") {
    const json base = json::parse(R"({"id": "pl", "map": {"type": "piecewise_linear",
        "breakpoints": [["0", "0"], ["1/4", "0"], ["1", "1"]]}, "start": {"interval": "1/2"},
        "N": 40, "B": 10, "eps_net": 0.01, "eps_comp": 0.01, "checks": ["thm12", "lemma23"]})");
    const auto good = run_scenario(scenario_from_json(base));
    CHECK(good.all_passed());
    CHECK(good.cycle_length == 1);

    auto corrupted = base;
    corrupted["net_override"] = json::parse(R"([{"interval": "0"}, {"interval": "1"}])");
    const auto bad = run_scenario(scenario_from_json(corrupted));
    CHECK_FALSE(bad.all_passed());
    for (const auto& c : bad.checks) {
        CHECK_FALSE(c.raw_passed);
        CHECK_FALSE(c.witnesses.empty());
    }

    // the same failures, declared as expected
    corrupted["checks"] = json::parse(R"([{"name": "thm12", "expect": "fail"}, {"name": "lemma23", "expect": "fail"}])");
    CHECK(run_scenario(scenario_from_json(corrupted)).all_passed());
}

TEST_CASE("stage errors are captured in the report") {
    auto j = rotation_scenario("1/3");
    j["target"] = json::parse(R"({"circle": {"center": [0, 0], "radius": 1}})");
    const auto r = run_scenario(scenario_from_json(j));
    REQUIRE(r.error.has_value());
    CHECK_FALSE(r.all_passed());
    CHECK(r.checks.size() == 2);

    auto d = json::parse(R"({"id": "d", "map": {"type": "disk_time_one", "integrator": {"max_step": 1, "min_step": 0.9,
        "rel_tol": 1e-14, "abs_tol": 1e-300}}, "start": {"disk": [0.5, 0]}, "N": 3, "B": 1, "checks": ["thm12", "monotone_r"]})");
    const auto failing = run_scenario(scenario_from_json(d));
    CHECK(failing.error.has_value());
    CHECK(failing.checks.size() == 2);
    for (const auto& c : failing.checks) {
        CHECK_FALSE(c.passed);
        CHECK_FALSE(c.witnesses.empty());
    }
}

TEST_CASE("disk scenario checks") {
    const auto r = run_scenario(scenario_from_json(json::parse(R"({"id": "disk", "map": {"type": "disk_time_one"},
        "start": {"disk": [0.5, 0]}, "N": 30, "B": 20, "eps_comp": 0.05, "n_max": 5,
        "checks": ["s1_fixed", "monotone_r", "theta_relation"]})")));
    CHECK(r.all_passed());
    for (const auto& c : r.checks) CHECK(c.passed);
}

TEST_CASE("reports are deterministic and complete") {
    const auto cfg = load_scenario(OMEGALAB_SCENARIO_DIR "/product_cycle_rotation.json");
    const auto a = report_to_json(run_scenario(cfg)).dump();
    const auto b = report_to_json(run_scenario(cfg)).dump();
    CHECK(a == b);
    const auto j = json::parse(a);
    CHECK(j["checks"].size() == cfg.checks.size());
    CHECK_FALSE(j.contains("wall_time"));
    CHECK(report_to_json(run_scenario(cfg), true).contains("wall_time"));
}

TEST_CASE("cloud dumps") {
    std::ostringstream os;
    write_cloud_csv(os, {EuclidPoint::disk(0.5, 0.25), DendritePoint::arc_tip(1)});
    CHECK(os.str() == "index,coord0,coord1\n0,0.5,0.25\n1,0.5,1\n");
}

TEST_CASE("bundled suite covers every check and passes") {
    const auto entries = run_suite(OMEGALAB_SCENARIO_DIR);
    REQUIRE_FALSE(entries.empty());
    std::set<std::string> used;
    for (const auto& e : entries) {
        INFO(e.file.string());
        REQUIRE_FALSE(e.config_error.has_value());
        CHECK(e.report->all_passed());
        for (const auto& c : e.report->checks) used.insert(c.name);
    }
    for (const auto& name : check_registry()) CHECK_MESSAGE(used.count(name) == 1, name);
    for (std::size_t i = 1; i < entries.size(); ++i) CHECK(entries[i - 1].file < entries[i].file);
}
