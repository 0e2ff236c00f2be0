// Acceptance criteria 1-9: one PASS/FAIL line each; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "omegalab/dendrite.hpp"
#include "omegalab/flows.hpp"
#include "omegalab/harness.hpp"

using namespace omegalab;
using dynamics::DynamicalMap;
using harness::json;
using spaces::DendritePoint;
using spaces::EuclidPoint;
using spaces::Point;
using spaces::Rational;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream note;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            if (ok) note << "failed: ";
            else note << "; ";
            note << what;
            ok = false;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

harness::ScenarioConfig scenario(const std::string& text) { return harness::scenario_from_json(json::parse(text)); }

void report_check(Outcome& out, const harness::CheckResult& c) {
    out.require(c.passed, c.name + " (" + c.detail + ")");
}

// Fixture for criteria 2-4; n is the power whose fixed points should hold the estimate.
struct Fixture {
    std::string label;
    DynamicalMap map;
    Point start;
    std::size_t n;
};

std::vector<Fixture> cycle_fixtures() {
    std::vector<Fixture> fx;
    for (long long q = 1; q <= 12; ++q) {
        for (long long p = 0; p < q; ++p) {
            const auto g = std::gcd(p, q);
            if (g != 1 && !(p == 0 && q == 1)) continue;
            fx.push_back({"rotation(" + std::to_string(p) + "/" + std::to_string(q) + ")",
                          DynamicalMap::rotation(Rational(p, q)), EuclidPoint::circle_turn(Rational(1, 7)),
                          static_cast<std::size_t>(q)});
        }
    }
    const auto q = spaces::parse_rational;
    const auto pl = DynamicalMap::piecewise_linear(
        {{{q("0"), q("0")}, {q("1/5"), q("1/2")}, {q("1/2"), q("4/5")}, {q("4/5"), q("1/5")}, {q("1"), q("1")}}});
    fx.push_back({"pl-three-cycle", pl, EuclidPoint::interval(q("1/5")), 3});
    fx.push_back({"pl-three-cycle n=6", pl, EuclidPoint::interval(q("1/5")), 6});
    fx.push_back({"pl-two-fixed", DynamicalMap::piecewise_linear({{{q("0"), q("0")}, {q("1/4"), q("0")}, {q("1"), q("1")}}}),
                  EuclidPoint::interval(q("1/2")), 1});
    fx.push_back({"three-cycle x half-turn", DynamicalMap::product({pl, DynamicalMap::rotation(q("1/2"))}),
                  spaces::make_product({EuclidPoint::interval(q("1/5")), EuclidPoint::circle_turn(0)}), 6});
    fx.push_back({"third-turn x quarter-turn",
                  DynamicalMap::product({DynamicalMap::rotation(q("1/3")), DynamicalMap::rotation(q("1/4"))}),
                  spaces::make_product({EuclidPoint::circle_turn(0), EuclidPoint::circle_turn(q("1/8"))}), 12});
    return fx;
}

struct FixtureRun {
    omega::OmegaEstimate est;
    omega::ComponentPartition part;
    omega::InducedMap im;
};

FixtureRun run_fixture(const Fixture& f) {
    const auto o = dynamics::orbit(f.map, f.start, 200);
    auto est = omega::omega_estimate(o, 100, 0.01);
    auto part = omega::components(est.net, 0.01, est.space);
    auto im = omega::induced_map(f.map, part);
    return {std::move(est), std::move(part), std::move(im)};
}

// ---------------------------------------------------------------------------

Outcome criterion_dendrite() {
    Outcome out;
    const auto t0 = Clock::now();
    const auto cfg = scenario(R"({"id": "dendrite", "map": {"type": "dendrite_f0"}, "start": {"arc": 1},
        "N": 4093, "B": 511, "eps_net": 0.004, "eps_comp": 0.01})");
    const auto o = dynamics::orbit(cfg.map, cfg.start, cfg.steps);
    const auto est = omega::omega_estimate(o, cfg.burn_in, cfg.eps_net);
    const auto check = harness::check_dendrite_counterexample(cfg, est, json::object());
    const double elapsed = seconds_since(t0);
    report_check(out, check);

    // independent oracle on the same orbit: exact chain, heights, baseline gaps
    out.require(o.points.size() == 4094, "orbit length");
    for (std::size_t j = 0; j + 1 < o.points.size(); ++j) {
        if (!(cfg.map(o.points[j]) == o.points[j + 1]) || !(o.points[j] == Point(DendritePoint::arc_tip(j + 1)))) {
            out.require(false, "chain breaks at k = " + std::to_string(j + 1));
            break;
        }
    }
    std::vector<Rational> xs{0, 1};
    Rational max_h = 0;
    for (const auto& p : est.tail) {
        const auto& d = std::get<DendritePoint>(p);
        const auto lvl = spaces::level_of(d.arc_index());
        out.require(lvl >= 10 && lvl <= 12, "tail outside levels 10-12");
        max_h = std::max(max_h, Rational(d.height()));
        xs.push_back(d.abscissa());
    }
    std::sort(xs.begin(), xs.end());
    Rational max_gap = 0;
    for (std::size_t i = 1; i < xs.size(); ++i) max_gap = std::max(max_gap, Rational(xs[i] - xs[i - 1]));
    out.require(max_h <= Rational(1, 10), "tail height above 1/10");
    out.require(max_gap <= Rational(1, 512), "baseline gap above 2^-9");
    const double h = check.metrics.value("hausdorff_to_baseline", 1.0);
    out.require(h <= 0.15, "Hausdorff bound");
    out.require(elapsed <= 1.0, "runtime " + std::to_string(elapsed) + " s > 1 s");
    out.note << (out.ok ? "" : " | ") << "4094 exact steps, Hausdorff " << h << ", max height "
             << spaces::to_string(max_h) << ", max gap " << spaces::to_string(max_gap) << ", net sizes "
             << check.metrics.value("net_sizes", json::array()).dump() << ", " << elapsed << " s";
    return out;
}

Outcome criterion_thm12() {
    Outcome out;
    const auto t0 = Clock::now();
    std::size_t count = 0;
    for (const auto& f : cycle_fixtures()) {
        const auto run = run_fixture(f);
        const auto res = harness::check_thm12(run.est, run.part, run.im);
        out.require(res.passed, f.label + ": " + res.detail);
        out.require(run.part.count <= 12 && run.est.space.exact(), f.label + ": not exhaustive and exact");
        ++count;
    }
    const double elapsed = seconds_since(t0);
    out.require(elapsed <= 1.0, "runtime " + std::to_string(elapsed) + " s > 1 s");
    out.note << (out.ok ? "" : " | ") << count << " fixtures single-cycle, " << elapsed << " s";
    return out;
}

Outcome criterion_cor13() {
    Outcome out;
    std::size_t count = 0;
    bool non_prime = false;
    for (const auto& f : cycle_fixtures()) {
        const auto run = run_fixture(f);
        const auto res = harness::check_cor13(f.map, run.est, run.part, f.n, 0.0);
        out.require(res.passed, f.label + ": " + res.detail);
        if (f.n == 6 && run.part.count == 3) non_prime = true;
        ++count;
    }
    out.require(non_prime, "no 3 | 6 case");
    out.note << (out.ok ? "" : " | ") << count << " fixtures certified in Fix(f^n) with count | n, incl. 3 | 6";
    return out;
}

Outcome criterion_lemma23() {
    Outcome out;
    std::size_t count = 0;
    for (const auto& f : cycle_fixtures()) {
        const auto run = run_fixture(f);
        out.require(run.est.net.size() <= 12, f.label + ": subset search not exhaustive");
        out.require(omega::sharkovsky_check(run.est.net, f.map), f.label + ": subset condition fails");
        ++count;
    }
    const auto corrupted = scenario(R"({"id": "corrupted", "map": {"type": "piecewise_linear",
        "breakpoints": [["0", "0"], ["1/4", "0"], ["1", "1"]]}, "start": {"interval": "1/2"}, "N": 40, "B": 10,
        "net_override": [{"interval": "0"}, {"interval": "1"}], "checks": ["lemma23", "thm12"]})");
    const auto r = harness::run_scenario(corrupted);
    out.require(!omega::sharkovsky_check(*corrupted.net_override, corrupted.map), "corrupted fixture accepted");
    for (const auto& c : r.checks) out.require(!c.raw_passed && !c.witnesses.empty(), c.name + " on corrupted fixture");
    out.note << (out.ok ? "" : " | ") << "true on " << count << " cycle fixtures, false on two fixed points";
    return out;
}

Outcome criterion_disk() {
    Outcome out;
    const auto t0 = Clock::now();
    const auto cfg = scenario(R"({"id": "disk", "map": {"type": "disk_time_one",
        "integrator": {"rel_tol": 1e-10, "abs_tol": 1e-10}}, "start": {"disk": [0.5, 0]}, "N": 1, "B": 0})");
    for (const auto& c : {harness::check_s1_fixed(cfg, {}), harness::check_monotone_r(cfg, {}),
                          harness::check_theta_relation(cfg, {}), harness::check_disk_coverage(cfg, {})}) {
        report_check(out, c);
        if (c.name == "theta_relation") out.note << "drift " << c.metrics["max_drift_per_unit_time"] << "/t, ";
        if (c.name == "disk_coverage") {
            out.note << "span " << c.metrics["angular_span"] << ", gap " << c.metrics["max_gap"] << ", ";
        }
    }

    // fixed-step RK4 reference for one unit of time from r = 0.5
    double r = 0.5, theta = 0.0;
    const double h = 1e-5;
    auto rates = [](double x) {
        const double om = (1 - x) * (1 + x);
        const double phi = std::exp(-1 / om);
        return std::pair{x * x * phi, 2 * x * x * x * phi / (om * om)};
    };
    for (int i = 0; i < 100000; ++i) {
        const auto k1 = rates(r), k2 = rates(r + 0.5 * h * k1.first), k3 = rates(r + 0.5 * h * k2.first),
                   k4 = rates(r + h * k3.first);
        r += h / 6 * (k1.first + 2 * k2.first + 2 * k3.first + k4.first);
        theta += h / 6 * (k1.second + 2 * k2.second + 2 * k3.second + k4.second);
    }
    const auto s = flows::flow({0.5, 0.0, 0.0}, 1.0, flows::IntegratorConfig{});
    out.require(std::fabs(s.r - r) <= 1e-9 && std::fabs(s.theta - theta) <= 1e-9, "flow disagrees with RK4 reference");

    EuclidPoint p = EuclidPoint::disk(0.5, 0.0);
    for (int k = 0; k < 500; ++k) p = flows::disk_time_one(p);
    flows::RadialScheduleOptions opt;
    opt.t_end = 500;
    const double r500 = flows::radial_schedule(0.5, 0.0, opt).back().r;
    out.require(p.norm() >= 0.93, "r after 500 iterates below 0.93");
    out.require(std::fabs(p.norm() - r500) <= 1e-6, "iterates disagree with long-horizon radial run");

    const double elapsed = seconds_since(t0);
    out.require(elapsed <= 30.0, "runtime " + std::to_string(elapsed) + " s > 30 s");
    out.note << "r(500) = " << p.norm() << ", " << elapsed << " s";
    return out;
}

Outcome criterion_suspension() {
    Outcome out;
    const auto cfg = scenario(R"({"id": "ball", "map": {"type": "ball", "dimension": 3},
        "start": {"ball": [0, 0, 0]}, "N": 1, "B": 0})");
    const auto c = harness::check_suspension(cfg, json{{"slices", {0.0, 0.5, -0.5, 0.8, -0.8, 1.0, -1.0}}});
    report_check(out, c);
    out.note << (out.ok ? "" : " | ") << "slice error " << c.metrics["max_slice_error"] << ", "
             << c.metrics["fixed_points_checked"] << " pole/sphere points fixed";
    return out;
}

Outcome criterion_square() {
    Outcome out;
    const auto cfg = scenario(R"({"id": "square", "map": {"type": "square_extension", "center": [0.5, 0.5],
        "radius": 0.4}, "start": {"square": [0.6, 0.55]}, "N": 1, "B": 0})");
    const auto c = harness::check_square_extension(cfg, {});
    report_check(out, c);
    out.note << (out.ok ? "" : " | ") << "inner displacement " << c.metrics["inner_displacement"].dump()
             << ", distance to boundary " << c.metrics["max_distance_to_boundary"] << ", displacement on omega "
             << c.metrics["max_displacement_on_omega"];
    return out;
}

Outcome criterion_product() {
    Outcome out;
    const auto cfg = scenario(R"({"id": "product", "map": {"type": "product", "factors": [
        {"type": "piecewise_linear", "breakpoints": [["0", "0"], ["1/5", "1/2"], ["1/2", "4/5"], ["4/5", "1/5"], ["1", "1"]]},
        {"type": "rotation", "turn": "1/2"}]}, "start": {"product": [{"interval": "1/5"}, {"turn": "0"}]},
        "N": 120, "B": 60, "eps_net": 0.01, "eps_comp": 0.01})");
    const auto pipe = harness::run_pipeline(cfg);
    const auto c = harness::check_prop18(cfg, pipe.estimate, json{{"n", 6}, {"max_net", 6}});
    report_check(out, c);
    out.require(pipe.classification.kind == omega::PeriodicClass::totally_periodic, "product not totally periodic");
    out.note << (out.ok ? "" : " | ") << pipe.estimate.net.size() << " net points, periods "
             << c.metrics.value("periods", json::array()).dump();
    return out;
}

Outcome criterion_odometer() {
    Outcome out;
    const auto t0 = Clock::now();
    const auto cfg = scenario(R"({"id": "odometer", "map": {"type": "odometer", "depth": 64},
        "start": {"cantor": "0", "depth": 64}, "N": 2000, "B": 1000, "n_max": 10000})");
    const auto pipe = harness::run_pipeline(cfg);
    const auto c = harness::check_cantor_negative(cfg, pipe.classification, json{{"n_max", 10000}});
    const double elapsed = seconds_since(t0);
    report_check(out, c);
    out.require(elapsed <= 1.0, "runtime " + std::to_string(elapsed) + " s > 1 s");
    out.note << (out.ok ? "" : " | ") << omega::class_name(pipe.classification.kind) << ", " << elapsed << " s";
    return out;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"dendrite counterexample", criterion_dendrite},
        {"components form one cycle", criterion_thm12},
        {"component count divides n", criterion_cor13},
        {"subset condition", criterion_lemma23},
        {"disk flow", criterion_disk},
        {"ball suspension", criterion_suspension},
        {"square extension", criterion_square},
        {"product map", criterion_product},
        {"odometer negative control", criterion_odometer},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.ok = false;
            o.note << "exception: " << e.what();
        }
        std::printf("%s criterion %zu (%s): %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.note.str().c_str());
        if (!o.ok) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
