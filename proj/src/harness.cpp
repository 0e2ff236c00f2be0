#include "omegalab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "omegalab/dendrite.hpp"
#include "omegalab/flows.hpp"

namespace omegalab::harness {

using dynamics::DynamicalMap;
using spaces::DendritePoint;
using spaces::EuclidPoint;
using spaces::EuclidTag;
using spaces::Point;
using spaces::SpaceKind;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CheckResult make_result(std::string name) {
    CheckResult r;
    r.name = std::move(name);
    return r;
}

CheckResult& conclude(CheckResult& r, bool ok, std::string detail) {
    r.raw_passed = ok;
    r.passed = ok;
    r.detail = std::move(detail);
    return r;
}

template <class T>
T param(const json& params, const char* key, T fallback) {
    if (!params.is_object() || !params.contains(key)) return fallback;
    try {
        return params.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("check parameter '") + key + "': " + e.what());
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

flows::IntegratorConfig scenario_integrator(const ScenarioConfig& cfg) {
    return integrator_from_json(cfg.map_spec.value("integrator", json()));
}

EuclidPoint disk_point(double x, double y) { return EuclidPoint{{x, y}, EuclidTag::disk, std::nullopt}; }

/// Largest gap between consecutive angles on the circle.
double max_circular_gap(std::vector<double> angles) {
    if (angles.empty()) return kTwoPi;
    for (double& a : angles) {
        a = std::fmod(a, kTwoPi);
        if (a < 0) a += kTwoPi;
    }
    std::sort(angles.begin(), angles.end());
    double gap = kTwoPi - angles.back() + angles.front();
    for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
    return gap;
}

}  // namespace

bool VerificationReport::all_passed() const {
    if (error) return false;
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

// ---------------------------------------------------------------------------

Pipeline run_pipeline(const ScenarioConfig& cfg) {
    dynamics::Orbit orbit = dynamics::orbit(cfg.map, cfg.start, cfg.steps);
    omega::OmegaEstimate est;
    if (cfg.net_override) {
        est.source = "net_override";
        est.space = cfg.map.space();
        est.tail = omega::distinct_points(*cfg.net_override);
        est.net = est.tail;
        est.epsilon = cfg.eps_net;
    } else {
        est = omega::omega_estimate(orbit, cfg.burn_in, cfg.eps_net);
    }
    omega::ComponentPartition part = omega::components(est.net, cfg.eps_comp, est.space);
    omega::InducedMap im = omega::induced_map(cfg.map, part, cfg.slack);
    omega::CycleReport cycle = omega::verify_cycle(im);
    omega::Classification cls = omega::classify_totally_periodic(cfg.map, est, cfg.n_max, cfg.tol);
    return Pipeline{std::move(orbit), std::move(est), std::move(part), std::move(im), std::move(cycle), std::move(cls)};
}

// ---------------------------------------------------------------------------

CheckResult check_thm12(const omega::OmegaEstimate& est, const omega::ComponentPartition& part,
                        const omega::InducedMap& im) {
    CheckResult r = make_result("thm12");
    const omega::CycleReport cycle = omega::verify_cycle(im);
    r.metrics = {{"components", part.count}, {"cycle_length", cycle.length}, {"well_defined", im.well_defined}};
    if (part.count == 0 || part.count > est.net.size()) return conclude(r, false, "component count out of range");
    if (!im.well_defined) {
        for (const auto& s : im.straddles) r.witnesses.push_back(s.point);
        if (r.witnesses.empty()) r.witnesses.push_back(part.points.front());
        const std::string why = im.straddles.empty() ? "a component has no image" : im.straddles.front().reason;
        return conclude(r, false, "induced map not well defined: " + why);
    }
    if (!cycle.single_cycle || cycle.length != part.count) {
        // one representative per component
        std::vector<bool> seen(part.count, false);
        for (std::size_t i = 0; i < part.points.size(); ++i) {
            if (!seen[part.labels[i]]) {
                seen[part.labels[i]] = true;
                r.witnesses.push_back(part.points[i]);
            }
        }
        return conclude(r, false, "components do not form a single periodic cycle: " + cycle.witness);
    }
    return conclude(r, true,
                    std::to_string(part.count) + " components forming one cycle of length " +
                        std::to_string(cycle.length));
}

CheckResult check_cor13(const DynamicalMap& m, const omega::OmegaEstimate& est, const omega::ComponentPartition& part,
                        std::size_t n, double tol) {
    CheckResult r = make_result("cor13");
    r.metrics = {{"n", n}, {"components", part.count}};
    if (n == 0) return conclude(r, false, "n must be positive");
    for (const Point& p : est.net) {
        const Point q = dynamics::iterate(m, p, n);
        const bool exact = m.space().exact() && dynamics::is_exact(p);
        const bool fixed = exact ? spaces::same_point(q, p) : spaces::dist(q, p, m.space()) <= tol;
        if (!fixed) r.witnesses.push_back(p);
    }
    if (!r.witnesses.empty()) {
        return conclude(r, false, std::to_string(r.witnesses.size()) + " net points not certified in Fix(f^" +
                                      std::to_string(n) + ")");
    }
    if (n % part.count != 0) {
        r.witnesses.push_back(part.points.front());
        return conclude(r, false,
                        "component count " + std::to_string(part.count) + " does not divide " + std::to_string(n));
    }
    return conclude(r, true, std::to_string(part.count) + " components divide n = " + std::to_string(n));
}

CheckResult check_lemma23(const DynamicalMap& m, const omega::OmegaEstimate& est) {
    CheckResult r = make_result("lemma23");
    const omega::Cloud L = omega::distinct_points(est.net);
    r.metrics = {{"set_size", L.size()}, {"exhaustive", L.size() <= 12}};
    try {
        const auto witness = omega::sharkovsky_witness(L, m);
        if (witness) {
            for (std::size_t i : *witness) r.witnesses.push_back(L[i]);
            return conclude(r, false, "a proper subset F misses f(L \\ F)");
        }
    } catch (const std::invalid_argument& e) {
        r.witnesses.push_back(L.front());
        return conclude(r, false, e.what());
    }
    return conclude(r, true, "every nonempty proper subset F meets f(L \\ F)");
}

CheckResult check_dendrite_counterexample(const ScenarioConfig& cfg, const omega::OmegaEstimate& est,
                                          const json& params) {
    CheckResult r = make_result("dendrite_counterexample");
    const double bound = param(params, "bound", 0.15);
    const auto sweep = param(params, "sweep", std::vector<std::size_t>{1023, 2047, 4095});

    if (cfg.map.space().kind != SpaceKind::dendrite || !(cfg.start == Point(DendritePoint::arc_tip(1)))) {
        r.witnesses.push_back(cfg.start);
        return conclude(r, false, "needs the dendrite map started at B_1");
    }

    // B_k -> B_{k+1}, exactly
    const auto chain = dendrite::f0_orbit(DendritePoint::arc_tip(1), cfg.steps);
    for (std::size_t j = 0; j < chain.size(); ++j) {
        if (!(chain[j] == DendritePoint::arc_tip(j + 1))) {
            r.witnesses.emplace_back(chain[j]);
            return conclude(r, false, "orbit leaves the chain of arc tips at step " + std::to_string(j));
        }
    }

    double max_height = 0.0;
    std::vector<DendritePoint> snapped;
    for (const Point& p : est.tail) {
        const auto& d = std::get<DendritePoint>(p);
        max_height = std::max(max_height, spaces::to_double(d.height()));
        const DendritePoint s = dendrite::snap_to_baseline(d);
        if (!(dendrite::f0_eval(s) == s)) {
            r.witnesses.emplace_back(s);
            return conclude(r, false, "snapped tail point is not fixed");
        }
        snapped.push_back(s);
    }

    const double h = omega::hausdorff(est.tail, omega::Segment{{0.0, 0.0}, {1.0, 0.0}}, cfg.sampling, est.space);

    std::vector<std::size_t> net_sizes;
    for (std::size_t n : sweep) {
        if (n <= cfg.burn_in) throw ConfigError("dendrite sweep length must exceed B");
        const auto o = dynamics::orbit(cfg.map, cfg.start, n);
        net_sizes.push_back(omega::omega_estimate(o, cfg.burn_in, cfg.eps_net).net.size());
    }
    bool growing = true;
    for (std::size_t i = 1; i < net_sizes.size(); ++i) growing = growing && net_sizes[i] > net_sizes[i - 1];

    omega::OmegaEstimate snapped_est = est;
    snapped_est.net.clear();
    for (const auto& s : snapped) snapped_est.net.emplace_back(s);
    snapped_est.net = omega::distinct_points(snapped_est.net);
    const auto cls = omega::classify_totally_periodic(cfg.map, snapped_est, 1, 0.0);

    r.metrics = {{"chain_length", chain.size()},
                 {"max_tail_height", max_height},
                 {"hausdorff_to_baseline", h},
                 {"bound", bound},
                 {"net_sizes", net_sizes},
                 {"snapped_class", omega::class_name(cls.kind)},
                 {"snapped_max_period", cls.max_period}};

    if (h > bound) {
        r.witnesses.push_back(est.tail.front());
        return conclude(r, false, "Hausdorff distance " + fmt(h) + " exceeds " + fmt(bound));
    }
    if (!growing) {
        r.witnesses.push_back(est.net.back());
        return conclude(r, false, "net size does not grow with the horizon");
    }
    if (cls.kind != omega::PeriodicClass::totally_periodic || cls.max_period != 1) {
        r.witnesses.push_back(cls.witness.value_or(est.tail.front()));
        return conclude(r, false, "snapped tail is not certified as fixed points");
    }
    return conclude(r, true,
                    "exact B-chain of length " + std::to_string(chain.size()) + ", Hausdorff " + fmt(h) +
                        " to the baseline, snapped tail fixed, net sizes growing");
}

CheckResult check_disk_coverage(const ScenarioConfig& cfg, const json& params) {
    CheckResult r = make_result("disk_coverage");
    const double min_radius = param(params, "min_radius", 0.99);
    const double span_target = param(params, "span", 40.0 * std::numbers::pi);
    const double max_gap = param(params, "max_gap", 0.1);
    const double max_dtheta = param(params, "max_dtheta", 0.05);

    double r0 = param(params, "r0", 0.5);
    double theta0 = 1.0 / (1.0 - r0 * r0);
    if (const auto* e = std::get_if<EuclidPoint>(&cfg.start); e && e->tag == EuclidTag::disk) {
        r0 = e->norm();
        theta0 = std::atan2(e->coords[1], e->coords[0]);
    }
    if (!(r0 > 0.0 && r0 < 1.0)) {
        r.witnesses.push_back(cfg.start);
        return conclude(r, false, "start radius must be in (0,1)");
    }

    flows::RadialScheduleOptions opt;
    opt.cfg = scenario_integrator(cfg);
    opt.cfg.max_step = std::numeric_limits<double>::infinity();
    opt.max_dtheta = max_dtheta;
    opt.stop_radius = min_radius;
    opt.stop_theta_gain = span_target + 2.0 * max_dtheta;
    const auto samples = flows::radial_schedule(r0, theta0, opt);

    std::vector<double> angles;
    double max_rate = 0.0;
    double last_t = 0.0;
    for (const auto& s : samples) {
        if (s.r < min_radius) continue;
        angles.push_back(s.theta);
        const auto rates = flows::radial_derivatives({s.r, s.theta, s.t});
        max_rate = std::max({max_rate, rates.dtheta, rates.dr});
        last_t = s.t;
    }
    const double span = angles.empty() ? 0.0 : angles.back() - angles.front();
    const double gap = max_circular_gap(angles);
    r.metrics = {{"samples", samples.size()},
                 {"samples_above_radius", angles.size()},
                 {"angular_span", span},
                 {"max_gap", gap},
                 {"final_time", last_t},
                 {"final_radius", samples.back().r},
                 {"max_rate_above_radius", max_rate}};

    const EuclidPoint last = flows::polar_point(samples.back().r, samples.back().theta);
    if (span < span_target) {
        r.witnesses.emplace_back(last);
        return conclude(r, false, "angular span " + fmt(span) + " below " + fmt(span_target));
    }
    if (gap > max_gap) {
        r.witnesses.emplace_back(last);
        return conclude(r, false, "angular gap " + fmt(gap) + " exceeds " + fmt(max_gap));
    }
    // a sample at time t is within max_rate of the time-one iterate at floor(t)
    if (max_rate > 1e-9) {
        r.witnesses.emplace_back(last);
        return conclude(r, false, "flow too fast near the circle for samples to stand in for iterates");
    }
    return conclude(r, true, "span " + fmt(span) + " rad with max gap " + fmt(gap) + " above r = " + fmt(min_radius));
}

CheckResult check_s1_fixed(const ScenarioConfig& cfg, const json& params) {
    CheckResult r = make_result("s1_fixed");
    const auto samples = param<std::size_t>(params, "samples", 256);
    const auto icfg = scenario_integrator(cfg);
    std::vector<EuclidPoint> pts{disk_point(0, 0), disk_point(1, 0), disk_point(0, 1), disk_point(-1, 0),
                                 disk_point(0, -1)};
    for (std::size_t k = 0; k < samples; ++k) {
        const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(samples);
        EuclidPoint p = disk_point(std::cos(a), std::sin(a));
        if (p.norm() > 1.0) continue;  // keep to points inside the closed disk in floating point
        pts.push_back(p);
    }
    for (const auto& p : pts) {
        if (!(flows::disk_time_one(p, icfg) == p)) r.witnesses.emplace_back(p);
    }
    r.metrics = {{"points", pts.size()}};
    if (!r.witnesses.empty()) return conclude(r, false, "points of S^1 or 0 moved");
    return conclude(r, true, std::to_string(pts.size()) + " points of S^1 and 0 fixed bit for bit");
}

CheckResult check_monotone_r(const ScenarioConfig& cfg, const json& params) {
    CheckResult r = make_result("monotone_r");
    const auto count = param<std::size_t>(params, "count", 100);
    const auto seed = param<std::uint64_t>(params, "seed", 20261016);
    const double r_lo = param(params, "r_min", 0.01);
    const double r_hi = param(params, "r_max", 0.95);
    const auto icfg = scenario_integrator(cfg);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(r_lo, r_hi);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    double min_gain = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) {
        const double r0 = radius(rng);
        const double a = angle(rng);
        const EuclidPoint p = disk_point(r0 * std::cos(a), r0 * std::sin(a));
        const EuclidPoint q = flows::disk_time_one(p, icfg);
        const double gain = q.norm() - p.norm();
        min_gain = std::min(min_gain, gain);
        if (!(gain > 0.0)) r.witnesses.emplace_back(p);
    }
    r.metrics = {{"starts", count}, {"min_radius_gain", min_gain}};
    if (!r.witnesses.empty()) return conclude(r, false, "radius failed to increase");
    return conclude(r, true, "radius increased from all " + std::to_string(count) + " starts");
}

CheckResult check_theta_relation(const ScenarioConfig& cfg, const json& params) {
    CheckResult r = make_result("theta_relation");
    const auto starts = param(params, "starts", std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9});
    const double r_max = param(params, "r_max", 0.95);
    const double limit = param(params, "limit", 1e-6);
    const auto max_time = param<std::size_t>(params, "max_time", 600);
    const auto icfg = scenario_integrator(cfg);

    double worst = 0.0;
    std::size_t units = 0;
    for (double r0 : starts) {
        flows::RadialState s{r0, 0.0, 0.0};
        const double base = 1.0 / (1.0 - r0 * r0);
        for (std::size_t k = 1; k <= max_time; ++k) {
            s = flows::flow(s, 1.0, icfg);
            if (s.r > r_max) break;
            const double predicted = 1.0 / (1.0 - s.r * s.r) - base;
            const double drift = std::fabs(s.theta - predicted) / static_cast<double>(k);
            ++units;
            if (drift > worst) worst = drift;
            if (drift > limit) {
                r.witnesses.emplace_back(flows::polar_point(s.r, s.theta));
                break;
            }
        }
    }
    r.metrics = {{"max_drift_per_unit_time", worst}, {"limit", limit}, {"unit_steps", units}};
    if (!r.witnesses.empty()) return conclude(r, false, "theta drifted from 1/(1-r^2) by " + fmt(worst) + " per unit time");
    return conclude(r, true, "max drift " + fmt(worst) + " per unit time");
}

CheckResult check_suspension(const ScenarioConfig& cfg, const json& params) {
    CheckResult r = make_result("suspension");
    const auto dim = param<std::size_t>(params, "dimension", 3);
    const auto slices = param(params, "slices", std::vector<double>{0.0, 0.5, -0.5, 0.8, -0.8, 1.0, -1.0});
    const auto k_max = param<std::size_t>(params, "k_max", 50);
    const double limit = param(params, "limit", 1e-7);
    const auto sphere_samples = param<std::size_t>(params, "sphere_samples", 24);
    const auto icfg = scenario_integrator(cfg);
    if (dim < 3) throw ConfigError("suspension check needs dimension >= 3");

    const flows::BallMap upper = flows::ball_map(dim, icfg);
    const flows::BallMap lower = flows::ball_map(dim - 1, icfg);
    auto lower_point = [&](std::vector<double> c) {
        return EuclidPoint{std::move(c), dim - 1 == 2 ? EuclidTag::disk : EuclidTag::ball, std::nullopt};
    };

    std::vector<double> u(dim - 1, 0.0);
    u[0] = 0.5;
    u[1] = 0.2;

    double worst = 0.0;
    for (double c : slices) {
        const double s = std::sqrt((1.0 - c) * (1.0 + c));
        std::vector<double> xc;
        for (double v : u) xc.push_back(s * v);
        xc.push_back(c);
        EuclidPoint x{xc, EuclidTag::ball, std::nullopt};
        EuclidPoint y = lower_point(u);
        for (std::size_t k = 1; k <= k_max; ++k) {
            x = upper(x);
            y = lower(y);
            double err = std::fabs(x.coords.back() - c);
            for (std::size_t i = 0; i + 1 < dim; ++i) err = std::max(err, std::fabs(x.coords[i] - s * y.coords[i]));
            worst = std::max(worst, err);
            if (err > limit) {
                r.witnesses.emplace_back(x);
                break;
            }
        }
    }

    // poles and sphere points are fixed bit for bit
    std::vector<EuclidPoint> fixed_pts;
    std::vector<double> pole(dim, 0.0);
    pole.back() = 1.0;
    fixed_pts.push_back({pole, EuclidTag::ball, std::nullopt});
    pole.back() = -1.0;
    fixed_pts.push_back({pole, EuclidTag::ball, std::nullopt});
    fixed_pts.push_back({std::vector<double>(dim, 0.0), EuclidTag::ball, std::nullopt});
    for (std::size_t i = 1; i < sphere_samples; ++i) {
        const double polar = std::numbers::pi * static_cast<double>(i) / static_cast<double>(sphere_samples);
        for (std::size_t j = 0; j < sphere_samples; ++j) {
            const double az = kTwoPi * static_cast<double>(j) / static_cast<double>(sphere_samples);
            std::vector<double> c(dim, 0.0);
            c[0] = std::sin(polar) * std::cos(az);
            c[1] = std::sin(polar) * std::sin(az);
            c.back() = std::cos(polar);
            fixed_pts.push_back({c, EuclidTag::ball, std::nullopt});
        }
    }
    std::size_t moved = 0;
    for (const auto& p : fixed_pts) {
        if (!(upper(p) == p)) {
            ++moved;
            r.witnesses.emplace_back(p);
        }
    }
    r.metrics = {{"max_slice_error", worst}, {"limit", limit}, {"fixed_points_checked", fixed_pts.size()},
                 {"fixed_points_moved", moved}};
    if (!r.witnesses.empty()) return conclude(r, false, "slice equivariance or sphere fixity failed");
    return conclude(r, true, "slice error " + fmt(worst) + ", poles, origin and sphere fixed");
}

CheckResult check_square_extension(const ScenarioConfig& cfg, const json& params) {
    CheckResult r = make_result("square_extension");
    if (cfg.map.space().kind != SpaceKind::square) {
        r.witnesses.push_back(cfg.start);
        return conclude(r, false, "needs a square_extension map");
    }
    const auto center_v = cfg.map_spec.value("center", std::vector<double>{0.5, 0.5});
    const double radius = cfg.map_spec.value("radius", 0.4);
    const double cx = center_v.at(0);
    const double cy = center_v.at(1);
    const auto grid = param<std::size_t>(params, "grid", 41);
    const auto deltas = param(params, "deltas", std::vector<double>{1e-2, 1e-3, 1e-4});
    const auto angles = param<std::size_t>(params, "angles", 64);
    const double horizon = param(params, "horizon", 1e19);
    const auto tail_steps = param<std::size_t>(params, "tail", 100);
    const double band = param(params, "band", 0.05);
    const double fixed_tol = param(params, "fixed_tol", 1e-9);
    const auto& f = cfg.map;
    auto sq = [](double x, double y) { return EuclidPoint{{x, y}, EuclidTag::square, std::nullopt}; };
    auto displacement = [&](const EuclidPoint& p) {
        const auto q = std::get<EuclidPoint>(f(p));
        return std::hypot(q.coords[0] - p.coords[0], q.coords[1] - p.coords[1]);
    };

    // identity off V, injective on the grid
    std::vector<EuclidPoint> images;
    for (std::size_t i = 0; i < grid; ++i) {
        for (std::size_t j = 0; j < grid; ++j) {
            const EuclidPoint p = sq(static_cast<double>(i) / (grid - 1), static_cast<double>(j) / (grid - 1));
            const auto q = std::get<EuclidPoint>(f(p));
            if (std::hypot(p.coords[0] - cx, p.coords[1] - cy) >= radius && !(q == p)) r.witnesses.emplace_back(p);
            images.push_back(q);
        }
    }
    if (!r.witnesses.empty()) return conclude(r, false, "points outside V moved");
    std::sort(images.begin(), images.end(), [](const EuclidPoint& a, const EuclidPoint& b) { return a.coords < b.coords; });
    for (std::size_t i = 1; i < images.size(); ++i) {
        if (images[i].coords == images[i - 1].coords) {
            r.witnesses.emplace_back(images[i]);
            return conclude(r, false, "two grid points share an image");
        }
    }

    // displacement across the boundary of V
    std::vector<double> inner_disp;
    double outer_disp = 0.0;
    for (double d : deltas) {
        double worst = 0.0;
        for (std::size_t k = 0; k < angles; ++k) {
            const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(angles);
            worst = std::max(worst, displacement(sq(cx + (radius - d) * std::cos(a), cy + (radius - d) * std::sin(a))));
            outer_disp = std::max(outer_disp,
                                  displacement(sq(cx + (radius + d) * std::cos(a), cy + (radius + d) * std::sin(a))));
        }
        inner_disp.push_back(worst);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < inner_disp.size(); ++i) monotone = monotone && inner_disp[i] <= inner_disp[i - 1];

    // long-horizon orbit from the start
    const auto& start = std::get<EuclidPoint>(cfg.start);
    const double ux = (start.coords[0] - cx) / radius;
    const double uy = (start.coords[1] - cy) / radius;
    const double r0 = std::hypot(ux, uy);
    if (!(r0 > 0.0 && r0 < 1.0)) {
        r.witnesses.push_back(cfg.start);
        return conclude(r, false, "start must be interior to V and off its center");
    }
    flows::RadialScheduleOptions opt;
    opt.t_end = horizon;
    opt.cfg = scenario_integrator(cfg);
    opt.cfg.max_step = std::numeric_limits<double>::infinity();
    const auto run = flows::radial_schedule(r0, std::atan2(uy, ux), opt);
    const auto& last = run.back();
    const EuclidPoint far = sq(cx + radius * last.r * std::cos(last.theta), cy + radius * last.r * std::sin(last.theta));
    const auto tail_orbit = dynamics::orbit(f, far, tail_steps);
    const auto est = omega::omega_estimate(tail_orbit, 0, cfg.eps_net);
    double worst_band = 0.0;
    double worst_fixed = 0.0;
    for (const Point& p : est.net) {
        const auto& e = std::get<EuclidPoint>(p);
        const double to_boundary = radius - std::hypot(e.coords[0] - cx, e.coords[1] - cy);
        const double disp = displacement(e);
        worst_band = std::max(worst_band, to_boundary);
        worst_fixed = std::max(worst_fixed, disp);
        if (to_boundary > band || disp > fixed_tol) r.witnesses.push_back(p);
    }

    r.metrics = {{"inner_displacement", inner_disp}, {"outer_displacement", outer_disp}, {"horizon", last.t},
                 {"final_chart_radius", last.r}, {"omega_net_size", est.net.size()},
                 {"max_distance_to_boundary", worst_band}, {"max_displacement_on_omega", worst_fixed}};
    if (!monotone || outer_disp != 0.0) {
        return conclude(r, false, "displacement does not decay monotonically towards the boundary");
    }
    if (!r.witnesses.empty()) return conclude(r, false, "omega estimate not confined to fixed points near the boundary");
    return conclude(r, true,
                    "identity off V, boundary displacement decays, omega estimate within " + fmt(worst_band) +
                        " of the boundary and fixed within " + fmt(worst_fixed));
}

CheckResult check_prop18(const ScenarioConfig& cfg, const omega::OmegaEstimate& est, const json& params) {
    CheckResult r = make_result("prop18");
    const auto n = param<std::size_t>(params, "n", 6);
    const auto max_net = param<std::size_t>(params, "max_net", 6);
    const auto& factors = cfg.map.factors();
    if (factors.empty()) {
        r.witnesses.push_back(cfg.start);
        return conclude(r, false, "needs a product map");
    }

    std::vector<omega::Cloud> factor_nets;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto o = dynamics::orbit(factors[i], dynamics::project(cfg.start, i), cfg.steps);
        const auto e = omega::omega_estimate(o, cfg.burn_in, cfg.eps_net);
        const auto cls = omega::classify_totally_periodic(factors[i], e, cfg.n_max, cfg.tol);
        if (cls.kind != omega::PeriodicClass::totally_periodic) {
            r.witnesses.push_back(cls.witness.value_or(e.net.front()));
            return conclude(r, false, "factor " + std::to_string(i) + " omega estimate is not totally periodic");
        }
        factor_nets.push_back(e.net);
    }

    std::vector<std::size_t> periods;
    for (const Point& p : est.net) {
        for (std::size_t i = 0; i < factors.size(); ++i) {
            const Point& pi = dynamics::project(p, i);
            const bool inside = std::any_of(factor_nets[i].begin(), factor_nets[i].end(), [&](const Point& q) {
                return factors[i].space().exact() && dynamics::is_exact(pi)
                           ? spaces::same_point(pi, q)
                           : spaces::dist(pi, q, factors[i].space()) <= cfg.tol;
            });
            if (!inside) {
                r.witnesses.push_back(p);
                return conclude(r, false, "net point outside the product of factor omega estimates");
            }
        }
        const auto rep = omega::detect_periodic(cfg.map, p, cfg.n_max, cfg.tol);
        if (!rep.period || n % *rep.period != 0) {
            r.witnesses.push_back(p);
            return conclude(r, false, "net point period does not divide " + std::to_string(n));
        }
        periods.push_back(*rep.period);
    }
    json sizes = json::array();
    for (const auto& fn : factor_nets) sizes.push_back(fn.size());
    r.metrics = {{"net_size", est.net.size()}, {"factor_net_sizes", sizes}, {"periods", periods}, {"n", n}};
    if (est.net.size() > max_net) {
        r.witnesses.push_back(est.net.back());
        return conclude(r, false, "product omega estimate larger than " + std::to_string(max_net));
    }
    return conclude(r, true,
                    std::to_string(est.net.size()) + " periodic net points, contained in the product of factor estimates");
}

CheckResult check_cantor_negative(const ScenarioConfig& cfg, const omega::Classification& cls, const json& params) {
    CheckResult r = make_result("cantor_negative");
    const auto n_max = param<std::size_t>(params, "n_max", 10000);
    const auto rep = omega::detect_periodic(cfg.map, cfg.start, n_max, 0.0);
    r.metrics = {{"n_max", n_max}, {"classification", omega::class_name(cls.kind)}};
    if (rep.period) {
        r.witnesses.push_back(cfg.start);
        return conclude(r, false, "start point has period " + std::to_string(*rep.period));
    }
    if (cls.kind != omega::PeriodicClass::not_certified) {
        r.witnesses.push_back(cfg.start);
        return conclude(r, false, "omega estimate was certified totally periodic");
    }
    return conclude(r, true, "no period <= " + std::to_string(n_max) + "; classification NotCertified");
}

// ---------------------------------------------------------------------------

VerificationReport run_scenario(const ScenarioConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    VerificationReport rep;
    rep.scenario_id = cfg.id;
    rep.map_name = cfg.map.name();

    std::optional<Pipeline> pipe;
    try {
        pipe = run_pipeline(cfg);
        rep.tail_size = pipe->estimate.tail.size();
        rep.omega_size = pipe->estimate.net.size();
        rep.component_count = pipe->partition.count;
        rep.single_cycle = pipe->cycle.single_cycle;
        rep.cycle_length = pipe->cycle.length;
        rep.classification = omega::class_name(pipe->classification.kind);
        rep.max_period = pipe->classification.max_period;
        if (cfg.target) rep.hausdorff_to_target = omega::hausdorff(pipe->estimate.net, *cfg.target, cfg.sampling, pipe->estimate.space);
    } catch (const std::exception& e) {
        rep.error = e.what();
    }

    for (const auto& spec : cfg.checks) {
        CheckResult res;
        try {
            const bool needs_pipeline = spec.name == "thm12" || spec.name == "cor13" || spec.name == "lemma23" ||
                                        spec.name == "dendrite_counterexample" || spec.name == "prop18" ||
                                        spec.name == "cantor_negative";
            if (needs_pipeline && !pipe) {
                res = make_result(spec.name);
                res.witnesses.push_back(cfg.start);
                conclude(res, false, "missing stage: " + rep.error.value_or("pipeline did not run"));
            } else if (spec.name == "thm12") {
                res = check_thm12(pipe->estimate, pipe->partition, pipe->induced);
            } else if (spec.name == "cor13") {
                res = check_cor13(cfg.map, pipe->estimate, pipe->partition, param<std::size_t>(spec.params, "n", 1), cfg.tol);
            } else if (spec.name == "lemma23") {
                res = check_lemma23(cfg.map, pipe->estimate);
            } else if (spec.name == "dendrite_counterexample") {
                res = check_dendrite_counterexample(cfg, pipe->estimate, spec.params);
            } else if (spec.name == "disk_coverage") {
                res = check_disk_coverage(cfg, spec.params);
            } else if (spec.name == "s1_fixed") {
                res = check_s1_fixed(cfg, spec.params);
            } else if (spec.name == "monotone_r") {
                res = check_monotone_r(cfg, spec.params);
            } else if (spec.name == "theta_relation") {
                res = check_theta_relation(cfg, spec.params);
            } else if (spec.name == "suspension") {
                res = check_suspension(cfg, spec.params);
            } else if (spec.name == "square_extension") {
                res = check_square_extension(cfg, spec.params);
            } else if (spec.name == "prop18") {
                res = check_prop18(cfg, pipe->estimate, spec.params);
            } else if (spec.name == "cantor_negative") {
                res = check_cantor_negative(cfg, pipe->classification, spec.params);
            } else {
                throw ConfigError("unknown check '" + spec.name + "'");
            }
        } catch (const std::exception& e) {
            res = make_result(spec.name);
            res.witnesses.push_back(cfg.start);
            conclude(res, false, std::string("check raised: ") + e.what());
        }
        if (!res.raw_passed && res.witnesses.empty()) res.witnesses.push_back(cfg.start);
        res.expected_pass = spec.expect_pass;
        res.passed = res.raw_passed == spec.expect_pass;
        if (!spec.expect_pass) res.detail = (res.passed ? "failed as expected: " : "expected a failure: ") + res.detail;
        rep.checks.push_back(std::move(res));
    }

    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// ---------------------------------------------------------------------------

json report_to_json(const VerificationReport& r, bool include_timing) {
    json checks = json::array();
    for (const auto& c : r.checks) {
        json w = json::array();
        for (const auto& p : c.witnesses) w.push_back(point_to_json(p));
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"outcome", c.raw_passed ? "pass" : "fail"},
                          {"expected", c.expected_pass ? "pass" : "fail"},
                          {"detail", c.detail},
                          {"metrics", c.metrics},
                          {"witnesses", w}});
    }
    json j = {{"scenario", r.scenario_id},
              {"map", r.map_name},
              {"tail_size", r.tail_size},
              {"omega_size", r.omega_size},
              {"component_count", r.component_count},
              {"cycle", {{"single", r.single_cycle}, {"length", r.cycle_length}}},
              {"classification", {{"kind", r.classification}, {"max_period", r.max_period}}},
              {"hausdorff_to_target", r.hausdorff_to_target ? json(*r.hausdorff_to_target) : json(nullptr)},
              {"checks", checks},
              {"passed", r.all_passed()}};
    if (r.error) j["error"] = *r.error;
    if (include_timing) j["wall_time"] = r.wall_time;
    return j;
}

void write_cloud_csv(std::ostream& out, const omega::Cloud& cloud) {
    std::size_t width = 0;
    std::vector<std::vector<double>> rows;
    rows.reserve(cloud.size());
    for (const auto& p : cloud) {
        rows.push_back(spaces::flat_coords(p));
        width = std::max(width, rows.back().size());
    }
    out << "index";
    for (std::size_t i = 0; i < width; ++i) out << ",coord" << i;
    out << "\n";
    const auto old_precision = out.precision(17);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << i;
        for (double c : rows[i]) out << "," << c;
        out << "\n";
    }
    out.precision(old_precision);
}

std::vector<SuiteEntry> run_suite(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<std::future<SuiteEntry>> jobs;
    jobs.reserve(files.size());
    for (const auto& f : files) {
        jobs.push_back(std::async(std::launch::async, [f] {
            SuiteEntry entry{f, std::nullopt, std::nullopt};
            try {
                entry.report = run_scenario(load_scenario(f));
            } catch (const ConfigError& e) {
                entry.config_error = e.what();
            }
            return entry;
        }));
    }
    std::vector<SuiteEntry> out;
    out.reserve(jobs.size());
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

}  // namespace omegalab::harness
