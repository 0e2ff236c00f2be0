#include "omegalab/flows.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/math/tools/minima.hpp>

namespace omegalab::flows {

namespace {

constexpr double kBallSlack = 1e-12;

// 1 - r^2 without cancellation near r = 1
double one_minus_sq(double r) { return (1.0 - r) * (1.0 + r); }

double clamp_unit(double r) { return std::clamp(r, 0.0, 1.0); }

std::array<double, 2> polar_rhs(double, const std::array<double, 2>& y) {
    const auto rates = radial_derivatives(RadialState{clamp_unit(y[0]), y[1], 0.0});
    return {rates.dr, rates.dtheta};
}

std::array<double, 1> radial_rhs(double, const std::array<double, 1>& y) {
    const double r = clamp_unit(y[0]);
    return {r * r * phi_bump(r)};
}

double angular_rate(double r) { return radial_derivatives(RadialState{r, 0.0, 0.0}).dtheta; }

// theta' is unimodal in r; its maximum and the radius where it occurs.
std::pair<double, double> angular_peak() {
    static const auto peak = [] {
        const auto m = boost::math::tools::brent_find_minima([](double r) { return -angular_rate(r); }, 0.0, 0.999,
                                                             std::numeric_limits<double>::digits / 2);
        return std::pair{m.first, -m.second};
    }();
    return peak;
}

double ball_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

}  // namespace

double phi_bump(double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("phi_bump: radius outside [0,1]");
    if (r == 1.0) return 0.0;
    // exp underflows to exactly 0 once 1/(1-r^2) passes ~745
    return std::exp(-1.0 / one_minus_sq(r));
}

RadialRates radial_derivatives(const RadialState& s) {
    const double r = s.r;
    if (r <= 0.0 || r >= 1.0) return {};
    const double phi = phi_bump(r);
    if (phi == 0.0) return {};
    const double w = one_minus_sq(r);
    return {r * r * phi, 2.0 * r * r * r * phi / (w * w)};
}

RadialState flow(const RadialState& s0, double T, const IntegratorConfig& cfg) {
    if (!(T >= 0.0)) throw std::invalid_argument("flow: negative time");
    if (!(s0.r >= 0.0 && s0.r <= 1.0)) throw std::invalid_argument("flow: radius outside [0,1]");
    const RadialRates rates = radial_derivatives(s0);
    if (T == 0.0 || (rates.dr == 0.0 && rates.dtheta == 0.0)) return {s0.r, s0.theta, s0.t + T};

    DormandPrince<2> solver;
    solver.project = [](std::array<double, 2>& y) { y[0] = clamp_unit(y[0]); };
    const auto res = solver.integrate(polar_rhs, {s0.r, s0.theta}, s0.t, s0.t + T, cfg);
    return {res.y[0], res.y[1], res.t};
}

EuclidPoint polar_point(double r, double theta) {
    return EuclidPoint{{r * std::cos(theta), r * std::sin(theta)}, spaces::EuclidTag::disk, std::nullopt};
}

EuclidPoint disk_time_one(const EuclidPoint& p, const IntegratorConfig& cfg) {
    if (p.coords.size() != 2) throw std::invalid_argument("disk_time_one: expected a planar point");
    const double x = p.coords[0];
    const double y = p.coords[1];
    const double rho = std::hypot(x, y);
    if (!(rho <= 1.0 + kBallSlack)) throw std::invalid_argument("disk_time_one: point outside the unit disk");

    const RadialState s0{std::min(rho, 1.0), std::atan2(y, x), 0.0};
    const RadialState s1 = flow(s0, 1.0, cfg);
    if (s1.r == s0.r && s1.theta == s0.theta) return p;

    EuclidPoint out = polar_point(s1.r, s1.theta);
    out.tag = p.tag;
    return out;
}

double theta_from_radius(double r0, double r1) {
    if (!(r0 > 0.0 && r0 <= r1 && r1 < 1.0)) {
        throw std::domain_error("theta_from_radius: need 0 < r0 <= r1 < 1");
    }
    if (r0 == r1) return 0.0;
    return 1.0 / one_minus_sq(r1) - 1.0 / one_minus_sq(r0);
}

// ---------------------------------------------------------------------------

BallMap BallMap::disk(IntegratorConfig cfg) {
    cfg.validate();
    return BallMap(2, cfg, nullptr);
}

BallMap ball_suspend(const BallMap& f) {
    return BallMap(f.dimension_ + 1, f.cfg_, std::make_shared<const BallMap>(f));
}

BallMap ball_map(std::size_t n, IntegratorConfig cfg) {
    if (n < 2) throw std::invalid_argument("ball_map: dimension must be >= 2");
    BallMap f = BallMap::disk(cfg);
    while (f.dimension() < n) f = ball_suspend(f);
    return f;
}

EuclidPoint BallMap::operator()(const EuclidPoint& x) const {
    if (x.coords.size() != dimension_) {
        throw std::invalid_argument("ball map of dimension " + std::to_string(dimension_) + " applied to a point with " +
                                    std::to_string(x.coords.size()) + " coordinates");
    }
    if (!(ball_norm(x.coords) <= 1.0 + kBallSlack)) throw std::invalid_argument("ball map: point outside the unit ball");
    if (!inner_) return disk_time_one(x, cfg_);

    const double last = x.coords.back();
    if (std::fabs(last) >= 1.0) return x;  // poles

    const double scale = std::sqrt(one_minus_sq(last));
    std::vector<double> slice(x.coords.begin(), x.coords.end() - 1);
    for (double& c : slice) c /= scale;
    const double n = ball_norm(slice);
    if (n > 1.0) {
        for (double& c : slice) c /= n;
    }
    const EuclidPoint inner_in{slice, inner_->dimension_ == 2 ? spaces::EuclidTag::disk : spaces::EuclidTag::ball,
                               std::nullopt};
    const EuclidPoint inner_out = (*inner_)(inner_in);
    if (inner_out.coords == inner_in.coords) return x;

    EuclidPoint out{{}, x.tag, std::nullopt};
    out.coords.reserve(dimension_);
    for (double c : inner_out.coords) out.coords.push_back(scale * c);
    out.coords.push_back(last);
    return out;
}

// ---------------------------------------------------------------------------

PlaneMap extend_by_identity(PlaneMap f, const EuclidPoint& center, double radius) {
    if (center.coords.size() != 2) throw std::invalid_argument("extend_by_identity: center must be planar");
    const double cx = center.coords[0];
    const double cy = center.coords[1];
    if (!(radius > 0.0) || cx - radius < 0.0 || cx + radius > 1.0 || cy - radius < 0.0 || cy + radius > 1.0) {
        throw std::invalid_argument("extend_by_identity: disk does not fit in the unit square");
    }
    return [f = std::move(f), cx, cy, radius](const EuclidPoint& p) -> EuclidPoint {
        if (p.coords.size() != 2) throw std::invalid_argument("square map: expected a planar point");
        const double dx = p.coords[0] - cx;
        const double dy = p.coords[1] - cy;
        if (std::hypot(dx, dy) >= radius) return p;

        EuclidPoint u{{dx / radius, dy / radius}, spaces::EuclidTag::disk, std::nullopt};
        const double un = ball_norm(u.coords);
        if (un > 1.0) {
            for (double& c : u.coords) c /= un;
        }
        const EuclidPoint v = f(u);
        if (v.coords == u.coords) return p;
        EuclidPoint out{{cx + radius * v.coords[0], cy + radius * v.coords[1]}, p.tag, std::nullopt};
        for (double& c : out.coords) c = std::clamp(c, 0.0, 1.0);
        return out;
    };
}

// ---------------------------------------------------------------------------

std::vector<RadialSample> radial_schedule(double r0, double theta0, const RadialScheduleOptions& opt) {
    if (!(r0 >= 0.0 && r0 <= 1.0)) throw std::invalid_argument("radial_schedule: radius outside [0,1]");
    if (!std::isfinite(opt.t_end) && !std::isfinite(opt.stop_theta_gain)) {
        throw std::invalid_argument("radial_schedule: needs a finite end time or a theta stop");
    }
    std::vector<RadialSample> samples{{0.0, r0, theta0}};
    if (radial_derivatives(RadialState{r0, theta0, 0.0}).dr == 0.0) return samples;

    double stop_base = std::numeric_limits<double>::quiet_NaN();
    if (r0 >= opt.stop_radius) stop_base = theta0;

    DormandPrince<1> solver;
    solver.max_steps = opt.max_steps;
    solver.project = [](std::array<double, 1>& y) { y[0] = clamp_unit(y[0]); };
    if (std::isfinite(opt.max_dtheta)) {
        solver.step_cap = [&](double, const std::array<double, 1>& y) {
            // largest rate the step can meet while r grows
            const auto [r_peak, peak_rate] = angular_peak();
            const double rate = y[0] < r_peak ? peak_rate : angular_rate(y[0]);
            return rate > 0.0 ? opt.max_dtheta / rate : std::numeric_limits<double>::infinity();
        };
    }
    solver.observe = [&](double t, const std::array<double, 1>& y) {
        const double r = y[0];
        const double theta = theta0 + theta_from_radius(r0, r);
        samples.push_back({t, r, theta});
        if (std::isnan(stop_base) && r >= opt.stop_radius) stop_base = theta;
        return !(std::isfinite(stop_base) && theta - stop_base >= opt.stop_theta_gain);
    };
    const double t_end = std::isfinite(opt.t_end) ? opt.t_end : std::numeric_limits<double>::max();
    solver.integrate(radial_rhs, {r0}, 0.0, t_end, opt.cfg);
    return samples;
}

}  // namespace omegalab::flows
