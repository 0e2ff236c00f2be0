#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "omegalab/integrator.hpp"
#include "omegalab/spaces.hpp"

namespace omegalab::flows {

using spaces::EuclidPoint;

/// exp(-1/(1-r^2)) on [0,1), 0 at r = 1 and wherever the exponent underflows.
/// Throws std::domain_error outside [0,1].
double phi_bump(double r);

/// Polar state of the disk flow. theta accumulates without wrapping.
struct RadialState {
    double r = 0.0;
    double theta = 0.0;
    double t = 0.0;
};

struct RadialRates {
    double dr = 0.0;
    double dtheta = 0.0;
};

/// r' = r^2 phi(r), theta' = 2 r^3 phi(r) / (1-r^2)^2: the radial equation and
/// the time derivative of theta = 1/(1-r^2) along it. Both vanish at r = 0 and r = 1.
RadialRates radial_derivatives(const RadialState& s);

/// Flow the polar system for time T with the adaptive 5(4) pair.
/// Equilibria (both rates exactly zero) are returned unchanged.
/// Throws IntegrationError (state = {r, theta}) on step-size underflow.
RadialState flow(const RadialState& s0, double T, const IntegratorConfig& cfg = {});

/// Time-one map of the flow on the closed unit disk. Fixes 0 and S^1
/// bit for bit.
EuclidPoint disk_time_one(const EuclidPoint& p, const IntegratorConfig& cfg = {});

/// Angular advance 1/(1-r1^2) - 1/(1-r0^2) while the radius grows from r0 to r1.
/// Throws std::domain_error unless 0 < r0 <= r1 < 1.
double theta_from_radius(double r0, double r1);

/// Homeomorphism of the closed unit ball B_n fixing S^{n-1} and 0. Dimension 2
/// is the disk time-one map; dimension n+1 slices B_{n+1} at height x_{n+1} and
/// applies the rescaled dimension-n map on each slice, fixing the poles.
class BallMap {
public:
    static BallMap disk(IntegratorConfig cfg = {});

    std::size_t dimension() const { return dimension_; }
    const IntegratorConfig& config() const { return cfg_; }

    /// Throws std::invalid_argument on arity mismatch or a point outside the ball.
    EuclidPoint operator()(const EuclidPoint& x) const;

    friend BallMap ball_suspend(const BallMap& f);

private:
    BallMap(std::size_t dim, IntegratorConfig cfg, std::shared_ptr<const BallMap> inner)
        : dimension_(dim), cfg_(cfg), inner_(std::move(inner)) {}

    std::size_t dimension_;
    IntegratorConfig cfg_;
    std::shared_ptr<const BallMap> inner_;
};

/// The (n+1)-dimensional map built from an n-dimensional one.
BallMap ball_suspend(const BallMap& f);

/// Convenience: the suspension tower up to dimension n (n >= 2).
BallMap ball_map(std::size_t n, IntegratorConfig cfg = {});

using PlaneMap = std::function<EuclidPoint(const EuclidPoint&)>;

/// Map of the unit square that acts as f, conjugated by the affine chart of
/// the disk V = disk(center, radius), inside V and as the identity elsewhere.
/// f must be a self-map of the closed unit disk fixing S^1. Throws
/// std::invalid_argument if V does not fit inside [0,1]^2.
PlaneMap extend_by_identity(PlaneMap f, const EuclidPoint& center, double radius);

// ---------------------------------------------------------------------------
// Long-horizon radial runs.
// ---------------------------------------------------------------------------

struct RadialSample {
    double t = 0.0;
    double r = 0.0;
    double theta = 0.0;
};

struct RadialScheduleOptions {
    double t_end = std::numeric_limits<double>::infinity();
    IntegratorConfig cfg = IntegratorConfig::long_horizon();
    /// Cap on the angular advance of one integrator step.
    double max_dtheta = std::numeric_limits<double>::infinity();
    /// Stop once theta has grown this much past the first sample with r >= stop_radius.
    double stop_theta_gain = std::numeric_limits<double>::infinity();
    double stop_radius = 0.0;
    std::size_t max_steps = 2'000'000;
};

/// Integrates the decoupled radial equation only, recording every accepted step;
/// theta is recovered in closed form from theta_from_radius. Needs 0 <= r0 <= 1
/// and finite t_end or stop_theta_gain.
std::vector<RadialSample> radial_schedule(double r0, double theta0, const RadialScheduleOptions& opt);

/// Disk point at polar coordinates (r, theta).
EuclidPoint polar_point(double r, double theta);

}  // namespace omegalab::flows
