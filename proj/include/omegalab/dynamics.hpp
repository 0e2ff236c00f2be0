#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "omegalab/flows.hpp"
#include "omegalab/spaces.hpp"

namespace omegalab::dynamics {

using spaces::Point;
using spaces::Rational;
using spaces::Space;

/// Piecewise-linear self-map of [0,1] through rational breakpoints.
struct PiecewiseLinearSpec {
    std::vector<std::pair<Rational, Rational>> breakpoints;

    /// Throws std::invalid_argument unless x runs strictly from 0 to 1 and every y is in [0,1].
    void validate() const;
    Rational operator()(const Rational& x) const;
    double operator()(double x) const;
};

/// A continuous self-map of one of the supported spaces. Immutable and cheap
/// to copy.
class DynamicalMap {
public:
    static DynamicalMap dendrite_f0();
    static DynamicalMap disk_time_one(flows::IntegratorConfig cfg = {});
    static DynamicalMap ball(std::size_t dimension, flows::IntegratorConfig cfg = {});
    static DynamicalMap square_extension(const spaces::EuclidPoint& center, double radius,
                                         flows::IntegratorConfig cfg = {});
    static DynamicalMap piecewise_linear(PiecewiseLinearSpec spec);
    /// Rotation by an exact fraction of a turn.
    static DynamicalMap rotation(Rational turn);
    /// Rotation by an angle in radians, float only.
    static DynamicalMap rotation_angle(double radians);
    static DynamicalMap odometer(std::size_t depth = spaces::kDefaultCantorDepth);
    static DynamicalMap product(std::vector<DynamicalMap> factors);

    const Space& space() const;
    const std::string& name() const;
    /// Factor maps of a product; empty otherwise.
    const std::vector<DynamicalMap>& factors() const;

    /// One application. Throws std::invalid_argument when p is not in space().
    Point operator()(const Point& p) const;

    struct Impl;

private:
    explicit DynamicalMap(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

Point eval(const DynamicalMap& m, const Point& p);

/// p, f(p), ..., f^n(p) for n = 0..k.
Point iterate(const DynamicalMap& m, const Point& p, std::size_t k);

/// True when p carries no rounded coordinates.
bool is_exact(const Point& p);

struct Orbit {
    std::string map_id;
    Space space;
    Point start;
    std::vector<Point> points;
    bool exact = false;
};

/// Forward orbit of length steps + 1. Throws when steps == 0.
Orbit orbit(const DynamicalMap& m, const Point& p, std::size_t steps);

/// Re-evaluates the orbit: points[i+1] == f(points[i]) (exactly, or bitwise for floats).
bool verify_orbit(const DynamicalMap& m, const Orbit& o);

/// i-th factor of a product point.
const Point& project(const Point& p, std::size_t i);

}  // namespace omegalab::dynamics
