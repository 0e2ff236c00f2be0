#include "omegalab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <variant>

#include "omegalab/dendrite.hpp"

namespace omegalab::dynamics {

using spaces::CantorWord;
using spaces::DendritePoint;
using spaces::EuclidPoint;
using spaces::EuclidTag;
using spaces::ProductPoint;

// ---------------------------------------------------------------------------

void PiecewiseLinearSpec::validate() const {
    if (breakpoints.size() < 2) throw std::invalid_argument("piecewise-linear map needs at least 2 breakpoints");
    if (breakpoints.front().first != 0 || breakpoints.back().first != 1) {
        throw std::invalid_argument("piecewise-linear breakpoints must start at x = 0 and end at x = 1");
    }
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        const auto& [x, y] = breakpoints[i];
        if (y < 0 || y > 1) throw std::invalid_argument("piecewise-linear value outside [0,1]: " + y.str());
        if (i > 0 && !(breakpoints[i - 1].first < x)) {
            throw std::invalid_argument("piecewise-linear breakpoints must be strictly increasing in x");
        }
    }
}

Rational PiecewiseLinearSpec::operator()(const Rational& x) const {
    if (x < 0 || x > 1) throw std::invalid_argument("piecewise-linear map evaluated outside [0,1]");
    auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), x,
                               [](const auto& bp, const Rational& v) { return bp.first < v; });
    if (it->first == x) return it->second;
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

double PiecewiseLinearSpec::operator()(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("piecewise-linear map evaluated outside [0,1]");
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        const double x1 = spaces::to_double(breakpoints[i].first);
        if (x <= x1 || i + 1 == breakpoints.size()) {
            const double x0 = spaces::to_double(breakpoints[i - 1].first);
            const double y0 = spaces::to_double(breakpoints[i - 1].second);
            const double y1 = spaces::to_double(breakpoints[i].second);
            return std::clamp(y0 + (y1 - y0) * (x - x0) / (x1 - x0), 0.0, 1.0);
        }
    }
    return spaces::to_double(breakpoints.back().second);
}

// ---------------------------------------------------------------------------

namespace {

struct F0Rule {};
struct DiskRule {
    flows::IntegratorConfig cfg;
};
struct BallRule {
    flows::BallMap map;
};
struct SquareRule {
    flows::PlaneMap map;
};
struct PiecewiseRule {
    PiecewiseLinearSpec spec;
};
struct RotationRule {
    std::optional<Rational> turn;
    double radians = 0.0;
};
struct OdometerRule {};
struct ProductRule {};

using Rule = std::variant<F0Rule, DiskRule, BallRule, SquareRule, PiecewiseRule, RotationRule, OdometerRule, ProductRule>;

}  // namespace

struct DynamicalMap::Impl {
    Space space;
    std::string name;
    Rule rule;
    std::vector<DynamicalMap> factors;
};

DynamicalMap DynamicalMap::dendrite_f0() {
    return DynamicalMap(std::make_shared<const Impl>(Impl{Space::dendrite(), "dendrite_f0", F0Rule{}, {}}));
}

DynamicalMap DynamicalMap::disk_time_one(flows::IntegratorConfig cfg) {
    cfg.validate();
    return DynamicalMap(std::make_shared<const Impl>(Impl{Space::disk(), "disk_time_one", DiskRule{cfg}, {}}));
}

DynamicalMap DynamicalMap::ball(std::size_t dimension, flows::IntegratorConfig cfg) {
    auto map = flows::ball_map(dimension, cfg);
    return DynamicalMap(std::make_shared<const Impl>(
        Impl{Space::ball(dimension), "ball(" + std::to_string(dimension) + ")", BallRule{std::move(map)}, {}}));
}

DynamicalMap DynamicalMap::square_extension(const EuclidPoint& center, double radius, flows::IntegratorConfig cfg) {
    cfg.validate();
    auto disk = [cfg](const EuclidPoint& u) { return flows::disk_time_one(u, cfg); };
    auto map = flows::extend_by_identity(disk, center, radius);
    return DynamicalMap(std::make_shared<const Impl>(Impl{Space::square(), "square_extension", SquareRule{std::move(map)}, {}}));
}

DynamicalMap DynamicalMap::piecewise_linear(PiecewiseLinearSpec spec) {
    spec.validate();
    return DynamicalMap(
        std::make_shared<const Impl>(Impl{Space::interval(), "piecewise_linear", PiecewiseRule{std::move(spec)}, {}}));
}

DynamicalMap DynamicalMap::rotation(Rational turn) {
    // reduce mod 1
    const EuclidPoint reduced = EuclidPoint::circle_turn(turn);
    const Rational t = *reduced.exact;
    return DynamicalMap(std::make_shared<const Impl>(
        Impl{Space::circle(), "rotation(" + t.str() + ")", RotationRule{t, reduced.coords[0]}, {}}));
}

DynamicalMap DynamicalMap::rotation_angle(double radians) {
    if (!std::isfinite(radians)) throw std::invalid_argument("rotation angle must be finite");
    return DynamicalMap(std::make_shared<const Impl>(
        Impl{Space::circle(), "rotation_angle", RotationRule{std::nullopt, radians}, {}}));
}

DynamicalMap DynamicalMap::odometer(std::size_t depth) {
    if (depth == 0) throw std::invalid_argument("odometer depth must be positive");
    return DynamicalMap(std::make_shared<const Impl>(
        Impl{Space::cantor(depth), "odometer(" + std::to_string(depth) + ")", OdometerRule{}, {}}));
}

DynamicalMap DynamicalMap::product(std::vector<DynamicalMap> factors) {
    if (factors.size() < 2) throw std::invalid_argument("a product map needs at least 2 factors");
    std::vector<Space> spaces;
    std::string name = "product(";
    for (std::size_t i = 0; i < factors.size(); ++i) {
        spaces.push_back(factors[i].space());
        name += (i ? ", " : "") + factors[i].name();
    }
    name += ")";
    return DynamicalMap(std::make_shared<const Impl>(
        Impl{Space::product(std::move(spaces)), std::move(name), ProductRule{}, std::move(factors)}));
}

const Space& DynamicalMap::space() const { return impl_->space; }
const std::string& DynamicalMap::name() const { return impl_->name; }
const std::vector<DynamicalMap>& DynamicalMap::factors() const { return impl_->factors; }

Point DynamicalMap::operator()(const Point& p) const {
    spaces::require_member(p, impl_->space, impl_->name.c_str());
    const Impl& m = *impl_;
    return std::visit(
        [&](const auto& rule) -> Point {
            using R = std::decay_t<decltype(rule)>;
            if constexpr (std::is_same_v<R, F0Rule>) {
                return dendrite::f0_eval(std::get<DendritePoint>(p));
            } else if constexpr (std::is_same_v<R, DiskRule>) {
                return flows::disk_time_one(std::get<EuclidPoint>(p), rule.cfg);
            } else if constexpr (std::is_same_v<R, BallRule>) {
                return rule.map(std::get<EuclidPoint>(p));
            } else if constexpr (std::is_same_v<R, SquareRule>) {
                return rule.map(std::get<EuclidPoint>(p));
            } else if constexpr (std::is_same_v<R, PiecewiseRule>) {
                const auto& e = std::get<EuclidPoint>(p);
                if (e.exact) return EuclidPoint::interval(rule.spec(*e.exact));
                return EuclidPoint::interval(rule.spec(e.coords[0]));
            } else if constexpr (std::is_same_v<R, RotationRule>) {
                const auto& e = std::get<EuclidPoint>(p);
                if (rule.turn && e.exact) return EuclidPoint::circle_turn(*e.exact + *rule.turn);
                return EuclidPoint::circle_angle(e.coords[0] + rule.radians);
            } else if constexpr (std::is_same_v<R, OdometerRule>) {
                CantorWord w = std::get<CantorWord>(p);
                for (std::size_t i = 0; i < w.bits.size(); ++i) {
                    const bool carry = w.bits[i];
                    w.bits[i] = !w.bits[i];
                    if (!carry) break;
                }
                return w;
            } else {
                const auto& pp = std::get<ProductPoint>(p);
                std::vector<Point> out;
                out.reserve(m.factors.size());
                for (std::size_t i = 0; i < m.factors.size(); ++i) out.push_back(m.factors[i](pp.factors[i]));
                return ProductPoint{std::move(out)};
            }
        },
        m.rule);
}

Point eval(const DynamicalMap& m, const Point& p) { return m(p); }

Point iterate(const DynamicalMap& m, const Point& p, std::size_t k) {
    Point x = p;
    for (std::size_t i = 0; i < k; ++i) x = m(x);
    return x;
}

bool is_exact(const Point& p) {
    return std::visit(
        [](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, EuclidPoint>) {
                return v.exact.has_value();
            } else if constexpr (std::is_same_v<T, ProductPoint>) {
                return std::all_of(v.factors.begin(), v.factors.end(), [](const Point& f) { return is_exact(f); });
            } else {
                return true;
            }
        },
        p);
}

Orbit orbit(const DynamicalMap& m, const Point& p, std::size_t steps) {
    if (steps == 0) throw std::invalid_argument("orbit: need at least one step");
    Orbit o{m.name(), m.space(), p, {}, true};
    o.points.reserve(steps + 1);
    o.points.push_back(p);
    for (std::size_t i = 0; i < steps; ++i) o.points.push_back(m(o.points.back()));
    o.exact = std::all_of(o.points.begin(), o.points.end(), [](const Point& x) { return is_exact(x); });
    return o;
}

bool verify_orbit(const DynamicalMap& m, const Orbit& o) {
    if (o.points.empty() || !spaces::same_point(o.points.front(), o.start)) return false;
    for (std::size_t i = 0; i + 1 < o.points.size(); ++i) {
        if (!spaces::same_point(m(o.points[i]), o.points[i + 1])) return false;
    }
    return true;
}

const Point& project(const Point& p, std::size_t i) {
    const auto* pp = std::get_if<ProductPoint>(&p);
    if (!pp || i >= pp->factors.size()) throw std::invalid_argument("project: not a product point or index out of range");
    return pp->factors[i];
}

}  // namespace omegalab::dynamics
