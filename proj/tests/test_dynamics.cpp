#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <numeric>

#include "omegalab/dynamics.hpp"
#include "omegalab/omega.hpp"

using namespace omegalab;
using dynamics::DynamicalMap;
using spaces::CantorWord;
using spaces::DendritePoint;
using spaces::EuclidPoint;
using spaces::Point;
using spaces::Rational;

namespace {

Rational q(const char* s) { return spaces::parse_rational(s); }

dynamics::PiecewiseLinearSpec three_cycle() {
    return {{{q("0"), q("0")}, {q("1/5"), q("1/2")}, {q("1/2"), q("4/5")}, {q("4/5"), q("1/5")}, {q("1"), q("1")}}};
}

const EuclidPoint& euclid(const Point& p) { return std::get<EuclidPoint>(p); }

}  // namespace

TEST_CASE("piecewise-linear specs") {
    const auto spec = three_cycle();
    CHECK_NOTHROW(spec.validate());
    CHECK(spec(q("1/5")) == q("1/2"));
    CHECK(spec(q("1/2")) == q("4/5"));
    CHECK(spec(q("4/5")) == q("1/5"));
    CHECK(spec(q("1/10")) == q("1/4"));
    CHECK(spec(0.1) == doctest::Approx(0.25));

    dynamics::PiecewiseLinearSpec bad{{{q("0"), q("0")}, {q("1/2"), q("3/2")}, {q("1"), q("1")}}};
    CHECK_THROWS(bad.validate());
    dynamics::PiecewiseLinearSpec unsorted{{{q("0"), q("0")}, {q("1/2"), q("1/2")}, {q("1/2"), q("1")}, {q("1"), q("1")}}};
    CHECK_THROWS(unsorted.validate());
    CHECK_THROWS(DynamicalMap::piecewise_linear(bad));
}

TEST_CASE("rational closure of piecewise-linear maps") {
    const auto f = DynamicalMap::piecewise_linear(three_cycle());
    Point p = EuclidPoint::interval(q("3/7"));
    for (int i = 0; i < 50; ++i) {
        p = f(p);
        REQUIRE(dynamics::is_exact(p));
        REQUIRE(euclid(p).coords[0] == spaces::to_double(*euclid(p).exact));
    }
}

TEST_CASE("rotations") {
    const auto r = DynamicalMap::rotation(q("1/3"));
    const auto img = euclid(r(EuclidPoint::circle_turn(0)));
    CHECK(*img.exact == q("1/3"));
    CHECK(img.coords[0] == doctest::Approx(2 * std::numbers::pi / 3));
    CHECK(DynamicalMap::rotation(q("2/6")).name() == "rotation(1/3)");
    CHECK(DynamicalMap::rotation(q("5/4")).name() == "rotation(1/4)");

    const auto o = dynamics::orbit(DynamicalMap::rotation(q("1/4")), EuclidPoint::circle_turn(0), 4);
    const std::vector<double> expected{0, std::numbers::pi / 2, std::numbers::pi, 3 * std::numbers::pi / 2, 0};
    for (std::size_t i = 0; i < 5; ++i) CHECK(euclid(o.points[i]).coords[0] == doctest::Approx(expected[i]));
    CHECK(o.points[4] == o.points[0]);

    const auto f = DynamicalMap::rotation_angle(1.0);
    CHECK(euclid(f(EuclidPoint::circle_angle(6.0))).coords[0] == doctest::Approx(7.0 - 2 * std::numbers::pi));
}

TEST_CASE("rotation periods are q/gcd(p,q)") {
    for (long long den = 1; den <= 12; ++den) {
        for (long long num = 0; num <= 12; ++num) {
            const auto f = DynamicalMap::rotation(Rational(num, den));
            const auto expected = static_cast<std::size_t>(den / std::gcd(num, den));
            for (const char* start : {"0", "1/7", "5/11"}) {
                const auto rep = omega::detect_periodic(f, EuclidPoint::circle_turn(q(start)), 100, 0.0);
                REQUIRE(rep.period == expected);
                REQUIRE(rep.exact);
            }
        }
    }
}

TEST_CASE("odometer") {
    const auto f = DynamicalMap::odometer(4);
    CHECK(f(CantorWord::parse("1111")) == Point(CantorWord::parse("0000")));
    CHECK(f(CantorWord::parse("0000")) == Point(CantorWord::parse("1000")));
    CHECK(f(CantorWord::parse("1100")) == Point(CantorWord::parse("0010")));
    for (std::size_t depth : {1u, 3u, 6u, 10u}) {
        const auto g = DynamicalMap::odometer(depth);
        const auto rep = omega::detect_periodic(g, CantorWord::zeros(depth), 1u << depth, 0.0);
        REQUIRE(rep.period == (std::size_t{1} << depth));
    }
    const auto big = DynamicalMap::odometer(64);
    CHECK_FALSE(omega::detect_periodic(big, CantorWord::zeros(64), 10000, 0.0).period.has_value());
    CHECK_THROWS(f(CantorWord::zeros(5)));
}

TEST_CASE("products") {
    const auto f = DynamicalMap::product({DynamicalMap::dendrite_f0(), DynamicalMap::rotation(q("1/2"))});
    const Point x = spaces::make_product({DendritePoint::arc_tip(1), EuclidPoint::circle_turn(0)});
    const Point y = f(x);
    CHECK(dynamics::project(y, 0) == Point(DendritePoint::arc_tip(2)));
    CHECK(euclid(dynamics::project(y, 1)).coords[0] == doctest::Approx(std::numbers::pi));
    CHECK(f.factors().size() == 2);

    const auto g = DynamicalMap::product({DynamicalMap::piecewise_linear(three_cycle()), DynamicalMap::rotation(q("1/3")),
                                          DynamicalMap::odometer(5)});
    Point p = spaces::make_product({EuclidPoint::interval(q("2/9")), EuclidPoint::circle_turn(q("1/5")),
                                    CantorWord::parse("10110")});
    for (int i = 0; i < 20; ++i) {
        const Point next = g(p);
        for (std::size_t k = 0; k < 3; ++k) REQUIRE(dynamics::project(next, k) == g.factors()[k](dynamics::project(p, k)));
        p = next;
    }
    CHECK_THROWS(DynamicalMap::product({DynamicalMap::dendrite_f0()}));
}

TEST_CASE("orbits") {
    const auto o = dynamics::orbit(DynamicalMap::dendrite_f0(), DendritePoint::baseline(q("1/3")), 10);
    CHECK(o.points.size() == 11);
    for (const auto& p : o.points) CHECK(p == o.points.front());
    CHECK(o.exact);
    CHECK(dynamics::verify_orbit(DynamicalMap::dendrite_f0(), o));

    const auto c = dynamics::orbit(DynamicalMap::piecewise_linear(three_cycle()), EuclidPoint::interval(q("1/5")), 6);
    const std::vector<const char*> cyc{"1/5", "1/2", "4/5", "1/5", "1/2", "4/5", "1/5"};
    for (std::size_t i = 0; i < cyc.size(); ++i) CHECK(*euclid(c.points[i]).exact == q(cyc[i]));

    const auto d = dynamics::orbit(DynamicalMap::disk_time_one(), EuclidPoint::disk(0.3, 0.1), 5);
    CHECK_FALSE(d.exact);
    CHECK(dynamics::verify_orbit(DynamicalMap::disk_time_one(), d));
    auto broken = d;
    broken.points[3] = EuclidPoint::disk(0.0, 0.0);
    CHECK_FALSE(dynamics::verify_orbit(DynamicalMap::disk_time_one(), broken));
    CHECK_THROWS(dynamics::orbit(DynamicalMap::disk_time_one(), EuclidPoint::disk(0, 0), 0));
}

TEST_CASE("maps preserve their space") {
    const std::vector<std::pair<DynamicalMap, Point>> cases{
        {DynamicalMap::dendrite_f0(), DendritePoint::arc(6, q("1/7"))},
        {DynamicalMap::disk_time_one(), EuclidPoint::disk(-0.4, 0.6)},
        {DynamicalMap::ball(3), EuclidPoint::ball({0.1, -0.2, 0.5})},
        {DynamicalMap::square_extension(EuclidPoint::square(0.5, 0.5), 0.4), EuclidPoint::square(0.3, 0.6)},
        {DynamicalMap::piecewise_linear(three_cycle()), EuclidPoint::interval(q("1/3"))},
        {DynamicalMap::rotation_angle(0.7), EuclidPoint::circle_angle(1.0)},
        {DynamicalMap::odometer(8), CantorWord::zeros(8)},
    };
    for (const auto& [m, p] : cases) {
        Point x = p;
        for (int i = 0; i < 5; ++i) {
            x = m(x);
            REQUIRE(spaces::belongs(x, m.space()));
        }
    }
    CHECK_THROWS(DynamicalMap::disk_time_one()(EuclidPoint::interval(0.5)));
}
