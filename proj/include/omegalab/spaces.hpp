#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace omegalab::spaces {

/// Arbitrary-precision rational, always normalized (lowest terms, positive denominator).
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

// ---------------------------------------------------------------------------
// The dendrite: baseline [0,1]x{0} with a vertical arc I_k = {a_k} x [0, 1/level(k)]
// hanging at every dyadic anchor a_k.
// ---------------------------------------------------------------------------

/// Unique n with 2^(n-1) <= k < 2^n. Throws on k == 0.
std::uint32_t level_of(std::uint64_t k);

/// The k-th anchor a_k. Level n holds the odd numerators j/2^n, listed in
/// ascending order on even levels and descending order on odd levels.
Rational dendrite_anchor(std::uint64_t k);

/// Inverse of dendrite_anchor on odd dyadics: the k with a_k == t, if t is one.
std::optional<std::uint64_t> anchor_index(const Rational& t);

class DendritePoint {
public:
    /// Point (t, 0) of the baseline, t in [0,1].
    static DendritePoint baseline(Rational t);
    /// Point at height h on arc k. Height 0 canonicalizes to baseline(a_k);
    /// throws unless 0 <= h <= 1/level_of(k).
    static DendritePoint arc(std::uint64_t k, Rational h);
    /// B_k, the free end of arc k.
    static DendritePoint arc_tip(std::uint64_t k);

    bool on_baseline() const { return arc_ == 0; }
    /// Arc index, 0 for baseline points.
    std::uint64_t arc_index() const { return arc_; }
    /// Baseline coordinate t, or the arc height h.
    const Rational& value() const { return value_; }
    /// Abscissa in the plane: t or a_k.
    Rational abscissa() const;
    Rational height() const;

    friend bool operator==(const DendritePoint&, const DendritePoint&) = default;

private:
    DendritePoint(std::uint64_t arc, Rational value) : arc_(arc), value_(std::move(value)) {}
    std::uint64_t arc_ = 0;
    Rational value_;
};

std::string describe(const DendritePoint& p);

// ---------------------------------------------------------------------------
// Real-coordinate spaces.
// ---------------------------------------------------------------------------

enum class EuclidTag { interval, circle, disk, ball, square };

const char* tag_name(EuclidTag tag);

/// Real point with a space tag. Interval points and circle points may carry an
/// exact rational alongside the float: the coordinate itself on the interval,
/// the turn fraction in [0,1) on the circle (angle = 2*pi*fraction).
struct EuclidPoint {
    std::vector<double> coords;
    EuclidTag tag = EuclidTag::disk;
    std::optional<Rational> exact;

    static EuclidPoint interval(Rational x);
    static EuclidPoint interval(double x);
    static EuclidPoint circle_turn(Rational fraction);
    static EuclidPoint circle_angle(double angle);
    static EuclidPoint disk(double x, double y);
    static EuclidPoint ball(std::vector<double> coords);
    static EuclidPoint square(double x, double y);

    /// Throws std::invalid_argument when the coordinates break the tag's constraints.
    void validate() const;
    double norm() const;

    friend bool operator==(const EuclidPoint&, const EuclidPoint&) = default;
};

// ---------------------------------------------------------------------------
// Cantor space {0,1}^D, truncated at a fixed depth.
// ---------------------------------------------------------------------------

inline constexpr std::size_t kDefaultCantorDepth = 64;

struct CantorWord {
    std::vector<bool> bits;

    static CantorWord zeros(std::size_t depth = kDefaultCantorDepth);
    static CantorWord parse(const std::string& bits);
    std::size_t depth() const { return bits.size(); }
    std::string str() const;

    friend bool operator==(const CantorWord&, const CantorWord&) = default;
};

// ---------------------------------------------------------------------------
// Products and the point sum type.
// ---------------------------------------------------------------------------

struct Point;

struct ProductPoint {
    std::vector<Point> factors;
};

struct Point : std::variant<DendritePoint, EuclidPoint, CantorWord, ProductPoint> {
    using variant::variant;
};

bool operator==(const ProductPoint& a, const ProductPoint& b);
bool operator==(const Point& a, const Point& b);

ProductPoint make_product(std::vector<Point> factors);

// ---------------------------------------------------------------------------
// Space descriptors.
// ---------------------------------------------------------------------------

enum class SpaceKind { dendrite, interval, circle, disk, ball, square, cantor, product };

struct Space {
    SpaceKind kind = SpaceKind::disk;
    /// Ball dimension or Cantor depth; zero where not applicable.
    std::size_t dimension = 0;
    std::vector<Space> factors;

    static Space dendrite() { return {SpaceKind::dendrite, 0, {}}; }
    static Space interval() { return {SpaceKind::interval, 1, {}}; }
    static Space circle() { return {SpaceKind::circle, 1, {}}; }
    static Space disk() { return {SpaceKind::disk, 2, {}}; }
    static Space ball(std::size_t n) { return {SpaceKind::ball, n, {}}; }
    static Space square() { return {SpaceKind::square, 2, {}}; }
    static Space cantor(std::size_t depth = kDefaultCantorDepth) { return {SpaceKind::cantor, depth, {}}; }
    static Space product(std::vector<Space> factors);

    /// True when equality of points is decidable without rounding.
    bool exact() const;

    friend bool operator==(const Space&, const Space&) = default;
};

std::string describe(const Space& s);
std::string describe(const Point& p);

/// Whether p is a valid point of s (tag, arity, and constraints).
bool belongs(const Point& p, const Space& s);

/// Throws std::invalid_argument unless belongs(p, s).
void require_member(const Point& p, const Space& s, const char* context);

/// Exact equality where the representation allows it: rational components are
/// compared exactly, floating coordinates bit for bit.
bool same_point(const Point& a, const Point& b);

/// Plane image of a dendrite point: baseline (t,0), arc point (a_k, h).
EuclidPoint dendrite_embed(const DendritePoint& p);

/// Metric of the space: Euclidean for real points and embedded dendrite points,
/// arc length on the circle, 2^-(first differing bit, 1-based) on Cantor words,
/// max over factors on products. Throws std::invalid_argument on mismatch.
double dist(const Point& p, const Point& q, const Space& space);

/// Flat real coordinates for dumps: embedded plane coordinates, circle angle,
/// binary value of a Cantor word, concatenated factors for products.
std::vector<double> flat_coords(const Point& p);

}  // namespace omegalab::spaces
