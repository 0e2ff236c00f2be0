#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "omegalab/dynamics.hpp"
#include "omegalab/spaces.hpp"

namespace omegalab::omega {

using dynamics::DynamicalMap;
using dynamics::Orbit;
using spaces::Point;
using spaces::Space;

using Cloud = std::vector<Point>;

/// Finite-horizon surrogate for an omega-limit set: the orbit tail after a
/// burn-in and its greedy epsilon-net (first point wins, orbit order).
struct OmegaEstimate {
    std::string source;
    Space space;
    std::size_t burn_in = 0;
    Cloud tail;
    Cloud net;
    double epsilon = 0.0;
};

/// Throws std::invalid_argument if burn_in leaves an empty tail or eps <= 0.
OmegaEstimate omega_estimate(const Orbit& o, std::size_t burn_in, double eps);

/// Greedy thinning at radius eps: each point becomes a representative unless
/// it lies within eps of an earlier one.
Cloud epsilon_net(const Cloud& cloud, double eps, const Space& space);

// ---------------------------------------------------------------------------

struct Segment {
    std::array<double, 2> from{};
    std::array<double, 2> to{};
};

struct CircleTarget {
    std::array<double, 2> center{};
    double radius = 1.0;
};

using Target = std::variant<Segment, CircleTarget>;

/// `sampling` points of the target, as points of `space` (dendrite segments
/// must lie on the baseline and are sampled exactly).
Cloud sample_target(const Target& target, std::size_t sampling, const Space& space);

/// Symmetric Hausdorff distance. Throws std::invalid_argument on empty input.
double hausdorff(const Cloud& a, const Cloud& b, const Space& space);
double hausdorff(const Cloud& a, const Target& target, std::size_t sampling, const Space& space);

// ---------------------------------------------------------------------------

struct PeriodReport {
    Point point;
    std::optional<std::size_t> period;
    std::size_t n_max = 0;
    double tolerance = 0.0;
    bool exact = false;
};

/// Smallest p <= n_max with f^p(x) == x. Exact comparison when the space and
/// the point allow it (tol ignored), otherwise dist <= tol.
PeriodReport detect_periodic(const DynamicalMap& m, const Point& p, std::size_t n_max, double tol);

// ---------------------------------------------------------------------------

struct ComponentPartition {
    Cloud points;
    Space space;
    double epsilon = 0.0;
    std::vector<std::size_t> labels;
    std::size_t count = 0;
};

/// Connected components of the graph joining points at distance <= eps.
/// Labels are numbered in order of each component's smallest member index.
ComponentPartition components(const Cloud& cloud, double eps, const Space& space);

struct Straddle {
    std::size_t component = 0;
    Point point;
    Point image;
    std::string reason;
};

/// The map on components induced by f. An image attaches to the component of
/// its nearest cloud point when that point is within epsilon + slack.
struct InducedMap {
    std::vector<std::size_t> table;
    bool well_defined = true;
    std::vector<Straddle> straddles;
};

InducedMap induced_map(const DynamicalMap& m, const ComponentPartition& part, double slack = 0.0);

struct CycleReport {
    bool single_cycle = false;
    std::size_t length = 0;   // component count when single_cycle
    std::size_t cycles = 0;   // number of cycles when the table is a permutation
    std::string witness;      // empty on success
};

/// Whether the table is one cyclic permutation of all components.
CycleReport verify_cycle(const InducedMap& im);

// ---------------------------------------------------------------------------

/// A nonempty proper subset F of L with F disjoint from f(L \ F), if any is
/// found: exhaustive for |L| <= 12, otherwise 10^4 seeded random subsets.
/// Throws std::invalid_argument unless f(L) is a subset of L exactly.
std::optional<std::vector<std::size_t>> sharkovsky_witness(const Cloud& L, const DynamicalMap& m);

/// True iff every nonempty proper F has F meeting f(L \ F).
bool sharkovsky_check(const Cloud& L, const DynamicalMap& m);

/// L with exact duplicates removed, order kept.
Cloud distinct_points(const Cloud& L);

// ---------------------------------------------------------------------------

enum class PeriodicClass { totally_periodic, not_certified };

struct Classification {
    PeriodicClass kind = PeriodicClass::not_certified;
    std::size_t max_period = 0;
    std::optional<Point> witness;  // first representative without a period
};

/// TotallyPeriodic when every net representative has a detected period <= n_max.
/// Never claims aperiodicity.
Classification classify_totally_periodic(const DynamicalMap& m, const OmegaEstimate& est, std::size_t n_max,
                                         double tol);

const char* class_name(PeriodicClass c);

}  // namespace omegalab::omega
