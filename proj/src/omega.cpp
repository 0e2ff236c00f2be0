#include "omegalab/omega.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <boost/container_hash/hash.hpp>

namespace omegalab::omega {

using spaces::DendritePoint;
using spaces::EuclidPoint;
using spaces::EuclidTag;
using spaces::Rational;
using spaces::SpaceKind;

namespace {

// Distances over a fixed cloud. Spaces whose metric is Euclidean on
// flat_coords get a precomputed coordinate table; others go through dist().
class CloudMetric {
public:
    CloudMetric(const Cloud& cloud, const Space& space) : cloud_(cloud), space_(space) {
        for (const Point& p : cloud) spaces::require_member(p, space, "cloud");
        switch (space.kind) {
            case SpaceKind::dendrite:
            case SpaceKind::interval:
            case SpaceKind::disk:
            case SpaceKind::ball:
            case SpaceKind::square:
                euclidean_ = true;
                coords_.reserve(cloud.size());
                for (const Point& p : cloud) coords_.push_back(spaces::flat_coords(p));
                break;
            default:
                break;
        }
    }

    std::size_t size() const { return cloud_.size(); }
    bool euclidean() const { return euclidean_; }
    const std::vector<double>& coords(std::size_t i) const { return coords_[i]; }

    double operator()(std::size_t i, std::size_t j) const {
        if (euclidean_) return euclid(coords_[i], coords_[j]);
        return spaces::dist(cloud_[i], cloud_[j], space_);
    }

    /// Distance from cloud point i to an arbitrary point q of the space.
    double to(std::size_t i, const Point& q, const std::vector<double>& q_coords) const {
        if (euclidean_) return euclid(coords_[i], q_coords);
        return spaces::dist(cloud_[i], q, space_);
    }

    static double euclid(const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double d = a[k] - b[k];
            s += d * d;
        }
        return std::sqrt(s);
    }

private:
    const Cloud& cloud_;
    const Space& space_;
    bool euclidean_ = false;
    std::vector<std::vector<double>> coords_;
};

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) std::swap(a, b);
        parent_[a] = b;  // smaller index is the root
    }

private:
    std::vector<std::size_t> parent_;
};

bool exact_context(const Space& space, const Point& p) { return space.exact() && dynamics::is_exact(p); }

}  // namespace

// ---------------------------------------------------------------------------

Cloud epsilon_net(const Cloud& cloud, double eps, const Space& space) {
    if (!(eps > 0.0)) throw std::invalid_argument("epsilon_net: eps must be positive");
    CloudMetric metric(cloud, space);
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const bool covered = std::any_of(reps.begin(), reps.end(), [&](std::size_t r) { return metric(r, i) <= eps; });
        if (!covered) reps.push_back(i);
    }
    Cloud net;
    net.reserve(reps.size());
    for (std::size_t r : reps) net.push_back(cloud[r]);
    return net;
}

OmegaEstimate omega_estimate(const Orbit& o, std::size_t burn_in, double eps) {
    if (burn_in >= o.points.size()) throw std::invalid_argument("omega_estimate: burn-in leaves an empty tail");
    OmegaEstimate est;
    est.source = o.map_id;
    est.space = o.space;
    est.burn_in = burn_in;
    est.epsilon = eps;
    est.tail.assign(o.points.begin() + static_cast<std::ptrdiff_t>(burn_in), o.points.end());
    est.net = epsilon_net(est.tail, eps, o.space);
    return est;
}

// ---------------------------------------------------------------------------

Cloud sample_target(const Target& target, std::size_t sampling, const Space& space) {
    if (sampling < 2) throw std::invalid_argument("sample_target: need at least 2 samples");
    Cloud out;
    out.reserve(sampling);
    if (const auto* seg = std::get_if<Segment>(&target)) {
        if (space.kind == SpaceKind::dendrite) {
            if (seg->from[1] != 0.0 || seg->to[1] != 0.0) {
                throw std::invalid_argument("sample_target: dendrite segments must lie on the baseline");
            }
            const Rational x0(seg->from[0]);
            const Rational x1(seg->to[0]);
            for (std::size_t i = 0; i < sampling; ++i) {
                const Rational s(static_cast<long long>(i), static_cast<long long>(sampling - 1));
                out.emplace_back(DendritePoint::baseline(x0 + s * (x1 - x0)));
            }
            return out;
        }
        if (space.kind != SpaceKind::disk && space.kind != SpaceKind::square) {
            throw std::invalid_argument("sample_target: segments need a planar space");
        }
        for (std::size_t i = 0; i < sampling; ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(sampling - 1);
            EuclidPoint p{{seg->from[0] + s * (seg->to[0] - seg->from[0]), seg->from[1] + s * (seg->to[1] - seg->from[1])},
                          space.kind == SpaceKind::disk ? EuclidTag::disk : EuclidTag::square,
                          std::nullopt};
            p.validate();
            out.emplace_back(std::move(p));
        }
        return out;
    }
    const auto& circ = std::get<CircleTarget>(target);
    if (space.kind != SpaceKind::disk && space.kind != SpaceKind::square) {
        throw std::invalid_argument("sample_target: circles need a planar space");
    }
    for (std::size_t i = 0; i < sampling; ++i) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(sampling);
        EuclidPoint p{{circ.center[0] + circ.radius * std::cos(a), circ.center[1] + circ.radius * std::sin(a)},
                      space.kind == SpaceKind::disk ? EuclidTag::disk : EuclidTag::square,
                      std::nullopt};
        for (double& c : p.coords) {
            if (space.kind == SpaceKind::square) c = std::clamp(c, 0.0, 1.0);
        }
        p.validate();
        out.emplace_back(std::move(p));
    }
    return out;
}

double hausdorff(const Cloud& a, const Cloud& b, const Space& space) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: empty point set");
    CloudMetric ma(a, space);
    CloudMetric mb(b, space);
    auto directed = [&](const CloudMetric& from, const Cloud& from_pts, const CloudMetric& to, const Cloud& to_pts) {
        double worst = 0.0;
        for (std::size_t i = 0; i < from.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < to.size() && best > worst; ++j) {
                const double d = from.euclidean() ? CloudMetric::euclid(from.coords(i), to.coords(j))
                                                  : spaces::dist(from_pts[i], to_pts[j], space);
                best = std::min(best, d);
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(ma, a, mb, b), directed(mb, b, ma, a));
}

double hausdorff(const Cloud& a, const Target& target, std::size_t sampling, const Space& space) {
    return hausdorff(a, sample_target(target, sampling, space), space);
}

// ---------------------------------------------------------------------------

PeriodReport detect_periodic(const DynamicalMap& m, const Point& p, std::size_t n_max, double tol) {
    if (n_max == 0) throw std::invalid_argument("detect_periodic: n_max must be >= 1");
    PeriodReport rep{p, std::nullopt, n_max, tol, exact_context(m.space(), p)};
    Point x = p;
    for (std::size_t k = 1; k <= n_max; ++k) {
        x = m(x);
        const bool back = rep.exact ? spaces::same_point(x, p) : spaces::dist(x, p, m.space()) <= tol;
        if (back) {
            rep.period = k;
            break;
        }
    }
    if (rep.exact) rep.tolerance = 0.0;
    return rep;
}

// ---------------------------------------------------------------------------

ComponentPartition components(const Cloud& cloud, double eps, const Space& space) {
    if (cloud.empty()) throw std::invalid_argument("components: empty cloud");
    if (!(eps > 0.0)) throw std::invalid_argument("components: eps must be positive");
    CloudMetric metric(cloud, space);
    UnionFind uf(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (std::size_t j = i + 1; j < cloud.size(); ++j) {
            if (metric(i, j) <= eps) uf.unite(i, j);
        }
    }
    ComponentPartition part{cloud, space, eps, std::vector<std::size_t>(cloud.size()), 0};
    std::vector<std::size_t> label_of_root(cloud.size(), std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const std::size_t root = uf.find(i);
        if (label_of_root[root] == std::numeric_limits<std::size_t>::max()) label_of_root[root] = part.count++;
        part.labels[i] = label_of_root[root];
    }
    return part;
}

InducedMap induced_map(const DynamicalMap& m, const ComponentPartition& part, double slack) {
    CloudMetric metric(part.points, part.space);
    const double reach = part.epsilon + slack;
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    std::vector<std::set<std::size_t>> targets(part.count);
    InducedMap im;
    for (std::size_t i = 0; i < part.points.size(); ++i) {
        const Point image = m(part.points[i]);
        const auto image_coords = metric.euclidean() ? spaces::flat_coords(image) : std::vector<double>{};
        double best = std::numeric_limits<double>::infinity();
        std::size_t nearest = kNone;
        for (std::size_t j = 0; j < part.points.size(); ++j) {
            const double d = metric.to(j, image, image_coords);
            if (d < best) {
                best = d;
                nearest = j;
            }
        }
        if (best > reach) {
            im.straddles.push_back({part.labels[i], part.points[i], image, "image escapes the cloud"});
            continue;
        }
        targets[part.labels[i]].insert(part.labels[nearest]);
    }

    // distance between two components as point sets
    auto set_distance = [&](std::size_t a, std::size_t b) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < part.points.size(); ++i) {
            if (part.labels[i] != a) continue;
            for (std::size_t j = 0; j < part.points.size(); ++j) {
                if (part.labels[j] == b) best = std::min(best, metric(i, j));
            }
        }
        return best;
    };

    im.table.assign(part.count, kNone);
    for (std::size_t c = 0; c < part.count; ++c) {
        const auto& t = targets[c];
        if (t.empty()) {
            im.well_defined = false;
            continue;
        }
        im.table[c] = *t.begin();
        for (auto it = std::next(t.begin()); it != t.end(); ++it) {
            if (set_distance(*t.begin(), *it) > slack) {
                // report one member of c whose image lands in the second component
                for (std::size_t i = 0; i < part.points.size(); ++i) {
                    if (part.labels[i] != c) continue;
                    im.straddles.push_back({c, part.points[i], m(part.points[i]),
                                            "component images land in components " + std::to_string(*t.begin()) +
                                                " and " + std::to_string(*it)});
                    break;
                }
            }
        }
    }
    if (!im.straddles.empty()) im.well_defined = false;
    return im;
}

CycleReport verify_cycle(const InducedMap& im) {
    CycleReport rep;
    const std::size_t n = im.table.size();
    if (n == 0) {
        rep.witness = "empty component table";
        return rep;
    }
    if (!im.well_defined) {
        rep.witness = "induced map is not well defined";
        return rep;
    }
    std::vector<std::size_t> hits(n, 0);
    for (std::size_t c = 0; c < n; ++c) {
        if (im.table[c] >= n) {
            rep.witness = "component " + std::to_string(c) + " has no image";
            return rep;
        }
        ++hits[im.table[c]];
    }
    for (std::size_t c = 0; c < n; ++c) {
        if (hits[c] != 1) {
            rep.witness = "component " + std::to_string(c) + " has " + std::to_string(hits[c]) +
                          " preimages; not a permutation";
            return rep;
        }
    }
    std::vector<bool> seen(n, false);
    std::size_t first_length = 0;
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start]) continue;
        ++rep.cycles;
        std::size_t len = 0;
        for (std::size_t c = start; !seen[c]; c = im.table[c]) {
            seen[c] = true;
            ++len;
        }
        if (rep.cycles == 1) first_length = len;
    }
    rep.single_cycle = rep.cycles == 1;
    if (rep.single_cycle) {
        rep.length = first_length;
    } else {
        rep.witness = std::to_string(rep.cycles) + " disjoint cycles; component 0 lies on a cycle of length " +
                      std::to_string(first_length);
    }
    return rep;
}

// ---------------------------------------------------------------------------

Cloud distinct_points(const Cloud& L) {
    // equal points share flat coordinates, so bucket on their hash first
    Cloud out;
    std::unordered_map<std::size_t, std::vector<std::size_t>> buckets;
    for (const Point& p : L) {
        std::size_t key = 0;
        for (double c : spaces::flat_coords(p)) boost::hash_combine(key, std::hash<double>{}(c));
        auto& bucket = buckets[key];
        const bool dup =
            std::any_of(bucket.begin(), bucket.end(), [&](std::size_t i) { return spaces::same_point(p, out[i]); });
        if (dup) continue;
        bucket.push_back(out.size());
        out.push_back(p);
    }
    return out;
}

std::optional<std::vector<std::size_t>> sharkovsky_witness(const Cloud& input, const DynamicalMap& m) {
    const Cloud L = distinct_points(input);
    const std::size_t n = L.size();
    if (n == 0) throw std::invalid_argument("sharkovsky_check: empty set");

    std::vector<std::size_t> image(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point fx = m(L[i]);
        auto it = std::find_if(L.begin(), L.end(), [&](const Point& q) { return spaces::same_point(fx, q); });
        if (it == L.end()) {
            throw std::invalid_argument("sharkovsky_check: f(L) is not contained in L; image of " + spaces::describe(L[i]) +
                                        " is " + spaces::describe(fx));
        }
        image[i] = static_cast<std::size_t>(it - L.begin());
    }

    // F meets f(L \ F)?
    std::vector<char> in_f(n);
    std::vector<char> hit(n);
    auto meets = [&]() {
        std::fill(hit.begin(), hit.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_f[i]) hit[image[i]] = 1;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (in_f[i] && hit[i]) return true;
        }
        return false;
    };
    auto members = [&]() {
        std::vector<std::size_t> f;
        for (std::size_t i = 0; i < n; ++i) {
            if (in_f[i]) f.push_back(i);
        }
        return f;
    };

    if (n <= 12) {
        const std::uint32_t full = (1u << n) - 1;
        for (std::uint32_t mask = 1; mask < full; ++mask) {
            for (std::size_t i = 0; i < n; ++i) in_f[i] = (mask >> i) & 1u;
            if (!meets()) return members();
        }
        return std::nullopt;
    }

    std::mt19937_64 rng(0x5eed5eedULL);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 10'000; ++trial) {
        std::size_t size = 0;
        for (std::size_t i = 0; i < n; ++i) {
            in_f[i] = coin(rng) ? 1 : 0;
            size += static_cast<std::size_t>(in_f[i]);
        }
        if (size == 0 || size == n) continue;
        if (!meets()) return members();
    }
    return std::nullopt;
}

bool sharkovsky_check(const Cloud& L, const DynamicalMap& m) { return !sharkovsky_witness(L, m).has_value(); }

// ---------------------------------------------------------------------------

Classification classify_totally_periodic(const DynamicalMap& m, const OmegaEstimate& est, std::size_t n_max,
                                         double tol) {
    Classification c;
    for (const Point& p : est.net) {
        const PeriodReport rep = detect_periodic(m, p, n_max, tol);
        if (!rep.period) {
            c.kind = PeriodicClass::not_certified;
            c.max_period = 0;
            c.witness = p;
            return c;
        }
        c.max_period = std::max(c.max_period, *rep.period);
    }
    c.kind = est.net.empty() ? PeriodicClass::not_certified : PeriodicClass::totally_periodic;
    return c;
}

const char* class_name(PeriodicClass c) {
    return c == PeriodicClass::totally_periodic ? "TotallyPeriodic" : "NotCertified";
}

}  // namespace omegalab::omega
