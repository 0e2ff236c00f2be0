#include "omegalab/spaces.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace omegalab::spaces {

namespace {

constexpr double kBallSlack = 1e-12;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Rational pow2_inverse(std::uint32_t n) {
    BigInt den = 1;
    den <<= n;
    return Rational(BigInt(1), den);
}

bool is_power_of_two(const BigInt& v, std::uint32_t& exponent) {
    if (v <= 0) return false;
    if ((v & (v - 1)) != 0) return false;
    exponent = static_cast<std::uint32_t>(boost::multiprecision::msb(v));
    return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    try {
        return Rational(text);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + text + "'");
    }
}

std::string to_string(const Rational& q) { return q.str(); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::uint32_t level_of(std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("level_of: arc index must be >= 1");
    return static_cast<std::uint32_t>(std::bit_width(k));
}

Rational dendrite_anchor(std::uint64_t k) {
    const std::uint32_t n = level_of(k);
    const std::uint64_t first = std::uint64_t{1} << (n - 1);
    const std::uint64_t pos = k - first;
    // odd numerators 1,3,...,2^n - 1; 2^(n-1) of them
    const std::uint64_t slot = (n % 2 == 0) ? pos : first - 1 - pos;
    const BigInt numerator = BigInt(2) * slot + 1;
    return Rational(numerator) * pow2_inverse(n);
}

std::optional<std::uint64_t> anchor_index(const Rational& t) {
    const BigInt num = boost::multiprecision::numerator(t);
    const BigInt den = boost::multiprecision::denominator(t);
    std::uint32_t n = 0;
    if (!is_power_of_two(den, n) || n == 0 || n > 63) return std::nullopt;
    if (num <= 0 || num >= den || (num & 1) == 0) return std::nullopt;
    const auto odd_slot = static_cast<std::uint64_t>((num - 1) / 2);
    const std::uint64_t first = std::uint64_t{1} << (n - 1);
    const std::uint64_t pos = (n % 2 == 0) ? odd_slot : first - 1 - odd_slot;
    return first + pos;
}

// ---------------------------------------------------------------------------

DendritePoint DendritePoint::baseline(Rational t) {
    if (t < 0 || t > 1) throw std::invalid_argument("baseline coordinate outside [0,1]: " + t.str());
    return DendritePoint(0, std::move(t));
}

DendritePoint DendritePoint::arc(std::uint64_t k, Rational h) {
    const std::uint32_t n = level_of(k);
    if (h < 0 || h * n > 1) {
        throw std::invalid_argument("arc height " + h.str() + " outside [0, 1/" + std::to_string(n) +
                                    "] on arc " + std::to_string(k));
    }
    if (h == 0) return baseline(dendrite_anchor(k));
    return DendritePoint(k, std::move(h));
}

DendritePoint DendritePoint::arc_tip(std::uint64_t k) { return arc(k, Rational(1, level_of(k))); }

Rational DendritePoint::abscissa() const { return on_baseline() ? value_ : dendrite_anchor(arc_); }

Rational DendritePoint::height() const { return on_baseline() ? Rational(0) : value_; }

std::string describe(const DendritePoint& p) {
    if (p.on_baseline()) return "Baseline(" + p.value().str() + ")";
    return "Arc(" + std::to_string(p.arc_index()) + ", " + p.value().str() + ")";
}

// ---------------------------------------------------------------------------

const char* tag_name(EuclidTag tag) {
    switch (tag) {
        case EuclidTag::interval: return "interval";
        case EuclidTag::circle: return "circle";
        case EuclidTag::disk: return "disk";
        case EuclidTag::ball: return "ball";
        case EuclidTag::square: return "square";
    }
    return "?";
}

EuclidPoint EuclidPoint::interval(Rational x) {
    EuclidPoint p{{to_double(x)}, EuclidTag::interval, std::move(x)};
    p.validate();
    return p;
}

EuclidPoint EuclidPoint::interval(double x) {
    EuclidPoint p{{x}, EuclidTag::interval, std::nullopt};
    p.validate();
    return p;
}

EuclidPoint EuclidPoint::circle_turn(Rational fraction) {
    // reduce into [0,1)
    const BigInt whole = boost::multiprecision::numerator(fraction) / boost::multiprecision::denominator(fraction);
    fraction -= Rational(whole);
    if (fraction < 0) fraction += 1;
    return EuclidPoint{{kTwoPi * to_double(fraction)}, EuclidTag::circle, std::move(fraction)};
}

EuclidPoint EuclidPoint::circle_angle(double angle) {
    double a = std::fmod(angle, kTwoPi);
    if (a < 0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return EuclidPoint{{a}, EuclidTag::circle, std::nullopt};
}

EuclidPoint EuclidPoint::disk(double x, double y) {
    EuclidPoint p{{x, y}, EuclidTag::disk, std::nullopt};
    p.validate();
    return p;
}

EuclidPoint EuclidPoint::ball(std::vector<double> coords) {
    EuclidPoint p{std::move(coords), EuclidTag::ball, std::nullopt};
    p.validate();
    return p;
}

EuclidPoint EuclidPoint::square(double x, double y) {
    EuclidPoint p{{x, y}, EuclidTag::square, std::nullopt};
    p.validate();
    return p;
}

double EuclidPoint::norm() const {
    double s = 0.0;
    for (double c : coords) s += c * c;
    return std::sqrt(s);
}

void EuclidPoint::validate() const {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument(std::string(tag_name(tag)) + " point: " + why);
    };
    for (double c : coords) {
        if (!std::isfinite(c)) fail("non-finite coordinate");
    }
    switch (tag) {
        case EuclidTag::interval:
            if (coords.size() != 1) fail("expected 1 coordinate");
            if (coords[0] < 0.0 || coords[0] > 1.0) fail("coordinate outside [0,1]");
            if (exact && (*exact < 0 || *exact > 1)) fail("exact coordinate outside [0,1]");
            break;
        case EuclidTag::circle:
            if (coords.size() != 1) fail("expected 1 angle");
            if (coords[0] < 0.0 || coords[0] >= kTwoPi) fail("angle outside [0, 2pi)");
            if (exact && (*exact < 0 || *exact >= 1)) fail("turn fraction outside [0,1)");
            break;
        case EuclidTag::disk:
            if (coords.size() != 2) fail("expected 2 coordinates");
            if (norm() > 1.0 + kBallSlack) fail("outside the unit disk");
            break;
        case EuclidTag::ball:
            if (coords.size() < 2) fail("expected at least 2 coordinates");
            if (norm() > 1.0 + kBallSlack) fail("outside the unit ball");
            break;
        case EuclidTag::square:
            if (coords.size() != 2) fail("expected 2 coordinates");
            for (double c : coords) {
                if (c < 0.0 || c > 1.0) fail("coordinate outside [0,1]");
            }
            break;
    }
}

// ---------------------------------------------------------------------------

CantorWord CantorWord::zeros(std::size_t depth) {
    if (depth == 0) throw std::invalid_argument("Cantor depth must be positive");
    return CantorWord{std::vector<bool>(depth, false)};
}

CantorWord CantorWord::parse(const std::string& bits) {
    if (bits.empty()) throw std::invalid_argument("empty Cantor word");
    CantorWord w;
    w.bits.reserve(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("Cantor word must be a 0/1 string");
        w.bits.push_back(c == '1');
    }
    return w;
}

std::string CantorWord::str() const {
    std::string s;
    s.reserve(bits.size());
    for (bool b : bits) s.push_back(b ? '1' : '0');
    return s;
}

// ---------------------------------------------------------------------------

bool operator==(const ProductPoint& a, const ProductPoint& b) { return a.factors == b.factors; }

bool operator==(const Point& a, const Point& b) {
    using Base = Point::variant;
    return static_cast<const Base&>(a) == static_cast<const Base&>(b);
}

ProductPoint make_product(std::vector<Point> factors) {
    if (factors.size() < 2) throw std::invalid_argument("a product point needs at least 2 factors");
    return ProductPoint{std::move(factors)};
}

Space Space::product(std::vector<Space> factors) {
    if (factors.size() < 2) throw std::invalid_argument("a product space needs at least 2 factors");
    return Space{SpaceKind::product, 0, std::move(factors)};
}

bool Space::exact() const {
    switch (kind) {
        case SpaceKind::dendrite:
        case SpaceKind::interval:
        case SpaceKind::circle:
        case SpaceKind::cantor:
            return true;
        case SpaceKind::product:
            return std::all_of(factors.begin(), factors.end(), [](const Space& s) { return s.exact(); });
        default:
            return false;
    }
}

std::string describe(const Space& s) {
    switch (s.kind) {
        case SpaceKind::dendrite: return "dendrite";
        case SpaceKind::interval: return "interval";
        case SpaceKind::circle: return "circle";
        case SpaceKind::disk: return "disk";
        case SpaceKind::ball: return "ball(" + std::to_string(s.dimension) + ")";
        case SpaceKind::square: return "square";
        case SpaceKind::cantor: return "cantor(" + std::to_string(s.dimension) + ")";
        case SpaceKind::product: {
            std::string out = "product(";
            for (std::size_t i = 0; i < s.factors.size(); ++i) {
                if (i) out += ", ";
                out += describe(s.factors[i]);
            }
            return out + ")";
        }
    }
    return "?";
}

std::string describe(const Point& p) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, DendritePoint>) {
                return describe(v);
            } else if constexpr (std::is_same_v<T, EuclidPoint>) {
                std::ostringstream os;
                os.precision(17);
                os << tag_name(v.tag) << "(";
                if (v.exact) {
                    os << v.exact->str();
                } else {
                    for (std::size_t i = 0; i < v.coords.size(); ++i) os << (i ? ", " : "") << v.coords[i];
                }
                os << ")";
                return os.str();
            } else if constexpr (std::is_same_v<T, CantorWord>) {
                return "cantor(" + v.str() + ")";
            } else {
                std::string out = "(";
                for (std::size_t i = 0; i < v.factors.size(); ++i) {
                    if (i) out += ", ";
                    out += describe(v.factors[i]);
                }
                return out + ")";
            }
        },
        p);
}

bool belongs(const Point& p, const Space& s) {
    switch (s.kind) {
        case SpaceKind::dendrite:
            return std::holds_alternative<DendritePoint>(p);
        case SpaceKind::cantor: {
            const auto* w = std::get_if<CantorWord>(&p);
            return w && w->depth() == s.dimension;
        }
        case SpaceKind::product: {
            const auto* pp = std::get_if<ProductPoint>(&p);
            if (!pp || pp->factors.size() != s.factors.size()) return false;
            for (std::size_t i = 0; i < s.factors.size(); ++i) {
                if (!belongs(pp->factors[i], s.factors[i])) return false;
            }
            return true;
        }
        default: {
            const auto* e = std::get_if<EuclidPoint>(&p);
            if (!e) return false;
            EuclidTag want{};
            switch (s.kind) {
                case SpaceKind::interval: want = EuclidTag::interval; break;
                case SpaceKind::circle: want = EuclidTag::circle; break;
                case SpaceKind::disk: want = EuclidTag::disk; break;
                case SpaceKind::ball: want = EuclidTag::ball; break;
                default: want = EuclidTag::square; break;
            }
            // a 2-ball and the disk are the same space
            const bool tag_ok = e->tag == want || (s.kind == SpaceKind::ball && s.dimension == 2 &&
                                                   e->tag == EuclidTag::disk);
            if (!tag_ok || e->coords.size() != s.dimension) return false;
            try {
                e->validate();
            } catch (const std::invalid_argument&) {
                return false;
            }
            return true;
        }
    }
}

void require_member(const Point& p, const Space& s, const char* context) {
    if (!belongs(p, s)) {
        throw std::invalid_argument(std::string(context) + ": point " + describe(p) + " is not in " + describe(s));
    }
}

bool same_point(const Point& a, const Point& b) {
    if (a.index() != b.index()) return false;
    if (const auto* ea = std::get_if<EuclidPoint>(&a)) {
        const auto& eb = std::get<EuclidPoint>(b);
        if (ea->tag != eb.tag) return false;
        if (ea->exact && eb.exact) return *ea->exact == *eb.exact;
        return ea->coords == eb.coords;
    }
    if (const auto* pa = std::get_if<ProductPoint>(&a)) {
        const auto& pb = std::get<ProductPoint>(b);
        if (pa->factors.size() != pb.factors.size()) return false;
        for (std::size_t i = 0; i < pa->factors.size(); ++i) {
            if (!same_point(pa->factors[i], pb.factors[i])) return false;
        }
        return true;
    }
    return a == b;
}

EuclidPoint dendrite_embed(const DendritePoint& p) {
    return EuclidPoint{{to_double(p.abscissa()), to_double(p.height())}, EuclidTag::square, std::nullopt};
}

namespace {

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double circle_dist(const EuclidPoint& a, const EuclidPoint& b) {
    if (a.exact && b.exact) {
        Rational d = *a.exact - *b.exact;
        if (d < 0) d = -d;
        if (d > Rational(1, 2)) d = 1 - d;
        return kTwoPi * to_double(d);
    }
    double d = std::fabs(a.coords[0] - b.coords[0]);
    return std::min(d, kTwoPi - d);
}

}  // namespace

double dist(const Point& p, const Point& q, const Space& space) {
    require_member(p, space, "dist");
    require_member(q, space, "dist");
    switch (space.kind) {
        case SpaceKind::dendrite: {
            const auto& a = std::get<DendritePoint>(p);
            const auto& b = std::get<DendritePoint>(q);
            if (a == b) return 0.0;
            const Rational dx = a.abscissa() - b.abscissa();
            const Rational dy = a.height() - b.height();
            return std::sqrt(to_double(dx * dx + dy * dy));
        }
        case SpaceKind::circle:
            return circle_dist(std::get<EuclidPoint>(p), std::get<EuclidPoint>(q));
        case SpaceKind::interval: {
            const auto& a = std::get<EuclidPoint>(p);
            const auto& b = std::get<EuclidPoint>(q);
            if (a.exact && b.exact) {
                Rational d = *a.exact - *b.exact;
                return std::fabs(to_double(d));
            }
            return std::fabs(a.coords[0] - b.coords[0]);
        }
        case SpaceKind::cantor: {
            const auto& a = std::get<CantorWord>(p);
            const auto& b = std::get<CantorWord>(q);
            for (std::size_t i = 0; i < a.bits.size(); ++i) {
                if (a.bits[i] != b.bits[i]) return std::ldexp(1.0, -static_cast<int>(i + 1));
            }
            return 0.0;
        }
        case SpaceKind::product: {
            const auto& a = std::get<ProductPoint>(p);
            const auto& b = std::get<ProductPoint>(q);
            double m = 0.0;
            for (std::size_t i = 0; i < space.factors.size(); ++i) {
                m = std::max(m, dist(a.factors[i], b.factors[i], space.factors[i]));
            }
            return m;
        }
        default:
            return euclid(std::get<EuclidPoint>(p).coords, std::get<EuclidPoint>(q).coords);
    }
}

std::vector<double> flat_coords(const Point& p) {
    return std::visit(
        [](const auto& v) -> std::vector<double> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, DendritePoint>) {
                return dendrite_embed(v).coords;
            } else if constexpr (std::is_same_v<T, EuclidPoint>) {
                if (v.exact && v.tag == EuclidTag::interval) return {to_double(*v.exact)};
                return v.coords;
            } else if constexpr (std::is_same_v<T, CantorWord>) {
                double x = 0.0;
                for (std::size_t i = v.bits.size(); i-- > 0;) x = 0.5 * (x + (v.bits[i] ? 1.0 : 0.0));
                return {x};
            } else {
                std::vector<double> out;
                for (const auto& f : v.factors) {
                    auto c = flat_coords(f);
                    out.insert(out.end(), c.begin(), c.end());
                }
                return out;
            }
        },
        p);
}

}  // namespace omegalab::spaces
