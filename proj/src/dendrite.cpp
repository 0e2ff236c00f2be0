#include "omegalab/dendrite.hpp"

#include <stdexcept>

namespace omegalab::dendrite {

Rational split_height(std::uint64_t k) { return Rational(1, 2 * spaces::level_of(k)); }

DendritePoint f0_eval(const DendritePoint& p) {
    if (p.on_baseline()) return p;

    const std::uint64_t k = p.arc_index();
    const Rational& h = p.value();
    const Rational c = split_height(k);

    if (h <= c) {
        const Rational from = spaces::dendrite_anchor(k);
        const Rational to = spaces::dendrite_anchor(k + 1);
        return DendritePoint::baseline(from + (h / c) * (to - from));
    }
    const Rational top = Rational(1, spaces::level_of(k + 1));
    return DendritePoint::arc(k + 1, ((h - c) / c) * top);
}

std::vector<DendritePoint> f0_orbit(const DendritePoint& p, std::size_t steps) {
    if (steps == 0) throw std::invalid_argument("f0_orbit: need at least one step");
    std::vector<DendritePoint> out;
    out.reserve(steps + 1);
    out.push_back(p);
    for (std::size_t i = 0; i < steps; ++i) out.push_back(f0_eval(out.back()));
    return out;
}

bool f0_fixed(const DendritePoint& p) { return p.on_baseline(); }

DendritePoint snap_to_baseline(const DendritePoint& p) {
    if (p.on_baseline()) return p;
    return DendritePoint::baseline(spaces::dendrite_anchor(p.arc_index()));
}

}  // namespace omegalab::dendrite
