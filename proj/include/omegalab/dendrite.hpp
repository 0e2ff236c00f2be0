#pragma once

#include <cstddef>
#include <vector>

#include "omegalab/spaces.hpp"

namespace omegalab::dendrite {

using spaces::DendritePoint;
using spaces::Rational;

/// The map F0 on the dendrite. The baseline is pointwise fixed. Arc k is split
/// at its midpoint C_k = (a_k, 1/(2n)): the lower half [A_k, C_k] is stretched
/// affinely onto the baseline segment [A_k, A_{k+1}], the upper half
/// [C_k, B_k] onto the whole of arc k+1 with C_k -> A_{k+1} and B_k -> B_{k+1}.
/// All arithmetic is exact.
DendritePoint f0_eval(const DendritePoint& p);

/// [p, F0(p), ..., F0^steps(p)]. Throws when steps == 0.
std::vector<DendritePoint> f0_orbit(const DendritePoint& p, std::size_t steps);

/// True iff p lies on the baseline, which is exactly Fix(F0).
bool f0_fixed(const DendritePoint& p);

/// Height of the split point C_k on arc k.
Rational split_height(std::uint64_t k);

/// Foot of the arc carrying p (baseline points are their own foot).
DendritePoint snap_to_baseline(const DendritePoint& p);

}  // namespace omegalab::dendrite
