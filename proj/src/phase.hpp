#pragma once

#include <cmath>
#include <numbers>

namespace kerr::detail {

// Phases are kept as fractions of a full turn. multiple * cycles is reduced to
// [-1/2, 1/2] in long double before conversion, so integer multiples of t_rev
// land on exactly zero and large multiples keep their low-order bits.
inline double reduced_turns(long double multiple, long double cycles) {
    long double v = multiple * cycles;
    v -= std::nearbyint(v);
    return static_cast<double>(v);
}

inline double turn_angle(long double multiple, long double cycles) {
    return 2.0 * std::numbers::pi * reduced_turns(multiple, cycles);
}

}  // namespace kerr::detail
