#pragma once

#include "hessmetric/hessian.hpp"
#include "hessmetric/profile.hpp"

namespace fixtures {

using hessmetric::core::Coordinate;
using hessmetric::core::RadialProfile;

// The three profiles tabulated by tests/reference/derive.py.
inline RadialProfile A(Coordinate c) { return hessmetric::core::make_profile({-2.0, -1.0}, {0.0, 0.5, 1.5}, c); }
inline RadialProfile B(Coordinate c) { return hessmetric::core::make_profile({-1.0, -0.25}, {0.0, 1.0, 4.0}, c); }
inline RadialProfile W(Coordinate c) { return hessmetric::core::make_profile({-3.0}, {0.0, 0.25}, c); }

inline RadialProfile kink(double slope, double a, Coordinate c) {
    return hessmetric::core::make_profile({a / slope}, {0.0, slope}, c);
}

}  // namespace fixtures
