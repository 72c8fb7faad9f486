#pragma once

#include <vector>

#include "hessmetric/profile.hpp"

namespace hessmetric::core {

// Convex conjugate g*(p) = sup_{tau <= 0} (p tau - g(tau)) of a radial profile.
// Finite on [start, inf); knots p_1 < ... < p_K; on (p_{i-1}, p_i) the slope is
// slopes[i-1] (p_0 = start); g* vanishes for p >= p_K.
struct DualProfile {
    Coordinate coord{};
    double start = 0.0;
    std::vector<double> knots;
    std::vector<double> slopes;

    double domain_end() const { return knots.empty() ? start : knots.back(); }
};

DualProfile legendre(const RadialProfile& g);
RadialProfile legendre_inverse(const DualProfile& dual);

double evaluate_dual(const DualProfile& dual, double p);

// alpha * d0 + beta * d1 on the common domain.
DualProfile combine_dual(double alpha, const DualProfile& d0, double beta, const DualProfile& d1);

}  // namespace hessmetric::core
