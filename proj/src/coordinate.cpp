#include "hessmetric/coordinate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hessmetric/error.hpp"

namespace hessmetric::core {

void validate(const Coordinate& coord) {
    if (coord.n < 2) fail(ErrorCode::Domain, "dimension n must be at least 2, got " + std::to_string(coord.n));
    if (coord.q < 1 || coord.q > coord.n)
        fail(ErrorCode::Domain, "order q must satisfy 1 <= q <= n, got q=" + std::to_string(coord.q) +
                                    " n=" + std::to_string(coord.n));
}

double power_exponent(const Coordinate& coord) {
    if (coord.q == coord.n) return 0.0;
    return 2.0 * coord.n / coord.q - 2.0;
}

double tau_of_radius(double s, const Coordinate& coord) {
    validate(coord);
    if (!(s > 0.0 && s <= 1.0)) fail(ErrorCode::Domain, "radius must lie in (0,1], got " + std::to_string(s));
    if (s == 1.0) return 0.0;
    if (coord.q == coord.n) return std::log(s);
    return -std::expm1(-power_exponent(coord) * std::log(s));
}

double radius_of_tau(double tau, const Coordinate& coord) {
    validate(coord);
    if (std::isnan(tau)) fail(ErrorCode::Domain, "tau is NaN");
    if (tau == -std::numeric_limits<double>::infinity()) return 0.0;
    if (coord.q == coord.n) return std::exp(tau);
    return std::exp(-std::log1p(-tau) / power_exponent(coord));
}

TauDerivative tau_derivative(const Coordinate& coord) {
    validate(coord);
    if (coord.q == coord.n) return {1.0, 1.0};
    double k = power_exponent(coord);
    return {k, k + 1.0};
}

double transport_tau(double tau, const Coordinate& from, const Coordinate& to) {
    if (from == to) return tau;
    if (tau == 0.0) return 0.0;
    if (tau == -std::numeric_limits<double>::infinity()) return tau;
    validate(from);
    validate(to);
    if (from.n != to.n) fail(ErrorCode::Coordinate, "coordinates belong to different dimensions");
    // ln s is the common currency; log1p keeps precision near the boundary.
    double log_s = from.q == from.n ? tau : -std::log1p(-tau) / power_exponent(from);
    if (to.q == to.n) return log_s;
    return -std::expm1(-power_exponent(to) * log_s);
}

}  // namespace hessmetric::core
