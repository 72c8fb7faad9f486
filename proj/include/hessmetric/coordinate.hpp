#pragma once

namespace hessmetric::core {

// Radial coordinate of order q in complex dimension n.
struct Coordinate {
    int n = 2;
    int q = 2;

    bool operator==(const Coordinate&) const = default;
};

void validate(const Coordinate& coord);

// Exponent k_q = 2n/q - 2 of the power coordinate; zero for the logarithmic case q = n.
double power_exponent(const Coordinate& coord);

double tau_of_radius(double s, const Coordinate& coord);
double radius_of_tau(double tau, const Coordinate& coord);

// d tau / ds = scale * s^(-power).
struct TauDerivative {
    double scale;
    double power;
};
TauDerivative tau_derivative(const Coordinate& coord);

// Maps a tau value of one coordinate to another through the shared radius.
double transport_tau(double tau, const Coordinate& from, const Coordinate& to);

}  // namespace hessmetric::core
