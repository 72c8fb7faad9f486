#pragma once

#include <string>
#include <vector>

#include "hessmetric/profile.hpp"

namespace hessmetric::calculus {

using core::RadialProfile;

struct HessianParams {
    int n = 2;
    int m = 2;
    double c = 0.0;

    core::Coordinate coordinate() const { return {n, m}; }
};

// Mass of the unit-slope kink max(tau_m, -1). Exact for m = n, measured by the grid oracle otherwise.
double hessian_constant(int n, int m);
// (4 pi)^n ((n - m)/m)^m, the value the measured constant converges to for m < n.
double hessian_constant_closed_form(int n, int m);
HessianParams make_params(int n, int m);
void validate(const HessianParams& params);

struct Atom {
    double tau;
    double mass;
};

struct AtomicMeasure {
    std::vector<Atom> atoms;

    double total() const;
    bool empty() const { return atoms.empty(); }
};

// Sum of measures; atoms closer than tol (absolute) share a location.
AtomicMeasure merge_measures(const AtomicMeasure& a, const AtomicMeasure& b, double tol = 1e-12);

AtomicMeasure hessian_measure(const RadialProfile& g, const HessianParams& params);

// Mixed measure dd^c g_1 ^ ... ^ dd^c g_m ^ beta^(n-m) by polarization of pure powers.
AtomicMeasure mixed_measure(const std::vector<RadialProfile>& factors, const HessianParams& params);

// sum_k (u - w)(tau_k) mass_k
double integrate(const RadialProfile& u, const RadialProfile& w, const AtomicMeasure& mu);
double integrate(const RadialProfile& h, const AtomicMeasure& mu);

double e1_energy(const RadialProfile& g, const HessianParams& params);

// Mass of the measure restricted to the atoms where pred(tau) holds.
template <typename Pred>
double restricted_mass(const AtomicMeasure& mu, Pred pred) {
    double total = 0.0;
    for (const auto& a : mu.atoms)
        if (pred(a.tau)) total += a.mass;
    return total;
}

}  // namespace hessmetric::calculus
