#pragma once

#include <functional>
#include <vector>

#include "hessmetric/hessian.hpp"

namespace hessmetric::energy {

using calculus::AtomicMeasure;
using calculus::HessianParams;
using core::RadialProfile;

struct EnergyTerm {
    int j;
    double value;
};

struct EnergyReport {
    double value = 0.0;
    std::vector<EnergyTerm> terms;
};

// E_w(u) = (1/(m+1)) sum_j int (u - w) (dd^c u)^j ^ (dd^c w)^(m-j) ^ beta^(n-m)
EnergyReport energy_Ew(const RadialProfile& u, const RadialProfile& w, const HessianParams& params);

double aubin_I(const RadialProfile& psi1, const RadialProfile& psi2, const HessianParams& params);

// Greatest convex nondecreasing minorant of the pointwise minimum.
RadialProfile rooftop_P(const std::vector<RadialProfile>& profiles);
RadialProfile rooftop_P(const RadialProfile& u, const RadialProfile& v);

// E_w(u) + E_w(v) - 2 E_w(P(u,v)).
double metric_d(const RadialProfile& u, const RadialProfile& v, const RadialProfile& w, const HessianParams& params);
// The same distance evaluated as E_P(u) + E_P(v) with P = P(u,v).
double metric_d(const RadialProfile& u, const RadialProfile& v, const HessianParams& params);

// e_1(u + v)^(1/(m+1)): the value of the norm functional at the decomposition (u, v).
double norm_energy_difference(const RadialProfile& u, const RadialProfile& v, const HessianParams& params);

double capacity_ball(double r, const HessianParams& params);

struct CapacityEntry {
    int j;
    // Largest tau of {|u_j - u| > eps} inside the compact ball; -inf when the set is empty.
    double outer_tau;
    double capacity;
};

struct CapacityReport {
    double eps;
    double k_radius;
    std::vector<CapacityEntry> entries;
};

CapacityReport capacity_convergence_check(const std::vector<RadialProfile>& sequence, const RadialProfile& limit,
                                          double eps, double k_radius, const HessianParams& params);

struct CauchyOptions {
    int max_terms = 80;
    double stabilization = 1e-10;
};

struct CauchyResult {
    RadialProfile limit;
    std::vector<double> increments;
    std::vector<double> distances_to_limit;
    int terms_used = 0;
    int outer_steps = 0;
};

// Limit of a d-Cauchy sequence u_1, u_2, ... through rooftops of its tails.
CauchyResult cauchy_limit(const std::function<RadialProfile(int)>& sequence, const HessianParams& params,
                          const CauchyOptions& options = {});

struct SegmentReport {
    std::vector<double> ts;
    std::vector<double> f;
    std::vector<double> fd_first;
    std::vector<double> fd_second;
    std::vector<double> closed_first;
    std::vector<double> closed_second;
    double scale = 0.0;
};

SegmentReport segment_report(const RadialProfile& u, const RadialProfile& v, const RadialProfile& w,
                             const std::vector<double>& ts, const HessianParams& params);

struct MinimumPrincipleReport {
    bool holds = true;
    double worst_excess = 0.0;
};

// Each atom of H_m(P(u,v)) is bounded by the atoms of H_m(u), H_m(v) on the respective contact sets.
MinimumPrincipleReport minimum_principle_check(const RadialProfile& u, const RadialProfile& v,
                                               const HessianParams& params, double contact_tol = 1e-10);

// int (v - min(u, v)) H_m(psi_t) with psi_t = P((1-t)u + tv, v).
double rooftop_path_derivative(const RadialProfile& u, const RadialProfile& v, double t, const HessianParams& params);

// max e_1/(m+1) over the profiles, the natural unit for energy tolerances.
double energy_scale(const std::vector<RadialProfile>& profiles, const HessianParams& params);

}  // namespace hessmetric::energy
