#pragma once

#include <functional>
#include <vector>

#include "hessmetric/energy.hpp"
#include "hessmetric/legendre.hpp"

namespace hessmetric::geodesic {

using calculus::HessianParams;
using core::DualProfile;
using core::RadialProfile;

struct Geodesic {
    HessianParams params;
    // Endpoints as supplied, and their images in the order-m coordinate.
    RadialProfile source0;
    RadialProfile source1;
    RadialProfile g0;
    RadialProfile g1;
    DualProfile dual0;
    DualProfile dual1;
    int resolution = 2048;
    bool transported = false;
};

constexpr int kDefaultResolution = 2048;

Geodesic weak_geodesic(const RadialProfile& u0, const RadialProfile& u1, const HessianParams& params,
                       int resolution = kDefaultResolution);

RadialProfile geodesic_eval(const Geodesic& G, double t);

// c int (dg/dtau_m)^(m+1) dtau_m for a profile that is piecewise linear in its own coordinate.
double e1_transported(const RadialProfile& g, const HessianParams& params);

// E_w of an endpoint, in closed form even when the endpoint lives in another coordinate.
double reference_energy(const RadialProfile& source, const RadialProfile& w, const HessianParams& params);

struct AuditRow {
    double t;
    double energy;
    double distance_from_start;
    double linearity_deviation;
    double metric_deviation;
};

struct GeodesicAudit {
    std::vector<AuditRow> rows;
    double linearity_deviation = 0.0;
    double metric_deviation = 0.0;
    double energy_span = 0.0;
    double reference_distance = 0.0;
    bool lower_bound_holds = true;
    double lower_bound_worst = 0.0;
    // The bound with ||u_1|| in both terms, kept for comparison.
    bool literal_lower_bound_holds = true;
    bool capacity_continuity = true;
    std::vector<double> capacities_start;
    std::vector<double> capacities_end;
    bool boundary_membership = true;
};

GeodesicAudit geodesic_audit(const Geodesic& G, const std::vector<double>& ts, const RadialProfile& w);

struct ContractionRow {
    double t;
    double lhs;
    double rhs;
};

struct ContractionReport {
    std::vector<ContractionRow> rows;
    bool holds = true;
    double worst_excess = 0.0;
};

ContractionReport geodesic_contraction_check(const RadialProfile& u0, const RadialProfile& u1,
                                             const RadialProfile& v0, const RadialProfile& v1,
                                             const std::vector<double>& ts, const HessianParams& params,
                                             int resolution = kDefaultResolution);

struct MonotoneLimitResult {
    RadialProfile limit;
    int terms_used = 0;
    bool geodesics_decrease = true;
};

MonotoneLimitResult monotone_geodesic_limit(const std::function<RadialProfile(int)>& u_seq,
                                            const std::function<RadialProfile(int)>& v_seq, double t,
                                            const HessianParams& params, int max_terms = 80,
                                            double tol = 1e-12, int resolution = kDefaultResolution);

std::vector<double> uniform_grid(int points);

struct PerronComparison {
    double sup_distance = 0.0;
    int passes = 0;
    std::vector<double> residuals;
};

// Runs the grid Perron sweep on the (tau_m, t) plane between the geodesic endpoints and
// measures the largest gap to the Legendre interpolation at the grid nodes.
PerronComparison perron_comparison(const Geodesic& G, int grid_size, int t_points);

}  // namespace hessmetric::geodesic
