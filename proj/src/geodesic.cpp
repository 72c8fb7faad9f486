#include "hessmetric/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hessmetric/error.hpp"
#include "hessmetric/oracle.hpp"

namespace hessmetric::geodesic {

namespace {

double int_pow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

RadialProfile to_interpolation_coordinate(const RadialProfile& u, const HessianParams& params, int resolution,
                                          bool& transported) {
    const int n = params.n;
    const int m = params.m;
    const int q = u.coordinate().q;
    if (u.coordinate().n != n) fail(ErrorCode::Coordinate, "endpoint dimension does not match the parameters");
    if (!u.is_bounded()) fail(ErrorCode::Membership, "endpoint has a positive leftmost slope (unbounded)");
    core::ReparameterizeOptions opt;
    opt.resolution = resolution;
    if (m == n) {
        if (q != n) fail(ErrorCode::Coordinate, "for m = n endpoints must be tagged with the order-n coordinate");
        transported = false;
        return u;
    }
    if (q == m) {
        // Must also be convex in the order-(m+1) coordinate.
        (void)core::reparameterize(u, m + 1, opt);
        transported = false;
        return u;
    }
    if (q == m + 1) {
        transported = true;
        return core::reparameterize(u, m, opt);
    }
    fail(ErrorCode::Coordinate, "endpoints must be tagged with order m or m+1, got q=" + std::to_string(q));
}

}  // namespace

std::vector<double> uniform_grid(int points) {
    std::vector<double> ts;
    for (int i = 0; i < points; ++i) ts.push_back(points == 1 ? 0.0 : static_cast<double>(i) / (points - 1));
    if (!ts.empty()) ts.back() = 1.0;
    return ts;
}

Geodesic weak_geodesic(const RadialProfile& u0, const RadialProfile& u1, const HessianParams& params,
                       int resolution) {
    calculus::validate(params);
    core::require_same_coordinate(u0, u1);
    Geodesic G;
    G.params = params;
    G.source0 = u0;
    G.source1 = u1;
    G.resolution = resolution;
    bool t0 = false;
    bool t1 = false;
    G.g0 = to_interpolation_coordinate(u0, params, resolution, t0);
    G.g1 = to_interpolation_coordinate(u1, params, resolution, t1);
    G.transported = t0 || t1;
    G.dual0 = core::legendre(G.g0);
    G.dual1 = core::legendre(G.g1);
    return G;
}

RadialProfile geodesic_eval(const Geodesic& G, double t) {
    if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::Domain, "geodesic parameter must lie in [0,1]");
    if (t == 0.0) return G.g0;
    if (t == 1.0) return G.g1;
    return core::legendre_inverse(core::combine_dual(1.0 - t, G.dual0, t, G.dual1));
}

double e1_transported(const RadialProfile& g, const HessianParams& params) {
    core::Coordinate from = g.coordinate();
    core::Coordinate to = params.coordinate();
    if (from == to) return calculus::e1_energy(g, params);
    if (!g.is_bounded()) fail(ErrorCode::UnboundedMass, "energy is infinite for unbounded profiles");
    auto dq = core::tau_derivative(from);
    auto dm = core::tau_derivative(to);
    const int m = params.m;
    double factor = int_pow(dq.scale, m + 1) / int_pow(dm.scale, m);
    double e = m * dm.power - (m + 1) * dq.power;
    double total = 0.0;
    const auto& bps = g.breakpoints();
    for (std::size_t i = 0; i < bps.size(); ++i) {
        double sigma = g.slopes()[i + 1];
        double sa = core::radius_of_tau(bps[i], from);
        double sb = i + 1 < bps.size() ? core::radius_of_tau(bps[i + 1], from) : 1.0;
        double piece = std::abs(e + 1.0) < 1e-14 ? std::log(sb / sa)
                                                 : (std::pow(sb, e + 1.0) - std::pow(sa, e + 1.0)) / (e + 1.0);
        total += int_pow(sigma, m + 1) * piece;
    }
    return params.c * factor * total;
}

double reference_energy(const RadialProfile& source, const RadialProfile& w, const HessianParams& params) {
    if (source.coordinate() == params.coordinate()) return energy::energy_Ew(source, w, params).value;
    return (calculus::e1_energy(w, params) - e1_transported(source, params)) / (params.m + 1);
}

GeodesicAudit geodesic_audit(const Geodesic& G, const std::vector<double>& ts, const RadialProfile& w) {
    const auto& params = G.params;
    GeodesicAudit audit;
    double escale = std::max(energy::energy_scale({G.g0, G.g1, w}, params), 1e-300);
    double e_ref0 = reference_energy(G.source0, w, params);
    double e_ref1 = reference_energy(G.source1, w, params);
    audit.energy_span = std::abs(e_ref1 - e_ref0);
    double span_denominator = audit.energy_span > 1e-12 * escale ? audit.energy_span : escale;

    bool ordered = core::pointwise_leq(G.source0, G.source1) || core::pointwise_leq(G.source1, G.source0);
    if (G.transported && ordered) audit.reference_distance = audit.energy_span;
    else audit.reference_distance = energy::metric_d(G.g0, G.g1, w, params);
    double d_denominator = audit.reference_distance > 1e-12 * escale ? audit.reference_distance : escale;

    std::vector<RadialProfile> phis;
    for (double t : ts) phis.push_back(geodesic_eval(G, t));

    for (std::size_t i = 0; i < ts.size(); ++i) {
        double t = ts[i];
        const RadialProfile& phi = phis[i];
        if (!phi.is_bounded() || core::evaluate(phi, 0.0) != 0.0) audit.boundary_membership = false;
        double e = energy::energy_Ew(phi, w, params).value;
        if (t == 0.0 && G.transported) e = e_ref0;
        if (t == 1.0 && G.transported) e = e_ref1;
        double lin = std::abs(e - ((1.0 - t) * e_ref0 + t * e_ref1)) / span_denominator;
        double d0 = energy::metric_d(G.g0, phi, w, params);
        double met = 0.0;
        for (std::size_t k = 0; k < i; ++k) {
            double d = energy::metric_d(phis[k], phi, w, params);
            met = std::max(met, std::abs(d - (t - ts[k]) * audit.reference_distance) / d_denominator);
        }
        audit.rows.push_back({t, e, d0, lin, met});
        audit.linearity_deviation = std::max(audit.linearity_deviation, lin);
        audit.metric_deviation = std::max(audit.metric_deviation, met);
    }

    // Endpoint lower bound on a dense tau grid.
    double norm0 = G.g0.sup_norm();
    double norm1 = G.g1.sup_norm();
    double left = -1.0;
    for (const auto& g : {G.g0, G.g1})
        if (!g.breakpoints().empty()) left = std::min(left, 1.5 * g.breakpoints().front() - 1.0);
    const int grid_points = 10000;
    double slack = 1e-10 * std::max({norm0, norm1, 1e-300});
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double t = ts[i];
        for (int k = 0; k < grid_points; ++k) {
            double tau = left * (1.0 - static_cast<double>(k) / (grid_points - 1));
            double phi = core::evaluate(phis[i], tau);
            double a = core::evaluate(G.g0, tau);
            double b = core::evaluate(G.g1, tau);
            double bound = std::max(a - t * norm1, b - (1.0 - t) * norm0);
            double literal = std::max(a - t * norm1, b - (1.0 - t) * norm1);
            if (phi < bound - slack) {
                audit.lower_bound_holds = false;
                audit.lower_bound_worst = std::max(audit.lower_bound_worst, bound - phi);
            }
            if (phi < literal - slack) audit.literal_lower_bound_holds = false;
        }
    }

    // Capacity continuity at both ends.
    double eps = 1e-3 * std::max({norm0, norm1, 1e-300});
    std::vector<RadialProfile> near0;
    std::vector<RadialProfile> near1;
    for (int k = 1; k <= 30; ++k) {
        double t = std::ldexp(1.0, -k);
        near0.push_back(geodesic_eval(G, t));
        near1.push_back(geodesic_eval(G, 1.0 - t));
    }
    auto c0 = energy::capacity_convergence_check(near0, G.g0, eps, 0.5, params);
    auto c1 = energy::capacity_convergence_check(near1, G.g1, eps, 0.5, params);
    for (const auto& e : c0.entries) audit.capacities_start.push_back(e.capacity);
    for (const auto& e : c1.entries) audit.capacities_end.push_back(e.capacity);
    auto settles = [](const std::vector<double>& caps) {
        double first = std::max(caps.front(), 1e-300);
        return caps.back() <= 1e-6 * first || caps.back() == 0.0;
    };
    audit.capacity_continuity = settles(audit.capacities_start) && settles(audit.capacities_end);
    return audit;
}

ContractionReport geodesic_contraction_check(const RadialProfile& u0, const RadialProfile& u1,
                                             const RadialProfile& v0, const RadialProfile& v1,
                                             const std::vector<double>& ts, const HessianParams& params,
                                             int resolution) {
    Geodesic gu = weak_geodesic(u0, u1, params, resolution);
    Geodesic gv = weak_geodesic(v0, v1, params, resolution);
    double d0 = energy::metric_d(gu.g0, gv.g0, params);
    double d1 = energy::metric_d(gu.g1, gv.g1, params);
    double scale = std::max(energy::energy_scale({gu.g0, gu.g1, gv.g0, gv.g1}, params), 1e-300);
    ContractionReport report;
    for (double t : ts) {
        double lhs = energy::metric_d(geodesic_eval(gu, t), geodesic_eval(gv, t), params);
        double rhs = (1.0 - t) * d0 + t * d1;
        report.rows.push_back({t, lhs, rhs});
        double excess = (lhs - rhs) / scale;
        report.worst_excess = std::max(report.worst_excess, excess);
        if (lhs > rhs + 1e-8 * scale) report.holds = false;
    }
    return report;
}

MonotoneLimitResult monotone_geodesic_limit(const std::function<RadialProfile(int)>& u_seq,
                                            const std::function<RadialProfile(int)>& v_seq, double t,
                                            const HessianParams& params, int max_terms, double tol,
                                            int resolution) {
    MonotoneLimitResult result;
    RadialProfile u_prev = u_seq(1);
    RadialProfile v_prev = v_seq(1);
    RadialProfile phi_prev = geodesic_eval(weak_geodesic(u_prev, v_prev, params, resolution), t);
    int quiet = 0;
    for (int j = 2; j <= max_terms; ++j) {
        RadialProfile u = u_seq(j);
        RadialProfile v = v_seq(j);
        double s = std::max({u_prev.sup_norm(), v_prev.sup_norm(), 1e-300});
        if (!core::pointwise_leq(u, u_prev, 1e-14 * s) || !core::pointwise_leq(v, v_prev, 1e-14 * s))
            fail(ErrorCode::Domain, "sequences must be pointwise nonincreasing (failed at j=" + std::to_string(j) + ")");
        RadialProfile phi = geodesic_eval(weak_geodesic(u, v, params, resolution), t);
        double scale = std::max({phi.sup_norm(), phi_prev.sup_norm(), 1e-300});
        if (!core::pointwise_leq(phi, phi_prev, 1e-10 * scale)) result.geodesics_decrease = false;
        double change = core::sup_distance(phi, phi_prev);
        u_prev = u;
        v_prev = v;
        phi_prev = phi;
        result.terms_used = j;
        quiet = change <= tol * scale ? quiet + 1 : 0;
        if (quiet >= 2) {
            result.limit = phi;
            return result;
        }
    }
    fail(ErrorCode::Iteration, "geodesic sequence did not stabilise within " + std::to_string(max_terms) + " terms");
}

PerronComparison perron_comparison(const Geodesic& G, int grid_size, int t_points) {
    double floor = oracle::adapted_floor({G.g0, G.g1});
    auto f0 = oracle::sample_radial(G.g0, grid_size, floor);
    auto f1 = oracle::sample_radial(G.g1, grid_size, floor);
    std::vector<double> ts = uniform_grid(t_points);
    auto R = oracle::perron_geodesic(f0, f1, ts, {G.params.m, 1e-7, 200});
    PerronComparison out;
    out.passes = R.passes;
    out.residuals = R.residuals;
    for (std::size_t j = 0; j < ts.size(); ++j) {
        RadialProfile phi = geodesic_eval(G, ts[j]);
        for (std::size_t i = 0; i < R.taus.size(); ++i)
            out.sup_distance = std::max(out.sup_distance, std::abs(core::evaluate(phi, R.taus[i]) - R.at(i, j)));
    }
    return out;
}

}  // namespace hessmetric::geodesic
