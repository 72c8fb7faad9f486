#include <algorithm>
#include <cmath>

#include "hessmetric/energy.hpp"
#include "hessmetric/envelope.hpp"
#include "hessmetric/error.hpp"
#include "hessmetric/geodesic.hpp"
#include "hessmetric/harness.hpp"
#include "hessmetric/io.hpp"
#include "hessmetric/oracle.hpp"

namespace hessmetric::harness {

namespace {

using io::format_double;

double tolerance_for(const Scenario& s, const RunOptions& o, double fallback) {
    if (o.tolerance) return *o.tolerance;
    if (s.tolerance) return *s.tolerance;
    return fallback;
}

// Compares against a scenario expectation when one is given, otherwise records the value.
void expect_or_info(Report& report, const Scenario& s, const std::string& label, const std::string& inputs,
                    double actual, double tol) {
    auto it = s.expect.find(label);
    if (it != s.expect.end()) report.compare(label, inputs, it->second, actual, tol, "scenario");
    else report.info(label, inputs, actual, "exact");
}

std::vector<std::string> order_m_names(const Scenario& s) {
    std::vector<std::string> names;
    for (const auto& [name, g] : s.profiles)
        if (g.coordinate() == s.params.coordinate()) names.push_back(name);
    return names;
}

void require_pairs(const Scenario& s, const char* command) {
    if (s.pairs.empty()) fail(ErrorCode::Usage, std::string(command) + " needs a nonempty 'pairs' list in the scenario");
}

}  // namespace

Report run_energy(const Scenario& s, const RunOptions& o) {
    Report report("energy");
    const auto& P = s.params;
    double tol = tolerance_for(s, o, 1e-9);
    RadialProfile w = s.weight_profile();
    RadialProfile zero(P.coordinate());
    std::string wname = s.weight ? *s.weight : "0";
    Table& measure = report.table("measure", {"profile", "tau", "mass"});
    Table& terms = report.table("terms", {"profile", "j", "term"});
    for (const auto& name : order_m_names(s)) {
        const RadialProfile& u = s.profile(name);
        if (!u.is_bounded()) {
            report.info("e1(" + name + ")", name, std::numeric_limits<double>::infinity(), "unbounded profile");
            continue;
        }
        double e1 = calculus::e1_energy(u, P);
        expect_or_info(report, s, "e1(" + name + ")", name, e1, tol);
        auto E = energy::energy_Ew(u, w, P);
        expect_or_info(report, s, "E_w(" + name + ")", name + ";w=" + wname, E.value, tol);
        double e0 = energy::energy_Ew(u, zero, P).value;
        report.compare("E_0(" + name + ")", name, -e1 / (P.m + 1), e0, tol, "identity E_0=-e1/(m+1)");
        if (s.weight) {
            double back = energy::energy_Ew(w, u, P).value;
            report.compare("E_w(" + name + ")+E_" + name + "(w)", name + ";w=" + wname, 0.0, E.value + back,
                           tol * std::max(1.0, std::abs(E.value)), "identity E_w(u)=-E_u(w)");
        }
        for (const auto& a : calculus::hessian_measure(u, P).atoms)
            measure.add({name, format_double(a.tau), format_double(a.mass)});
        for (const auto& t : E.terms) terms.add({name, std::to_string(t.j), format_double(t.value)});
    }
    if (s.weight) {
        double ww = energy::energy_Ew(w, w, P).value;
        report.compare("E_w(w)", wname, 0.0, ww, tol, "identity E_w(w)=0");
    }
    return report;
}

Report run_metric(const Scenario& s, const RunOptions& o) {
    require_pairs(s, "metric");
    Report report("metric");
    const auto& P = s.params;
    double tol = tolerance_for(s, o, 1e-9);
    RadialProfile w = s.weight_profile();
    Table& roof = report.table("rooftop", {"pair", "breakpoint", "slope_right"});
    for (const auto& [a, b] : s.pairs) {
        const RadialProfile& u = s.profile(a);
        const RadialProfile& v = s.profile(b);
        std::string in = a + "," + b;
        double scale = std::max(energy::energy_scale({u, v, w}, P), 1e-300);
        double d = energy::metric_d(u, v, P);
        expect_or_info(report, s, "d(" + in + ")", in, d, tol);
        report.require("d>=0", in, d >= -1e-12 * scale, d, 1e-12 * scale, "metric axiom");
        double dr = energy::metric_d(v, u, P);
        report.require("d(u,v)=d(v,u)", in, d == dr, d - dr, 0.0, "metric axiom");
        double literal = energy::metric_d(u, v, w, P);
        report.compare("d with weight", in + ";w=" + (s.weight ? *s.weight : "0"), d, literal, tol,
                       "weight independence");
        RadialProfile p = energy::rooftop_P(u, v);
        double split = energy::metric_d(u, p, P) + energy::metric_d(v, p, P);
        report.compare("d(u,P)+d(v,P)", in, d, split, tol, "identity d=d(u,P)+d(v,P)");
        if (u == v) report.require("d(u,u)=0", in, d == 0.0, d, 0.0, "metric axiom");
        for (std::size_t k = 0; k < p.size(); ++k)
            roof.add({in, format_double(p.breakpoints()[k]), format_double(p.slopes()[k + 1])});
    }
    return report;
}

Report run_envelope(const Scenario& s, const RunOptions& o) {
    require_pairs(s, "envelope");
    Report report("envelope");
    const auto& P = s.params;
    double tol = tolerance_for(s, o, 1e-6);
    Table& trace = report.table("solver", {"pair", "j", "iteration", "residual", "sup_change", "e1"});
    Table& levels = report.table("levels", {"pair", "j", "change_from_previous", "residual", "monotone",
                                            "below_obstacles", "unique"});
    for (const auto& [a, b] : s.pairs) {
        const RadialProfile& u = s.profile(a);
        const RadialProfile& v = s.profile(b);
        std::string in = a + "," + b;
        double scale = std::max({u.sup_norm(), v.sup_norm(), 1e-300});
        RadialProfile hull = energy::rooftop_P(u, v);
        auto env = envelope::envelope_via_hte(u, v, P);
        double gap = core::sup_distance(hull, env.envelope);
        report.at_most("sup|P_hull-P_hte|", in, gap, tol * scale, "two-algorithm agreement");
        report.require("hte monotone in j", in, env.log.monotone, env.j_final, std::nullopt, "iteration claim");
        report.require("hte below obstacles", in, env.log.below_obstacles, env.j_final, std::nullopt,
                       "iteration claim");
        report.require("hte unique", in, env.log.unique, env.j_final, std::nullopt, "iteration claim");
        auto mp = energy::minimum_principle_check(u, v, P);
        report.require("minimum principle", in, mp.holds, mp.worst_excess, 1e-10, "atom mass bound");
        for (const auto& r : env.log.iterations)
            trace.add({in, format_double(r.j), std::to_string(r.iteration), format_double(r.residual),
                       format_double(r.sup_change), format_double(r.e1)});
        for (const auto& l : env.log.levels)
            levels.add({in, format_double(l.j), format_double(l.change_from_previous), format_double(l.residual),
                        l.monotone ? "1" : "0", l.below_obstacles ? "1" : "0", l.unique ? "1" : "0"});
    }
    return report;
}

Report run_geodesic(const Scenario& s, const RunOptions& o) {
    require_pairs(s, "geodesic");
    Report report("geodesic");
    const auto& P = s.params;
    int resolution = o.resolution.value_or(s.resolution.value_or(geodesic::kDefaultResolution));
    double tol = tolerance_for(s, o, P.m == P.n ? 1e-8 : 1e-4);
    std::vector<double> ts = s.t_grid.empty() ? geodesic::uniform_grid(21) : s.t_grid;
    RadialProfile w = s.weight_profile();
    Table& audit = report.table("audit", {"pair", "t", "energy", "distance_from_start", "linearity_deviation",
                                          "metric_deviation"});
    Table& perron = report.table("perron", {"pair", "pass", "residual"});
    for (const auto& [a, b] : s.pairs) {
        std::string in = a + "," + b;
        auto G = geodesic::weak_geodesic(s.profile(a), s.profile(b), P, resolution);
        auto A = geodesic::geodesic_audit(G, ts, w);
        report.at_most("E_w linearity deviation", in, A.linearity_deviation, tol, "geodesic property");
        report.at_most("geodesic equation deviation", in, A.metric_deviation, tol, "geodesic property");
        report.require("endpoint lower bound", in, A.lower_bound_holds, A.lower_bound_worst, 1e-10,
                       "max(u0-t|u1|,u1-(1-t)|u0|)");
        report.info("literal lower bound holds", in, A.literal_lower_bound_holds ? 1.0 : 0.0,
                    "max(u0-t|u1|,u1-(1-t)|u1|)");
        report.require("capacity continuity at endpoints", in, A.capacity_continuity,
                       A.capacities_start.empty() ? 0.0 : A.capacities_start.back(), 1e-6, "geodesic property");
        report.require("boundary values", in, A.boundary_membership, 0.0, std::nullopt, "geodesic property");
        for (const auto& r : A.rows)
            audit.add({in, format_double(r.t), format_double(r.energy), format_double(r.distance_from_start),
                       format_double(r.linearity_deviation), format_double(r.metric_deviation)});

        auto cmp = geodesic::perron_comparison(G, 512, 64);
        double scale = std::max({G.g0.sup_norm(), G.g1.sup_norm(), 1e-300});
        report.at_most("sup|Legendre-Perron|", in + ";grid=512x64", cmp.sup_distance, 5e-3 * scale,
                       "cross-algorithm agreement");
        for (std::size_t k = 0; k < cmp.residuals.size(); ++k)
            perron.add({in, std::to_string(k + 1), format_double(cmp.residuals[k])});
    }
    for (std::size_t k = 0; k + 1 < s.pairs.size(); ++k) {
        const auto& [a0, a1] = s.pairs[k];
        const auto& [b0, b1] = s.pairs[k + 1];
        auto c = geodesic::geodesic_contraction_check(s.profile(a0), s.profile(a1), s.profile(b0), s.profile(b1), ts,
                                                      P, resolution);
        report.require("geodesic contraction", a0 + "," + a1 + " vs " + b0 + "," + b1, c.holds, c.worst_excess,
                       std::nullopt, "d(phi_t,psi_t)<=(1-t)d(u0,v0)+t d(u1,v1)");
    }
    return report;
}

Report run_capacity(const Scenario& s, const RunOptions& o) {
    if (s.radii.empty()) fail(ErrorCode::Usage, "capacity needs a nonempty 'radii' list in the scenario");
    Report report("capacity");
    const auto& P = s.params;
    double tol = tolerance_for(s, o, 1e-12);
    Table& table = report.table("capacity", {"r", "tau", "capacity"});
    for (double r : s.radii) {
        std::string in = "r=" + format_double(r);
        double cap = energy::capacity_ball(r, P);
        double tau = core::tau_of_radius(r, P.coordinate());
        RadialProfile extremal = core::make_profile({tau}, {0.0, 1.0 / -tau}, P.coordinate());
        double mass = calculus::hessian_measure(extremal, P).total();
        report.compare("cap(" + format_double(r) + ")", in, mass, cap, tol, "mass of the extremal profile");
        auto it = s.expect.find("cap(" + format_double(r) + ")");
        if (it != s.expect.end()) report.compare("cap(" + format_double(r) + ")", in, it->second, cap, tol, "scenario");
        table.add({r, tau, cap});
    }
    return report;
}

Report run_command(const std::string& command, const Scenario& scenario, const RunOptions& options) {
    if (command == "energy") return run_energy(scenario, options);
    if (command == "metric") return run_metric(scenario, options);
    if (command == "envelope") return run_envelope(scenario, options);
    if (command == "geodesic") return run_geodesic(scenario, options);
    if (command == "capacity") return run_capacity(scenario, options);
    fail(ErrorCode::Usage, "unknown command '" + command + "'");
}

}  // namespace hessmetric::harness
