#include "hessmetric/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "hessmetric/error.hpp"

namespace hessmetric::energy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool profile_less(const RadialProfile& a, const RadialProfile& b) {
    if (a.breakpoints() != b.breakpoints()) return a.breakpoints() < b.breakpoints();
    return a.slopes() < b.slopes();
}

double slope_at(const RadialProfile& g, double lo, double hi) {
    double mid = 0.5 * (lo + hi);
    const auto& bps = g.breakpoints();
    auto idx = static_cast<std::size_t>(std::upper_bound(bps.begin(), bps.end(), mid) - bps.begin());
    return g.slopes()[idx];
}

bool linear_on(const RadialProfile& g, double lo, double hi) {
    const auto& bps = g.breakpoints();
    auto it = std::upper_bound(bps.begin(), bps.end(), lo);
    return it == bps.end() || *it >= hi;
}

double mass_at(const AtomicMeasure& mu, double tau) {
    for (const auto& a : mu.atoms)
        if (std::abs(a.tau - tau) <= 1e-12 * std::max(1.0, std::abs(tau))) return a.mass;
    return 0.0;
}

std::vector<RadialProfile> factors(const RadialProfile& a, int count_a, const RadialProfile& b, int count_b) {
    std::vector<RadialProfile> out;
    for (int i = 0; i < count_a; ++i) out.push_back(a);
    for (int i = 0; i < count_b; ++i) out.push_back(b);
    return out;
}

}  // namespace

EnergyReport energy_Ew(const RadialProfile& u, const RadialProfile& w, const HessianParams& params) {
    calculus::validate(params);
    core::require_same_coordinate(u, w);
    if (!(u.coordinate() == params.coordinate()))
        fail(ErrorCode::Coordinate, "energy needs profiles in the order-m coordinate");
    if (!u.is_bounded() || !w.is_bounded())
        fail(ErrorCode::UnboundedMass, "energy is infinite for profiles with positive leftmost slope");
    EnergyReport report;
    double total = 0.0;
    for (int j = 0; j <= params.m; ++j) {
        AtomicMeasure mu = calculus::mixed_measure(factors(u, j, w, params.m - j), params);
        double term = calculus::integrate(u, w, mu);
        report.terms.push_back({j, term});
        total += term;
    }
    report.value = total / (params.m + 1);
    return report;
}

double aubin_I(const RadialProfile& psi1, const RadialProfile& psi2, const HessianParams& params) {
    core::require_same_coordinate(psi1, psi2);
    AtomicMeasure h1 = calculus::hessian_measure(psi1, params);
    AtomicMeasure h2 = calculus::hessian_measure(psi2, params);
    return calculus::integrate(psi1, psi2, h2) - calculus::integrate(psi1, psi2, h1);
}

RadialProfile rooftop_P(const std::vector<RadialProfile>& profiles) {
    if (profiles.empty()) fail(ErrorCode::InvalidArgument, "rooftop envelope of an empty list");
    for (const auto& g : profiles) {
        core::require_same_coordinate(g, profiles.front());
        if (!g.is_bounded()) fail(ErrorCode::Domain, "rooftop envelope needs bounded profiles (leftmost slope 0)");
    }
    std::vector<RadialProfile> gs = profiles;
    std::sort(gs.begin(), gs.end(), profile_less);
    gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
    if (gs.size() == 1) return gs.front();

    std::vector<double> grid;
    for (const auto& g : gs) grid.insert(grid.end(), g.breakpoints().begin(), g.breakpoints().end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.empty()) return gs.front();
    grid.push_back(0.0);

    std::vector<double> taus{grid.front()};
    for (std::size_t k = 1; k < grid.size(); ++k) {
        double lo = grid[k - 1];
        double hi = grid[k];
        // Crossings within rounding of an endpoint would leave sliver edges whose slope is noise.
        double gap = std::max(1e-12 * (hi - lo), 8.0 * std::numeric_limits<double>::epsilon() *
                                                     std::max(std::abs(lo), std::abs(hi)));
        std::vector<double> cross;
        for (std::size_t a = 0; a < gs.size(); ++a) {
            double da_lo = core::evaluate(gs[a], lo);
            double da_hi = core::evaluate(gs[a], hi);
            for (std::size_t b = a + 1; b < gs.size(); ++b) {
                double d_lo = da_lo - core::evaluate(gs[b], lo);
                double d_hi = da_hi - core::evaluate(gs[b], hi);
                if ((d_lo < 0.0 && d_hi > 0.0) || (d_lo > 0.0 && d_hi < 0.0)) {
                    double x = lo + (hi - lo) * d_lo / (d_lo - d_hi);
                    if (x - lo > gap && hi - x > gap) cross.push_back(x);
                }
            }
        }
        std::sort(cross.begin(), cross.end());
        cross.erase(std::unique(cross.begin(), cross.end(), [gap](double x, double y) { return y - x <= gap; }),
                    cross.end());
        taus.insert(taus.end(), cross.begin(), cross.end());
        taus.push_back(hi);
    }

    std::vector<double> ys(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        double best = kInf;
        for (const auto& g : gs) best = std::min(best, core::evaluate(g, taus[i]));
        ys[i] = best;
    }
    ys.back() = 0.0;

    auto hull = core::lower_hull(taus, ys);
    std::vector<double> hx;
    std::vector<double> hy;
    for (std::size_t i : hull) {
        hx.push_back(taus[i]);
        hy.push_back(ys[i]);
    }
    // Hull edges lying on a single input piece keep that piece's exact slope.
    std::vector<double> slopes;
    for (std::size_t e = 0; e + 1 < hx.size(); ++e) {
        double lo = hx[e];
        double hi = hx[e + 1];
        double s = (hy[e + 1] - hy[e]) / (hi - lo);
        for (const auto& g : gs) {
            if (linear_on(g, lo, hi) && core::evaluate(g, lo) == hy[e] && core::evaluate(g, hi) == hy[e + 1]) {
                s = slope_at(g, lo, hi);
                break;
            }
        }
        slopes.push_back(s);
    }
    return core::profile_from_vertices(hx, hy, 0.0, gs.front().coordinate(), &slopes, 1e-9);
}

RadialProfile rooftop_P(const RadialProfile& u, const RadialProfile& v) { return rooftop_P(std::vector{u, v}); }

double metric_d(const RadialProfile& u, const RadialProfile& v, const RadialProfile& w, const HessianParams& params) {
    RadialProfile p = rooftop_P(u, v);
    double eu = energy_Ew(u, w, params).value;
    double ev = energy_Ew(v, w, params).value;
    double ep = energy_Ew(p, w, params).value;
    return eu + ev - 2.0 * ep;
}

double metric_d(const RadialProfile& u, const RadialProfile& v, const HessianParams& params) {
    // Weighting every energy by P(u,v) itself removes the cancellation between large energies.
    RadialProfile p = rooftop_P(u, v);
    return energy_Ew(u, p, params).value + energy_Ew(v, p, params).value;
}

double norm_energy_difference(const RadialProfile& u, const RadialProfile& v, const HessianParams& params) {
    double e = calculus::e1_energy(core::sum(u, v), params);
    return std::pow(e, 1.0 / (params.m + 1));
}

double capacity_ball(double r, const HessianParams& params) {
    calculus::validate(params);
    if (!(r > 0.0 && r < 1.0)) fail(ErrorCode::Domain, "ball radius must lie in (0,1), got " + std::to_string(r));
    double tau = core::tau_of_radius(r, params.coordinate());
    return params.c / std::pow(-tau, params.m);
}

CapacityReport capacity_convergence_check(const std::vector<RadialProfile>& sequence, const RadialProfile& limit,
                                          double eps, double k_radius, const HessianParams& params) {
    if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "capacity threshold must be positive");
    double tau_k = core::tau_of_radius(k_radius, params.coordinate());
    double cap_k = capacity_ball(k_radius, params);
    CapacityReport report{eps, k_radius, {}};
    int j = 0;
    for (const auto& u : sequence) {
        ++j;
        core::require_same_coordinate(u, limit);
        std::vector<double> grid = core::merged_breakpoints(u, limit);
        std::vector<double> pts;
        for (double x : grid)
            if (x < tau_k) pts.push_back(x);
        pts.push_back(tau_k);
        auto diff = [&](double x) { return std::abs(core::evaluate(u, x) - core::evaluate(limit, x)); };
        double outer = -kInf;
        if (diff(tau_k) > eps) {
            outer = tau_k;
        } else {
            // Scan pieces right to left; |difference| is linear on each piece.
            for (std::size_t k = pts.size(); k-- > 0;) {
                double hi = pts[k];
                double d_hi = core::evaluate(u, hi) - core::evaluate(limit, hi);
                if (k == 0) {
                    if (std::abs(d_hi) > eps) outer = hi;
                    break;
                }
                double lo = pts[k - 1];
                double d_lo = core::evaluate(u, lo) - core::evaluate(limit, lo);
                if (std::abs(d_lo) > eps) {
                    double target = d_lo > 0.0 ? eps : -eps;
                    outer = lo + (hi - lo) * (d_lo - target) / (d_lo - d_hi);
                    outer = std::clamp(outer, lo, hi);
                    break;
                }
            }
        }
        double cap = 0.0;
        if (outer == tau_k) cap = cap_k;
        else if (outer > -kInf) cap = params.c / std::pow(-outer, params.m);
        report.entries.push_back({j, outer, cap});
    }
    return report;
}

CauchyResult cauchy_limit(const std::function<RadialProfile(int)>& sequence, const HessianParams& params,
                          const CauchyOptions& options) {
    std::vector<RadialProfile> terms;
    CauchyResult result;
    double bound = 0.0;
    auto term = [&](int j) -> const RadialProfile& {
        while (static_cast<int>(terms.size()) < j) {
            int next = static_cast<int>(terms.size()) + 1;
            if (next > options.max_terms)
                fail(ErrorCode::Iteration, "Cauchy construction did not stabilise within " +
                                               std::to_string(options.max_terms) + " terms");
            terms.push_back(sequence(next));
            if (next >= 2) {
                double inc = metric_d(terms[next - 2], terms[next - 1], params);
                if (next == 2) bound = std::max(1.0, 2.0 * inc);
                double noise = 1e-12 * std::max(1.0, energy_scale({terms[next - 2], terms[next - 1]}, params));
                double allowed = bound * std::ldexp(1.0, -(next - 1)) * (1.0 + 1e-9) + noise;
                if (inc > allowed)
                    fail(ErrorCode::Domain, "increment d(u_" + std::to_string(next - 1) + ", u_" +
                                                std::to_string(next) + ") = " + std::to_string(inc) +
                                                " exceeds the summable bound " + std::to_string(allowed));
                result.increments.push_back(inc);
            }
        }
        return terms[static_cast<std::size_t>(j - 1)];
    };

    auto tail_envelope = [&](int j) {
        RadialProfile v = term(j);
        for (int k = j + 1;; ++k) {
            RadialProfile next = rooftop_P(v, term(k));
            double scale = std::max({v.sup_norm(), next.sup_norm(), 1e-300});
            double change = core::sup_distance(v, next);
            v = next;
            if (change <= options.stabilization * scale) {
                // require a second quiet step so a single flat increment is not mistaken for the limit
                RadialProfile again = rooftop_P(v, term(k + 1));
                if (core::sup_distance(v, again) <= options.stabilization * scale) return again;
                v = again;
                ++k;
            }
        }
    };

    RadialProfile previous = tail_envelope(1);
    int j = 1;
    for (;;) {
        ++j;
        RadialProfile current = tail_envelope(j);
        double scale = std::max({previous.sup_norm(), current.sup_norm(), 1e-300});
        double change = core::sup_distance(previous, current);
        previous = current;
        if (change <= options.stabilization * scale) break;
        if (j >= options.max_terms)
            fail(ErrorCode::Iteration, "outer Cauchy envelopes did not stabilise");
    }
    result.limit = previous;
    result.outer_steps = j;
    result.terms_used = static_cast<int>(terms.size());
    for (const auto& u : terms) result.distances_to_limit.push_back(metric_d(u, result.limit, params));
    return result;
}

SegmentReport segment_report(const RadialProfile& u, const RadialProfile& v, const RadialProfile& w,
                             const std::vector<double>& ts, const HessianParams& params) {
    SegmentReport rep;
    rep.ts = ts;
    rep.scale = energy_scale({u, v, w}, params);
    const int m = params.m;
    for (double t : ts) {
        if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::Domain, "segment parameter must lie in [0,1]");
        RadialProfile phi = core::combine(1.0 - t, u, t, v);
        rep.f.push_back(energy_Ew(phi, w, params).value);
        rep.closed_first.push_back(calculus::integrate(v, u, calculus::hessian_measure(phi, params)));
        double second = 0.0;
        if (m >= 1) {
            std::vector<RadialProfile> fv = factors(phi, m - 1, v, 1);
            std::vector<RadialProfile> fu = factors(phi, m - 1, u, 1);
            second = m * (calculus::integrate(v, u, calculus::mixed_measure(fv, params)) -
                          calculus::integrate(v, u, calculus::mixed_measure(fu, params)));
        }
        rep.closed_second.push_back(second);
    }
    std::size_t k = ts.size();
    rep.fd_first.assign(k, std::nan(""));
    rep.fd_second.assign(k, std::nan(""));
    for (std::size_t i = 1; i + 1 < k; ++i) {
        double h0 = ts[i] - ts[i - 1];
        double h1 = ts[i + 1] - ts[i];
        rep.fd_first[i] = (rep.f[i + 1] - rep.f[i - 1]) / (h0 + h1);
        rep.fd_second[i] = 2.0 * (h0 * rep.f[i + 1] - (h0 + h1) * rep.f[i] + h1 * rep.f[i - 1]) / (h0 * h1 * (h0 + h1));
    }
    return rep;
}

MinimumPrincipleReport minimum_principle_check(const RadialProfile& u, const RadialProfile& v,
                                               const HessianParams& params, double contact_tol) {
    RadialProfile p = rooftop_P(u, v);
    AtomicMeasure hp = calculus::hessian_measure(p, params);
    AtomicMeasure hu = calculus::hessian_measure(u, params);
    AtomicMeasure hv = calculus::hessian_measure(v, params);
    double scale = std::max({u.sup_norm(), v.sup_norm(), 1e-300});
    double mass_scale = std::max({hu.total(), hv.total(), 1e-300});
    MinimumPrincipleReport rep;
    for (const auto& atom : hp.atoms) {
        double pv = core::evaluate(p, atom.tau);
        double bound = 0.0;
        if (std::abs(pv - core::evaluate(u, atom.tau)) <= contact_tol * scale) bound += mass_at(hu, atom.tau);
        if (std::abs(pv - core::evaluate(v, atom.tau)) <= contact_tol * scale) bound += mass_at(hv, atom.tau);
        double excess = atom.mass - bound;
        rep.worst_excess = std::max(rep.worst_excess, excess / mass_scale);
        if (excess > 1e-12 * mass_scale) rep.holds = false;
    }
    return rep;
}

double rooftop_path_derivative(const RadialProfile& u, const RadialProfile& v, double t, const HessianParams& params) {
    RadialProfile psi = rooftop_P(core::combine(1.0 - t, u, t, v), v);
    AtomicMeasure mu = calculus::hessian_measure(psi, params);
    double total = 0.0;
    for (const auto& a : mu.atoms) {
        double vv = core::evaluate(v, a.tau);
        total += (vv - std::min(core::evaluate(u, a.tau), vv)) * a.mass;
    }
    return total;
}

double energy_scale(const std::vector<RadialProfile>& profiles, const HessianParams& params) {
    double scale = 0.0;
    for (const auto& g : profiles) scale = std::max(scale, calculus::e1_energy(g, params) / (params.m + 1));
    return scale;
}

}  // namespace hessmetric::energy
