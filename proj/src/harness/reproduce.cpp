#include <bit>
#include <cmath>
#include <numbers>

#include "hessmetric/energy.hpp"
#include "hessmetric/error.hpp"
#include "hessmetric/geodesic.hpp"
#include "hessmetric/harness.hpp"
#include "hessmetric/io.hpp"

namespace hessmetric::harness {

namespace {

using io::format_double;

std::vector<int> dimensions(const RunOptions& o, std::vector<int> fallback) {
    if (o.n) {
        if (*o.n < 2) fail(ErrorCode::Usage, "--n must be at least 2");
        return {*o.n};
    }
    return fallback;
}

double two_pi_pow(int n) { return std::pow(2.0 * std::numbers::pi, n); }

RadialProfile kink(double slope, double a, core::Coordinate c) {
    // max(slope * tau, a) for a < 0.
    return core::make_profile({a / slope}, {0.0, slope}, c);
}

std::string label(const char* name, double x) { return std::string(name) + "=" + format_double(x); }

Report intro_norm(const RunOptions& o) {
    Report report("intro-norm");
    double tol = o.tolerance.value_or(1e-9);
    Table& table = report.table("table", {"n", "a", "b", "e1", "closed_form", "rel_err"});
    for (int n : dimensions(o, {2, 3})) {
        auto P = calculus::make_params(n, n);
        for (int i = 0; i < 5; ++i) {
            for (int k = 0; k < 4; ++k) {
                double a = -3.5 + 0.5 * i;
                double b = a + 0.3 * (k + 1);
                RadialProfile s = core::sum(kink(1.0, a, P.coordinate()), kink(1.0, b, P.coordinate()));
                double e1 = calculus::e1_energy(s, P);
                double closed = two_pi_pow(n) * (b - a + std::pow(2.0, n + 1) * (-b));
                std::string in = "n=" + std::to_string(n) + ";" + label("a", a) + ";" + label("b", b);
                report.compare("e1(u_a+u_b)", in, closed, e1, tol, "closed form (2pi)^n(b-a+2^(n+1)(-b))");
                table.add({static_cast<double>(n), a, b, e1, closed, std::abs(e1 - closed) / closed});
            }
        }
    }
    return report;
}

Report topology_ex1(const RunOptions& o) {
    Report report("topology-ex1");
    double tol = o.tolerance.value_or(1e-9);
    int tmax = o.tmax.value_or(1000);
    if (tmax < 2) fail(ErrorCode::Usage, "--tmax must be at least 2");
    Table& table = report.table("table", {"n", "t", "d", "closed_form", "norm"});
    for (int n : dimensions(o, {2, 3})) {
        auto P = calculus::make_params(n, n);
        const int m = P.m;
        RadialProfile w = kink(1.0, -1.0, P.coordinate());
        RadialProfile zero(P.coordinate());
        double e1w = calculus::e1_energy(w, P);
        double norm = energy::norm_energy_difference(w, zero, P);
        double previous = -1.0;
        bool increasing = true;
        double first = 0.0;
        double last = 0.0;
        for (int ti = 1; ti <= tmax; ++ti) {
            double t = ti;
            RadialProfile tw = core::scale(t, w);
            RadialProfile w_tw = core::scale(t + 1.0, w);
            double d = energy::metric_d(w_tw, tw, w, P);
            double sum = 0.0;
            for (int j = 0; j <= m; ++j) sum += (t - 1.0) * std::pow(t, j) - t * std::pow(t + 1.0, j);
            double closed = -e1w * sum / (m + 1);
            std::string in = "n=" + std::to_string(n) + ";" + label("t", t);
            report.compare("d(w+tw,tw)", in, closed, d, tol, "closed form sum_j((t-1)t^j-t(t+1)^j)");
            table.add({static_cast<double>(n), t, d, closed, norm});
            if (!(d > previous)) increasing = false;
            previous = d;
            if (ti == 1) first = d;
            last = d;
        }
        std::string in = "n=" + std::to_string(n) + ";t=1.." + std::to_string(tmax);
        report.require("d(w+tw,tw) increasing in t", in, increasing, last, std::nullopt, "unbounded growth");
        // d grows like e1(w) t^m, so the ratio to t = 1 must exceed tmax^m / (2^(m+1) - 1).
        double growth = last / first;
        double floor_growth = std::pow(static_cast<double>(tmax), m) / (std::pow(2.0, m + 1) - 1.0);
        report.require("d(tmax)/d(1)", in, growth >= floor_growth, growth, floor_growth, "unbounded growth");
        report.compare("||w||", "n=" + std::to_string(n), std::pow(e1w, 1.0 / (m + 1)), norm, tol,
                       "e1(w)^(1/(m+1)), constant in t");
    }
    return report;
}

Report topology_ex2(const RunOptions& o) {
    Report report("topology-ex2");
    double tol = o.tolerance.value_or(1e-9);
    int jmax = o.jmax.value_or(50);
    if (jmax < 11) fail(ErrorCode::Usage, "--jmax must be at least 11");
    const double c = -2.0;
    Table& table = report.table("table", {"n", "j", "a_j", "d", "d_closed", "norm_pow", "norm_pow_closed"});
    for (int n : dimensions(o, {2, 3})) {
        auto P = calculus::make_params(n, n);
        double prev_d = 0.0;
        double prev_norm = 0.0;
        bool d_decreasing = true;
        bool norm_increasing = true;
        double first_d = 0.0;
        double last_d = 0.0;
        double last_closed = 0.0;
        double last_norm = 0.0;
        for (int j = 1; j <= jmax; ++j) {
            double jd = j;
            // Round j^(-n-2) to a dyadic grid fine enough to keep j * a_j exact, so the rounded
            // vertex value does not swamp the tiny gap a_j - c.
            int grid = 51 - static_cast<int>(std::bit_width(static_cast<unsigned>(j)));
            double delta = std::ldexp(std::round(std::ldexp(std::pow(jd, -n - 2), grid)), -grid);
            if (!(delta > 0.0)) fail(ErrorCode::Usage, "--jmax too large: a_j - c underflows the exact grid");
            double aj = c + delta;
            RadialProfile u = kink(jd, jd * aj, P.coordinate());
            RadialProfile v = kink(jd, jd * c, P.coordinate());
            double d = energy::metric_d(u, v, P);
            double norm_pow = std::pow(energy::norm_energy_difference(u, v, P), n + 1);
            double d_closed = two_pi_pow(n) * std::pow(jd, n + 1) * delta / (n + 1);
            double norm_closed = two_pi_pow(n) * std::pow(jd, n + 1) * (delta - std::pow(2.0, n + 1) * aj);
            std::string in = "n=" + std::to_string(n) + ";j=" + std::to_string(j);
            report.compare("d(u_j,v_j)", in, d_closed, d, tol, "closed form (2pi)^n j^(n+1)(a_j-c)/(n+1)");
            report.compare("||u_j-v_j||^(n+1)", in, norm_closed, norm_pow, tol,
                           "closed form (2pi)^n j^(n+1)((a_j-c)-2^(n+1)a_j)");
            table.add({static_cast<double>(n), jd, aj, d, d_closed, norm_pow, norm_closed});
            if (j > 10) {
                if (!(d < prev_d)) d_decreasing = false;
                if (!(norm_pow > prev_norm)) norm_increasing = false;
            }
            prev_d = d;
            prev_norm = norm_pow;
            if (j == 1) first_d = d;
            last_d = d;
            last_closed = d_closed;
            last_norm = norm_pow;
        }
        std::string in = "n=" + std::to_string(n) + ";j=11.." + std::to_string(jmax);
        report.require("d(u_j,v_j) decreasing", in, d_decreasing, last_d, std::nullopt, "d -> 0");
        report.require("||u_j-v_j||^(n+1) increasing", in, norm_increasing, last_norm, std::nullopt, "norm -> inf");
        // d_1 = (2pi)^n/(n+1) exactly, since a_1 - c = 1.
        double first_closed = two_pi_pow(n) / (n + 1);
        report.compare("d(u_jmax,v_jmax)/d(u_1,v_1)", in, last_closed / first_closed, last_d / first_d, tol,
                       "closed-form ratio on the dyadic a_j");
        report.info("jmax * d(u_jmax,v_jmax)/d(u_1,v_1)", in, jmax * last_d / first_d,
                    "equals 1 up to the dyadic rounding of a_j - c");
    }
    return report;
}

Report cap_example(const RunOptions& o) {
    Report report("cap-example");
    double tol = o.tolerance.value_or(1e-9);
    int jmax = o.jmax.value_or(50);
    if (jmax < 1) fail(ErrorCode::Usage, "--jmax must be positive");
    const std::vector<double> eps_list{0.5, 0.1, 0.05};
    std::vector<std::string> columns{"n", "j", "d", "e1"};
    for (double eps : eps_list) columns.push_back("cap_eps_" + format_double(eps));
    Table& table = report.table("table", columns);
    for (int n : dimensions(o, {2, 3})) {
        auto P = calculus::make_params(n, n);
        RadialProfile zero(P.coordinate());
        std::vector<RadialProfile> seq;
        for (int j = 1; j <= jmax; ++j) {
            double jd = j;
            RadialProfile u = kink(std::pow(jd, 1.0 / n), -1.0 / jd, P.coordinate());
            seq.push_back(u);
            std::string in = "n=" + std::to_string(n) + ";j=" + std::to_string(j);
            double d = energy::metric_d(u, zero, P);
            double e1 = calculus::e1_energy(u, P);
            report.compare("d(u_j,0)", in, two_pi_pow(n) / (n + 1), d, tol, "closed form (2pi)^n/(n+1)");
            report.compare("e1(u_j)", in, two_pi_pow(n), e1, tol, "closed form (2pi)^n");
        }
        std::vector<std::vector<double>> caps;
        for (double eps : eps_list) {
            auto rep = energy::capacity_convergence_check(seq, zero, eps, 0.5, P);
            std::vector<double> col;
            for (const auto& e : rep.entries) col.push_back(e.capacity);
            caps.push_back(col);
            double ratio = col.front() > 0.0 ? col.back() / col.front() : 0.0;
            std::string in = "n=" + std::to_string(n) + ";eps=" + format_double(eps) + ";K=|z|<=1/2";
            bool nonincreasing = true;
            for (std::size_t k = 1; k < col.size(); ++k)
                if (col[k] > col[k - 1]) nonincreasing = false;
            report.require("cap nonincreasing in j", in, nonincreasing, col.back(), std::nullopt,
                           "convergence in capacity");
            report.at_most("cap(j=jmax)/cap(j=1)", in, ratio, 1e-6, "convergence in capacity");
        }
        for (int j = 1; j <= jmax; ++j) {
            std::vector<double> row{static_cast<double>(n), static_cast<double>(j),
                                    energy::metric_d(seq[j - 1], zero, P), calculus::e1_energy(seq[j - 1], P)};
            for (const auto& col : caps) row.push_back(col[j - 1]);
            table.add(row);
        }
    }
    return report;
}

Report geodesic_kinks(const RunOptions& o) {
    Report report("geodesic-kinks");
    std::vector<double> ts = geodesic::uniform_grid(21);
    Table& audit = report.table("audit", {"n", "m", "resolution", "t", "energy", "distance_from_start",
                                          "linearity_deviation", "metric_deviation"});
    auto record = [&](const geodesic::Geodesic& G, const geodesic::GeodesicAudit& A) {
        for (const auto& r : A.rows)
            audit.add({static_cast<double>(G.params.n), static_cast<double>(G.params.m),
                       static_cast<double>(G.resolution), r.t, r.energy, r.distance_from_start,
                       r.linearity_deviation, r.metric_deviation});
    };
    for (int n : dimensions(o, {2, 3})) {
        auto P = calculus::make_params(n, n);
        auto c = P.coordinate();
        double tol = o.tolerance.value_or(1e-8);
        RadialProfile u0 = kink(1.0, -2.0, c);
        RadialProfile u1 = kink(3.0, -1.5, c);
        RadialProfile w = kink(1.0, -1.0, c);
        auto G = geodesic::weak_geodesic(u0, u1, P);
        auto A = geodesic::geodesic_audit(G, ts, w);
        std::string in = "n=m=" + std::to_string(n) + ";u0=max(tau,-2);u1=max(3tau,-1.5)";
        report.at_most("E_w linearity deviation", in, A.linearity_deviation, tol, "E_w affine along geodesics");
        report.at_most("geodesic equation deviation", in, A.metric_deviation, tol, "d(phi_s,phi_t)=|s-t|d(u0,u1)");
        report.require("endpoint lower bound", in, A.lower_bound_holds, A.lower_bound_worst, 1e-10,
                       "max(u0-t|u1|,u1-(1-t)|u0|)");
        report.require("capacity continuity at endpoints", in, A.capacity_continuity, 0.0, 1e-6, "endpoint limits");
        record(G, A);
        auto cmp = geodesic::perron_comparison(G, 512, 64);
        double scale = std::max(u0.sup_norm(), u1.sup_norm());
        report.at_most("sup|Legendre-Perron|", in + ";grid=512x64", cmp.sup_distance, 5e-3 * scale,
                       "grid Perron envelope");
    }

    // n = 2, m = 1: endpoints are 2-subharmonic kink profiles carried to the tau_1 coordinate.
    auto P = calculus::make_params(2, 1);
    core::Coordinate c2{2, 2};
    RadialProfile u0 = core::make_profile({-2.0, -1.0}, {0.0, 0.7, 1.9}, c2);
    RadialProfile u1 = kink(3.0, -3.9, c2);
    RadialProfile w = kink(1.0, -1.0, P.coordinate());
    double tol = o.tolerance.value_or(1e-4);
    int base = o.resolution.value_or(geodesic::kDefaultResolution);
    double prev_lin = 0.0;
    double prev_met = 0.0;
    for (int level = 0; level < 2; ++level) {
        int res = base << level;
        auto G = geodesic::weak_geodesic(u0, u1, P, res);
        auto A = geodesic::geodesic_audit(G, ts, w);
        std::string in = "n=2;m=1;resolution=" + std::to_string(res);
        if (level == 0) {
            report.at_most("E_w linearity deviation", in, A.linearity_deviation, tol, "E_w affine along geodesics");
            report.at_most("geodesic equation deviation", in, A.metric_deviation, tol,
                           "d(phi_s,phi_t)=|s-t|d(u0,u1)");
            auto cmp = geodesic::perron_comparison(G, 512, 64);
            double scale = std::max(G.g0.sup_norm(), G.g1.sup_norm());
            report.at_most("sup|Legendre-Perron|", in + ";grid=512x64", cmp.sup_distance, 5e-3 * scale,
                           "grid Perron envelope");
        } else {
            report.at_most("E_w linearity deviation shrinks", in, A.linearity_deviation, prev_lin,
                           "resolution doubling");
            report.at_most("geodesic equation deviation shrinks", in, A.metric_deviation, prev_met,
                           "resolution doubling");
        }
        report.require("endpoint lower bound", in, A.lower_bound_holds, A.lower_bound_worst, 1e-10,
                       "max(u0-t|u1|,u1-(1-t)|u0|)");
        prev_lin = A.linearity_deviation;
        prev_met = A.metric_deviation;
        record(G, A);
    }
    auto contraction = geodesic::geodesic_contraction_check(
        kink(1.0, -2.0, {2, 2}), kink(3.0, -1.5, {2, 2}), kink(2.0, -1.0, {2, 2}),
        core::make_profile({-1.2, -0.4}, {0.0, 0.5, 2.5}, {2, 2}), ts, calculus::make_params(2, 2));
    report.require("geodesic contraction", "n=m=2", contraction.holds, contraction.worst_excess, std::nullopt,
                   "d(phi_t,psi_t)<=(1-t)d(u0,v0)+t d(u1,v1)");
    return report;
}

}  // namespace

const std::vector<std::string>& example_ids() {
    static const std::vector<std::string> ids{"intro-norm", "topology-ex1", "topology-ex2", "cap-example",
                                              "geodesic-kinks"};
    return ids;
}

Report reproduce(const std::string& id, const RunOptions& options) {
    if (id == "intro-norm") return intro_norm(options);
    if (id == "topology-ex1") return topology_ex1(options);
    if (id == "topology-ex2") return topology_ex2(options);
    if (id == "cap-example") return cap_example(options);
    if (id == "geodesic-kinks") return geodesic_kinks(options);
    std::string known;
    for (const auto& k : example_ids()) known += (known.empty() ? "" : ", ") + k;
    fail(ErrorCode::Usage, "unknown example id '" + id + "' (known: " + known + ")");
}

}  // namespace hessmetric::harness
