#include <algorithm>
#include <cmath>

#include "hessmetric/energy.hpp"
#include "hessmetric/envelope.hpp"
#include "hessmetric/geodesic.hpp"
#include "hessmetric/harness.hpp"
#include "hessmetric/io.hpp"
#include "hessmetric/oracle.hpp"

namespace hessmetric::harness {

namespace {

using io::format_double;

struct Worst {
    double value = 0.0;
    void update(double x) { value = std::max(value, x); }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string params_label(const HessianParams& P) {
    return "n=" + std::to_string(P.n) + ";m=" + std::to_string(P.m);
}

// Centered differences of t -> E_w(P((1-t)u+tv, v)) against the closed derivative, relative to
// the largest derivative on the path. The difference quotient first gives up its rounding allowance,
// taking the energy as accurate to 1e-11 relative; otherwise paths with f' near 0 measure only noise.
double rooftop_path_error(const RadialProfile& u, const RadialProfile& v, const RadialProfile& w,
                          const std::vector<double>& ts, const HessianParams& P) {
    std::vector<double> f;
    std::vector<double> closed;
    for (double t : ts) {
        f.push_back(energy::energy_Ew(energy::rooftop_P(core::combine(1.0 - t, u, t, v), v), w, P).value);
        closed.push_back(energy::rooftop_path_derivative(u, v, t, P));
    }
    double ref = 1e-12 * energy::energy_scale({u, v, w}, P);
    for (double d : closed) ref = std::max(ref, std::abs(d));
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < ts.size(); ++k) {
        double dt = ts[k + 1] - ts[k - 1];
        double fd = (f[k + 1] - f[k - 1]) / dt;
        double rounding = 1e-11 * (std::abs(f[k + 1]) + std::abs(f[k - 1])) / dt;
        worst = std::max(worst, std::max(0.0, std::abs(fd - closed[k]) - rounding) / ref);
    }
    return worst;
}

}  // namespace

void metric_suite(Report& report, std::mt19937_64& rng, const HessianParams& P, int trials) {
    auto c = P.coordinate();
    RadialProfile zero(c);
    Worst triangle, pythagoras, sandwich, zero_identity, weights, contraction, max_bound;
    bool symmetric = true;
    bool indiscernible = true;
    for (int i = 0; i < trials; ++i) {
        RadialProfile u = random_profile(rng, c);
        RadialProfile v = random_profile(rng, c);
        RadialProfile psi = random_profile(rng, c);
        RadialProfile w1 = random_profile(rng, c);
        RadialProfile w2 = random_profile(rng, c);
        double scale = energy::energy_scale({u, v, psi}, P);
        double duv = energy::metric_d(u, v, P);
        triangle.update((duv - energy::metric_d(u, psi, P) - energy::metric_d(psi, v, P)) / scale);
        if (duv != energy::metric_d(v, u, P)) symmetric = false;
        if (energy::metric_d(u, u, P) != 0.0 || !(duv > 0.0) != (u == v)) indiscernible = false;
        RadialProfile p = energy::rooftop_P(u, v);
        pythagoras.update(rel(energy::metric_d(u, p, P) + energy::metric_d(v, p, P), duv));
        RadialProfile mid = energy::rooftop_P(v, psi);
        RadialProfile low = energy::rooftop_P(mid, w1);
        sandwich.update(rel(energy::metric_d(low, mid, P) + energy::metric_d(mid, v, P), energy::metric_d(low, v, P)));
        zero_identity.update(rel(energy::metric_d(u, zero, P), calculus::e1_energy(u, P) / (P.m + 1)));
        weights.update(rel(energy::metric_d(u, v, w1, P), duv));
        weights.update(rel(energy::metric_d(u, v, w2, P), duv));
        contraction.update(
            (energy::metric_d(energy::rooftop_P(u, psi), energy::rooftop_P(v, psi), P) - duv) / scale);
        max_bound.update((energy::metric_d(v, p, P) - energy::metric_d(core::pointwise_max(u, v), u, P)) / scale);
    }
    std::string in = params_label(P) + ";trials=" + std::to_string(trials);
    report.at_most("triangle excess / scale", in, triangle.value, 1e-9, "metric axiom");
    report.require("symmetry exact", in, symmetric, 0.0, 0.0, "metric axiom");
    report.require("identity of indiscernibles", in, indiscernible, 0.0, 0.0, "metric axiom");
    report.at_most("d(u,v) vs d(u,P)+d(v,P)", in, pythagoras.value, 1e-9, "identity");
    report.at_most("sandwich u<=psi<=v additivity", in, sandwich.value, 1e-9, "identity");
    report.at_most("d(u,0) vs e1(u)/(m+1)", in, zero_identity.value, 1e-9, "identity");
    report.at_most("weight independence", in, weights.value, 1e-9, "identity");
    report.at_most("d(P(u,psi),P(v,psi)) - d(u,v) / scale", in, contraction.value, 1e-9, "rooftop contraction");
    report.at_most("d(v,P(u,v)) - d(max(u,v),u) / scale", in, max_bound.value, 1e-9, "max versus rooftop");
}

void energy_suite(Report& report, std::mt19937_64& rng, const HessianParams& P, int trials) {
    auto c = P.coordinate();
    RadialProfile zero(c);
    std::vector<double> ts = geodesic::uniform_grid(129);
    // The rooftop path derivative is only Hoelder where the contact set moves, so it needs a finer grid.
    std::vector<double> path_ts = geodesic::uniform_grid(8193);
    Worst concavity, derivative, path_derivative, sum_formula, sandwich2, sandwich3, bound6, antisym;
    for (int i = 0; i < trials; ++i) {
        RadialProfile u = random_profile(rng, c);
        RadialProfile v = random_profile(rng, c);
        RadialProfile w = random_profile(rng, c);
        double scale = energy::energy_scale({u, v, w}, P);
        auto seg = energy::segment_report(u, v, w, ts, P);
        double ref = 1e-12 * seg.scale;
        for (double d : seg.closed_first) ref = std::max(ref, std::abs(d));
        for (std::size_t k = 1; k + 1 < ts.size(); ++k) {
            concavity.update(seg.closed_second[k] / seg.scale);
            derivative.update(std::abs(seg.fd_first[k] - seg.closed_first[k]) / ref);
        }
        path_derivative.update(rooftop_path_error(u, v, w, path_ts, P));
        double eu = energy::energy_Ew(u, w, P).value;
        double ev = energy::energy_Ew(v, w, P).value;
        sum_formula.update(std::abs((eu - ev) - energy::energy_Ew(u, v, P).value) / scale);
        double lo = calculus::integrate(u, v, calculus::hessian_measure(u, P));
        double hi = calculus::integrate(u, v, calculus::hessian_measure(v, P));
        sandwich2.update(std::max(lo - (eu - ev), (eu - ev) - hi) / scale);
        RadialProfile below = energy::rooftop_P(u, v);
        double eb = energy::energy_Ew(below, w, P).value;
        double hb = calculus::integrate(u, below, calculus::hessian_measure(below, P));
        sandwich3.update(std::max(hb / (P.m + 1) - (eu - eb), (eu - eb) - hb) / scale);
        double e_sum = calculus::e1_energy(core::sum(u, w), P) / (P.m + 1);
        bound6.update((std::abs(eu) - e_sum) / scale);
        antisym.update(std::abs(eu + energy::energy_Ew(w, u, P).value) / scale);
    }
    std::string in = params_label(P) + ";trials=" + std::to_string(trials);
    report.at_most("segment f'' / scale", in, concavity.value, 1e-8, "concavity along segments");
    report.at_most("closed f' vs centered differences / max|f'|", in, derivative.value, 1e-4, "derivative formula");
    report.at_most("rooftop path f' vs centered differences / max|f'|", in, path_derivative.value, 1e-4,
                   "rooftop path derivative");
    report.at_most("E_w(u)-E_w(v) vs sum formula", in, sum_formula.value, 1e-9, "identity");
    report.at_most("two-sided bound by H_m(u), H_m(v)", in, sandwich2.value, 1e-9, "inequality");
    report.at_most("ordered-pair bound", in, sandwich3.value, 1e-9, "inequality");
    report.at_most("|E_w(u)| - e1(u+w)/(m+1)", in, bound6.value, 1e-9, "inequality");
    report.at_most("E_w(u)+E_u(w)", in, antisym.value, 1e-9, "identity");
}

void envelope_suite(Report& report, std::mt19937_64& rng, const HessianParams& P, int trials) {
    auto c = P.coordinate();
    Worst gap;
    bool monotone = true;
    bool principle = true;
    for (int i = 0; i < trials; ++i) {
        RadialProfile u = random_profile(rng, c);
        RadialProfile v = random_profile(rng, c);
        auto env = envelope::envelope_via_hte(u, v, P);
        double scale = std::max(u.sup_norm(), v.sup_norm());
        gap.update(core::sup_distance(env.envelope, energy::rooftop_P(u, v)) / scale);
        monotone = monotone && env.log.monotone && env.log.below_obstacles && env.log.unique;
        principle = principle && energy::minimum_principle_check(u, v, P).holds;
    }
    std::string in = params_label(P) + ";trials=" + std::to_string(trials);
    report.at_most("sup|P_hull-P_hte| / scale", in, gap.value, 1e-6, "two-algorithm agreement");
    report.require("hte monotone, below obstacles, unique", in, monotone, 0.0, std::nullopt, "iteration claim");
    report.require("minimum principle", in, principle, 0.0, 1e-10, "atom mass bound");
}

void oracle_suite(Report& report, std::mt19937_64& rng, const HessianParams& P, int trials) {
    auto c = P.coordinate();
    Worst mass, e1, ew, aubin, dist;
    for (int i = 0; i < trials; ++i) {
        RadialProfile u = random_profile(rng, c);
        RadialProfile v = random_profile(rng, c);
        RadialProfile w = random_profile(rng, c);
        double floor = oracle::adapted_floor({u, v, w});
        auto U = oracle::sample_radial(u, oracle::kDefaultGridSize, floor);
        auto V = oracle::sample_radial(v, oracle::kDefaultGridSize, floor);
        auto W = oracle::sample_radial(w, oracle::kDefaultGridSize, floor);
        mass.update(rel(oracle::oracle_total_mass(U, P.m), calculus::hessian_measure(u, P).total()));
        e1.update(rel(oracle::oracle_e1(U, P.m), calculus::e1_energy(u, P)));
        ew.update(rel(oracle::oracle_energy(U, W, P.m), energy::energy_Ew(u, w, P).value));
        aubin.update(rel(oracle::oracle_aubin_I(U, V, P.m), energy::aubin_I(u, v, P)));
        dist.update(rel(oracle::oracle_metric(U, V, P.m), energy::metric_d(u, v, P)));
    }
    std::string in = params_label(P) + ";trials=" + std::to_string(trials) + ";nodes=4096";
    report.at_most("oracle Hessian mass rel err", in, mass.value, 1e-2, "grid oracle");
    report.at_most("oracle e1 rel err", in, e1.value, 1e-2, "grid oracle");
    report.at_most("oracle E_w rel err", in, ew.value, 1e-2, "grid oracle");
    report.at_most("oracle I rel err", in, aubin.value, 1e-2, "grid oracle");
    report.at_most("oracle d rel err", in, dist.value, 1e-2, "grid oracle");
}

namespace {

struct SequenceTrace {
    std::vector<double> d;
    std::vector<double> l1;
    std::vector<double> energy;
};

// A trace converges when its last quarter has dropped below 1e-3 of its first quarter, or below the
// rounding floor.
bool converges(const std::vector<double>& x, double noise) {
    auto quarter = static_cast<std::ptrdiff_t>(x.size() / 4);
    double head = *std::max_element(x.begin(), x.begin() + quarter);
    double tail = *std::max_element(x.end() - quarter, x.end());
    return tail <= noise || tail <= 1e-3 * head;
}

double tail_over_head(const std::vector<double>& x) {
    auto quarter = static_cast<std::ptrdiff_t>(x.size() / 4);
    double head = *std::max_element(x.begin(), x.begin() + quarter);
    double tail = *std::max_element(x.end() - quarter, x.end());
    return head > 0.0 ? tail / head : 0.0;
}

SequenceTrace trace(const std::vector<RadialProfile>& seq, const RadialProfile& limit, const RadialProfile& w,
                    const HessianParams& P) {
    std::vector<RadialProfile> all = seq;
    all.push_back(limit);
    double floor = oracle::adapted_floor(all);
    auto L = oracle::sample_radial(limit, oracle::kDefaultGridSize, floor);
    double e_limit = energy::energy_Ew(limit, w, P).value;
    SequenceTrace tr;
    for (const auto& u : seq) {
        tr.d.push_back(energy::metric_d(u, limit, P));
        tr.l1.push_back(oracle::oracle_L1(oracle::sample_radial(u, oracle::kDefaultGridSize, floor), L));
        tr.energy.push_back(std::abs(energy::energy_Ew(u, w, P).value - e_limit));
    }
    return tr;
}

// Slope s with e1(max(s tau, a)) = target, by bisection on log s.
double matching_slope(double a, double target, const HessianParams& P) {
    double lo = std::log(1e-6);
    double hi = std::log(1e12);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double s = std::exp(mid);
        double e = calculus::e1_energy(core::make_profile({a / s}, {0.0, s}, P.coordinate()), P);
        (e < target ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

}  // namespace

void convergence_suite(Report& report, const HessianParams& P, int terms) {
    auto c = P.coordinate();
    auto kink = [&](double slope, double a) { return core::make_profile({a / slope}, {0.0, slope}, c); };
    RadialProfile u = kink(1.0, -1.0);
    RadialProfile zero(c);
    const RadialProfile& w = u;
    double e1u = calculus::e1_energy(u, P);

    struct Family {
        std::string name;
        std::vector<RadialProfile> seq;
        RadialProfile limit;
        bool d_expected;
        bool l1_expected;
        bool energy_expected;
    };
    std::vector<Family> families;

    Family shrinking{"max(tau,-1-2^-j) -> max(tau,-1)", {}, u, true, true, true};
    for (int j = 1; j <= terms; ++j) shrinking.seq.push_back(kink(1.0, -1.0 - std::ldexp(1.0, -j)));
    families.push_back(shrinking);

    // Flattening kinks with constant e1: sup|u_j| -> 0 but the energy stays put.
    Family flattening{"max(s_j tau,-2^-j) -> 0, e1 constant", {}, zero, false, true, false};
    for (int j = 0; j < terms; ++j) {
        double a = -std::ldexp(1.0, -j);
        flattening.seq.push_back(kink(matching_slope(a, e1u, P), a));
    }
    families.push_back(flattening);

    // Alternates between u and a rescaled kink with the same e1.
    RadialProfile g = kink(2.0, -0.5);
    RadialProfile twin = core::scale(std::pow(e1u / calculus::e1_energy(g, P), 1.0 / (P.m + 1)), g);
    Family alternating{"u, twin, u, twin ... against u, equal e1", {}, u, false, false, true};
    for (int j = 1; j <= terms; ++j) alternating.seq.push_back(j % 2 == 0 ? u : twin);
    families.push_back(alternating);

    for (const auto& f : families) {
        auto tr = trace(f.seq, f.limit, w, P);
        double noise = 1e-12 * e1u;
        bool d = converges(tr.d, noise);
        bool l1 = converges(tr.l1, noise);
        bool en = converges(tr.energy, noise);
        std::string in = params_label(P) + ";" + f.name + ";terms=" + std::to_string(terms);
        report.require("d-convergence iff (L1 and E_w convergence)", in, d == (l1 && en), tail_over_head(tr.d), 1e-3,
                       "convergence characterization");
        report.require("d-convergence as constructed", in, d == f.d_expected, tail_over_head(tr.d), 1e-3,
                       "constructed sequence");
        report.require("L1 convergence as constructed", in, l1 == f.l1_expected, tail_over_head(tr.l1), 1e-3,
                       "constructed sequence");
        report.require("E_w convergence as constructed", in, en == f.energy_expected, tail_over_head(tr.energy), 1e-3,
                       "constructed sequence");
    }

    auto cap = energy::capacity_convergence_check(flattening.seq, zero, 0.1, 0.5, P);
    double first = cap.entries.front().capacity;
    double last = cap.entries.back().capacity;
    double d_last = energy::metric_d(flattening.seq.back(), zero, P);
    double d_first = energy::metric_d(flattening.seq.front(), zero, P);
    std::string in = params_label(P) + ";flattening kinks;eps=0.1;K=|z|<=1/2";
    report.require("capacity convergence without d-convergence", in,
                   last <= 1e-6 * first && std::abs(d_last - d_first) <= 1e-9 * d_first, last / first, 1e-6,
                   "capacity convergence does not imply d-convergence");
}

void oracle_constant_suite(Report& report, int n, int m, int grid_size) {
    double coarse = oracle::kink_mass_constant(n, m, grid_size);
    double fine = oracle::kink_mass_constant(n, m, 2 * grid_size);
    std::string in = "n=" + std::to_string(n) + ";m=" + std::to_string(m) + ";nodes=" + std::to_string(grid_size) +
                     "->" + std::to_string(2 * grid_size);
    report.compare("measured c_{n,m} under resolution doubling", in, fine, coarse, 3e-3, "grid oracle");
    report.info("measured c_{n,m} / closed form", in, fine / calculus::hessian_constant_closed_form(n, m),
                "closed form (4pi)^n((n-m)/m)^m");
}

Report selftest(const RunOptions& options) {
    Report report("selftest");
    std::mt19937_64 rng(options.seed);
    for (auto [n, m] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 1}}) {
        auto P = calculus::make_params(n, m);
        metric_suite(report, rng, P, 60);
        energy_suite(report, rng, P, 15);
        envelope_suite(report, rng, P, 8);
        oracle_suite(report, rng, P, 3);
        convergence_suite(report, P, 24);
    }
    oracle_constant_suite(report, 2, 1, 4096);
    oracle_constant_suite(report, 3, 2, 4096);
    RunOptions geo = options;
    geo.n = 2;
    report.append(reproduce("geodesic-kinks", geo));
    return report;
}

}  // namespace hessmetric::harness
