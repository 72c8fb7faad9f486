#include <cmath>
#include <numbers>

#include <doctest.h>

#include "fixtures.hpp"
#include "hessmetric/energy.hpp"
#include "hessmetric/error.hpp"
#include "hessmetric/hessian.hpp"

using namespace hessmetric;
using calculus::make_params;

namespace {

// Reference values from tests/reference/derive.py (exact slope integrals, 40 digits).
struct Reference {
    int n;
    double e1_A, e1_B, E_W_A, d_AB, I_AB, norm_AB, cap_half;
};
const Reference kReference[] = {
    {2, 138.17446161525102, 661.26349487298703, -45.441303596682255, 174.77424460262406, 362.70796174003393,
     12.825332198927912, 82.169153820895282},
    {3, 1271.2573438922926, 16061.251320395307, -317.08762636337863, 3697.9829671988832, 9635.2004784031691,
     15.9071515438414, 744.84039533098688},
};

bool close(double a, double b, double rel = 1e-13) { return std::abs(a - b) <= rel * std::abs(b); }

}  // namespace

TEST_CASE("Hessian measure of piecewise-linear profiles") {
    auto P = make_params(2, 2);
    CHECK(P.c == doctest::Approx(4.0 * std::numbers::pi * std::numbers::pi));
    auto mu = calculus::hessian_measure(fixtures::A(P.coordinate()), P);
    REQUIRE(mu.atoms.size() == 2);
    CHECK(mu.atoms[0].tau == -2.0);
    CHECK(close(mu.atoms[0].mass, P.c * 0.25));
    CHECK(close(mu.atoms[1].mass, P.c * (2.25 - 0.25)));
    CHECK(close(mu.total(), P.c * 2.25));
    auto unbounded = core::make_profile({-1.0}, {0.5, 1.0}, P.coordinate());
    CHECK_THROWS_AS(calculus::hessian_measure(unbounded, P), Error);
    CHECK_THROWS_AS(calculus::hessian_measure(fixtures::A({2, 1}), P), Error);
}

TEST_CASE("mixed measures polarize the pure power") {
    auto P = make_params(3, 3);
    auto c = P.coordinate();
    auto a = fixtures::A(c);
    auto b = fixtures::B(c);
    auto pure = calculus::hessian_measure(a, P);
    auto mixed = calculus::mixed_measure({a, a, a}, P);
    CHECK(close(mixed.total(), pure.total()));
    // Total mass is c times the product of the rightmost slopes.
    CHECK(close(calculus::mixed_measure({a, b, b}, P).total(), P.c * 1.5 * 4.0 * 4.0));
    CHECK_THROWS_AS(calculus::mixed_measure({a, b}, P), Error);
}

TEST_CASE("energies, metric and capacity against exact slope integrals, m = n") {
    for (const auto& ref : kReference) {
        CAPTURE(ref.n);
        auto P = make_params(ref.n, ref.n);
        auto c = P.coordinate();
        auto a = fixtures::A(c);
        auto b = fixtures::B(c);
        auto w = fixtures::W(c);
        CHECK(close(calculus::e1_energy(a, P), ref.e1_A));
        CHECK(close(calculus::e1_energy(b, P), ref.e1_B));
        CHECK(close(energy::energy_Ew(a, w, P).value, ref.E_W_A));
        CHECK(close(energy::metric_d(a, b, P), ref.d_AB));
        CHECK(close(energy::metric_d(a, b, w, P), ref.d_AB, 1e-12));
        CHECK(close(energy::aubin_I(a, b, P), ref.I_AB));
        CHECK(close(energy::norm_energy_difference(a, b, P), ref.norm_AB));
        CHECK(close(energy::capacity_ball(0.5, P), ref.cap_half));
    }
}

TEST_CASE("energies for m < n scale with the measured constant") {
    struct Row {
        int n, m;
        double e1_A, d_AB, cap_half;
    };
    for (auto r : {Row{2, 1, 2.5, 1.1875, 1.0 / 3.0}, Row{3, 2, 3.5, 4.4270833333333333, 1.0}}) {
        CAPTURE(r.n);
        auto P = make_params(r.n, r.m);
        auto c = P.coordinate();
        CHECK(close(calculus::e1_energy(fixtures::A(c), P) / P.c, r.e1_A));
        CHECK(close(energy::metric_d(fixtures::A(c), fixtures::B(c), P) / P.c, r.d_AB));
        CHECK(close(energy::capacity_ball(0.5, P) / P.c, r.cap_half));
        // The measured constant is within 0.3% of (4 pi)^n ((n-m)/m)^m.
        CHECK(P.c / calculus::hessian_constant_closed_form(r.n, r.m) == doctest::Approx(1.0).epsilon(3e-3));
    }
}

TEST_CASE("rooftop of two crossing profiles") {
    core::Coordinate c{2, 2};
    auto p = energy::rooftop_P(fixtures::A(c), fixtures::B(c));
    CHECK(p.breakpoints() == std::vector<double>{-2.0, -1.0, -0.25});
    CHECK(p.slopes() == std::vector<double>{0.0, 0.25, 1.0, 4.0});
    CHECK(energy::rooftop_P(fixtures::A(c), fixtures::A(c)) == fixtures::A(c));
    auto many = energy::rooftop_P({fixtures::A(c), fixtures::B(c), fixtures::W(c)});
    CHECK(core::pointwise_leq(many, fixtures::W(c), 1e-15));
    CHECK(core::pointwise_leq(many, p, 1e-15));
}

TEST_CASE("metric special cases") {
    auto P = make_params(2, 2);
    auto c = P.coordinate();
    core::RadialProfile zero(c);
    auto a = fixtures::A(c);
    CHECK(energy::metric_d(a, a, P) == 0.0);
    CHECK(close(energy::metric_d(a, zero, P), calculus::e1_energy(a, P) / 3.0));
    // Ordered pair: d(u, v) = E(v) - E(u) for u <= v.
    auto lower = core::scale(2.0, a);
    CHECK(close(energy::metric_d(lower, a, P),
                energy::energy_Ew(a, zero, P).value - energy::energy_Ew(lower, zero, P).value, 1e-12));
}

TEST_CASE("segment report on a proportional segment") {
    auto P = make_params(2, 2);
    auto c = P.coordinate();
    core::RadialProfile zero(c);
    auto a = fixtures::A(c);
    auto rep = energy::segment_report(a, core::scale(2.0, a), zero, {0.0, 0.25, 0.5, 0.75, 1.0}, P);
    // E_0((1+t)a) = -(1+t)^3 e1(a)/3: f'(t) = -(1+t)^2 e1(a), f'' = -2(1+t) e1(a).
    double e1 = calculus::e1_energy(a, P);
    for (std::size_t k = 0; k < rep.ts.size(); ++k) {
        double t = rep.ts[k];
        CHECK(close(rep.closed_first[k], -(1 + t) * (1 + t) * e1, 1e-12));
        CHECK(close(rep.closed_second[k], -2 * (1 + t) * e1, 1e-12));
    }
    CHECK_THROWS_AS(energy::segment_report(a, a, zero, {1.5}, P), Error);
}

TEST_CASE("capacity convergence of the flattening kinks") {
    auto P = make_params(2, 2);
    auto c = P.coordinate();
    std::vector<core::RadialProfile> seq;
    for (int j = 1; j <= 30; ++j) seq.push_back(fixtures::kink(std::sqrt(j), -1.0 / j, c));
    auto rep = energy::capacity_convergence_check(seq, core::RadialProfile(c), 0.1, 0.5, P);
    REQUIRE(rep.entries.size() == 30);
    // {u_1 < -0.1} covers K_{1/2}; {u_j < -0.1} is empty once 1/j <= 0.1.
    CHECK(rep.entries.front().capacity == doctest::Approx(energy::capacity_ball(0.5, P)));
    CHECK(rep.entries.back().capacity == 0.0);
}

TEST_CASE("Cauchy limit of a decreasing kink sequence") {
    auto P = make_params(2, 2);
    auto c = P.coordinate();
    auto seq = [&](int j) { return fixtures::kink(1.0, -1.0 - std::ldexp(1.0, -j), c); };
    auto res = energy::cauchy_limit(seq, P);
    CHECK(core::sup_distance(res.limit, fixtures::kink(1.0, -1.0, c)) < 1e-8);
}
