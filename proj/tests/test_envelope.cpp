#include <cmath>

#include <doctest.h>

#include "fixtures.hpp"
#include "hessmetric/energy.hpp"
#include "hessmetric/envelope.hpp"
#include "hessmetric/error.hpp"

using namespace hessmetric;
using calculus::make_params;

TEST_CASE("Dirichlet problem recovers the profile from its measure") {
    for (auto [n, m] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 1}}) {
        auto P = make_params(n, m);
        auto a = fixtures::A(P.coordinate());
        auto back = envelope::dirichlet_solve(calculus::hessian_measure(a, P), P);
        CHECK(core::sup_distance(back, a) < 1e-14);
    }
}

TEST_CASE("Dirichlet problem rejects bad measures") {
    auto P = make_params(2, 2);
    calculus::AtomicMeasure negative{{{-1.0, -2.0}}};
    calculus::AtomicMeasure outside{{{0.5, 1.0}}};
    calculus::AtomicMeasure unordered{{{-1.0, 1.0}, {-2.0, 1.0}}};
    for (const auto& mu : {negative, outside, unordered}) {
        try {
            envelope::dirichlet_solve(mu, P);
            FAIL("expected a domain error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Domain);
        }
    }
    CHECK(envelope::dirichlet_solve({}, P).is_zero());
}

TEST_CASE("HTE with constant field reduces to the Dirichlet problem") {
    auto P = make_params(2, 2);
    auto a = fixtures::A(P.coordinate());
    auto mu = calculus::hessian_measure(a, P);
    envelope::HteProblem problem{mu, [](double, std::size_t) { return 1.0; }, P, {}, {}};
    auto res = envelope::hte_solve(problem, core::RadialProfile(P.coordinate()));
    CHECK(core::sup_distance(res.solution, a) < 1e-9);
    CHECK(res.log.unique);
}

TEST_CASE("envelope via HTE matches the convex-hull rooftop") {
    for (auto [n, m] : {std::pair{2, 2}, std::pair{3, 3}, std::pair{2, 1}}) {
        CAPTURE(n);
        CAPTURE(m);
        auto P = make_params(n, m);
        auto c = P.coordinate();
        auto u = fixtures::A(c);
        auto v = fixtures::B(c);
        auto res = envelope::envelope_via_hte(u, v, P);
        CHECK(core::sup_distance(res.envelope, energy::rooftop_P(u, v)) <= 1e-6 * std::max(u.sup_norm(), v.sup_norm()));
        CHECK(res.log.monotone);
        CHECK(res.log.below_obstacles);
        CHECK(res.j_final >= 1.0);
        CHECK(energy::minimum_principle_check(u, v, P).holds);
    }
}
