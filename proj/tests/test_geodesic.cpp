#include <cmath>

#include <doctest.h>

#include "fixtures.hpp"
#include "hessmetric/energy.hpp"
#include "hessmetric/error.hpp"
#include "hessmetric/geodesic.hpp"

using namespace hessmetric;
using calculus::make_params;

TEST_CASE("midpoint of the kink geodesic, by hand") {
    // u0 = max(tau,-2), u1 = max(3 tau,-1.5). Conjugates 2(1-p)_+ and 1.5(1-p/3)_+ average at t = 1/2 to a
    // dual whose inverse is max(-1.75, tau - 0.5, 3 tau).
    auto P = make_params(2, 2);
    auto c = P.coordinate();
    auto G = geodesic::weak_geodesic(fixtures::kink(1.0, -2.0, c), fixtures::kink(3.0, -1.5, c), P);
    auto mid = geodesic::geodesic_eval(G, 0.5);
    REQUIRE(mid.size() == 2);
    CHECK(mid.breakpoints()[0] == doctest::Approx(-1.25));
    CHECK(mid.breakpoints()[1] == doctest::Approx(-0.25));
    CHECK(mid.slopes() == std::vector<double>{0.0, 1.0, 3.0});
    // e1 is affine along the geodesic: 7.75 c is the mean of 2c and 13.5c.
    CHECK(calculus::e1_energy(mid, P) == doctest::Approx(7.75 * P.c));
    CHECK(geodesic::geodesic_eval(G, 0.0) == fixtures::kink(1.0, -2.0, c));
    CHECK_THROWS_AS(geodesic::geodesic_eval(G, 1.5), Error);
}

TEST_CASE("geodesic audit for m = n") {
    auto P = make_params(3, 3);
    auto c = P.coordinate();
    auto G = geodesic::weak_geodesic(fixtures::A(c), fixtures::B(c), P);
    auto A = geodesic::geodesic_audit(G, geodesic::uniform_grid(21), fixtures::W(c));
    CHECK(A.linearity_deviation <= 1e-8);
    CHECK(A.metric_deviation <= 1e-8);
    CHECK(A.lower_bound_holds);
    CHECK(A.rows.size() == 21);
}

TEST_CASE("geodesic for m < n transports endpoints") {
    auto P = make_params(2, 1);
    core::Coordinate c2{2, 2};
    auto G = geodesic::weak_geodesic(fixtures::kink(1.0, -2.0, c2), fixtures::kink(3.0, -1.5, c2), P, 2048);
    CHECK(G.transported);
    CHECK(G.g0.coordinate() == core::Coordinate{2, 1});
    auto A = geodesic::geodesic_audit(G, geodesic::uniform_grid(11), fixtures::kink(1.0, -1.0, P.coordinate()));
    CHECK(A.linearity_deviation <= 1e-4);
    CHECK(A.metric_deviation <= 1e-4);
    CHECK_THROWS_AS(geodesic::weak_geodesic(fixtures::A({2, 2}), fixtures::A({2, 1}), make_params(2, 2)), Error);
}

TEST_CASE("Legendre geodesic agrees with the grid Perron envelope") {
    auto P = make_params(2, 2);
    auto c = P.coordinate();
    auto G = geodesic::weak_geodesic(fixtures::kink(1.0, -2.0, c), fixtures::kink(3.0, -1.5, c), P);
    auto cmp = geodesic::perron_comparison(G, 256, 32);
    CHECK(cmp.sup_distance <= 5e-3 * 2.0);
}

TEST_CASE("geodesic contraction and monotone limits") {
    auto P = make_params(2, 2);
    auto c = P.coordinate();
    auto ts = geodesic::uniform_grid(11);
    auto rep = geodesic::geodesic_contraction_check(fixtures::A(c), fixtures::B(c), fixtures::W(c),
                                                    fixtures::kink(2.0, -1.0, c), ts, P);
    CHECK(rep.holds);
    auto u = [&](int j) { return fixtures::kink(1.0, -1.0 + std::ldexp(1.0, -j - 1), c); };
    auto v = [&](int j) { return fixtures::kink(2.0, -0.5 + std::ldexp(1.0, -j - 2), c); };
    auto lim = geodesic::monotone_geodesic_limit(u, v, 0.5, P);
    auto direct = geodesic::geodesic_eval(
        geodesic::weak_geodesic(fixtures::kink(1.0, -1.0, c), fixtures::kink(2.0, -0.5, c), P), 0.5);
    CHECK(core::sup_distance(lim.limit, direct) < 1e-9);
    CHECK(lim.geodesics_decrease);
}
