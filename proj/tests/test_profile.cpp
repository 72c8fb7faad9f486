#include <cmath>
#include <functional>

#include <doctest.h>

#include "fixtures.hpp"
#include "hessmetric/coordinate.hpp"
#include "hessmetric/error.hpp"
#include "hessmetric/legendre.hpp"
#include "hessmetric/profile.hpp"

using namespace hessmetric;
using core::Coordinate;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("log coordinate for q = n and power coordinate otherwise") {
    CHECK(core::tau_of_radius(0.5, {2, 2}) == doctest::Approx(std::log(0.5)));
    // k = 2n/q - 2 = 2 for (n, q) = (2, 1): tau = 1 - s^-2
    CHECK(core::power_exponent({2, 1}) == 2.0);
    CHECK(core::tau_of_radius(0.5, {2, 1}) == doctest::Approx(-3.0));
    CHECK(core::radius_of_tau(-3.0, {2, 1}) == doctest::Approx(0.5));
    CHECK(core::tau_of_radius(1.0, {3, 2}) == 0.0);
    double tau = core::transport_tau(std::log(0.25), {3, 3}, {3, 2});
    CHECK(tau == doctest::Approx(1.0 - 4.0));
    CHECK(code_of([] { core::validate({1, 1}); }) == ErrorCode::Domain);
    CHECK(code_of([] { core::validate({2, 3}); }) == ErrorCode::Domain);
    CHECK(code_of([] { core::tau_of_radius(1.5, {2, 2}); }) == ErrorCode::Domain);
}

TEST_CASE("profile construction validates the canonical form") {
    Coordinate c{2, 2};
    auto g = fixtures::A(c);
    CHECK(g.vertex_values() == std::vector<double>{-2.0, -1.5});
    CHECK(g.sup_norm() == 2.0);
    CHECK(core::evaluate(g, -10.0) == -2.0);
    CHECK(core::evaluate(g, -0.5) == -0.75);
    CHECK(core::evaluate(g, 0.0) == 0.0);
    CHECK(code_of([&] { core::make_profile({-1.0}, {0.0, 1.0, 2.0}, c); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { core::make_profile({-1.0, -2.0}, {0.0, 1.0, 2.0}, c); }) == ErrorCode::Domain);
    CHECK(code_of([&] { core::make_profile({0.5}, {0.0, 1.0}, c); }) == ErrorCode::Boundary);
    CHECK(code_of([&] { core::make_profile({-1.0}, {2.0, 1.0}, c); }) == ErrorCode::Convexity);
    CHECK(code_of([&] { core::make_profile({}, {-1.0}, c); }) == ErrorCode::Convexity);
    CHECK(code_of([&] { core::evaluate(g, std::nan("")); }) == ErrorCode::Domain);
}

TEST_CASE("profile arithmetic") {
    Coordinate c{2, 2};
    auto a = fixtures::A(c);
    auto b = fixtures::B(c);
    auto s = core::sum(a, b);
    CHECK(s.breakpoints() == std::vector<double>{-2.0, -1.0, -0.25});
    CHECK(s.slopes() == std::vector<double>{0.0, 0.5, 2.5, 5.5});
    auto mx = core::pointwise_max(a, b);
    for (double t : {-3.0, -1.7, -1.0, -0.6, -0.1})
        CHECK(core::evaluate(mx, t) == doctest::Approx(std::max(core::evaluate(a, t), core::evaluate(b, t))));
    CHECK(core::sup_distance(a, a) == 0.0);
    CHECK(core::pointwise_leq(core::scale(2.0, a), a));
    CHECK(code_of([&] { core::sum(a, fixtures::A({2, 1})); }) == ErrorCode::Coordinate);
    CHECK(code_of([&] { core::combine(-1.0, a, 1.0, b); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("vertices round trip and small slope drops are repaired") {
    Coordinate c{2, 2};
    auto g = core::profile_from_vertices({-2.0, -1.0, 0.0}, {-2.0, -1.5, 0.0}, 0.0, c);
    CHECK(g == fixtures::A(c));
    auto repaired = core::profile_from_vertices({-2.0, -1.0, 0.0}, {-2.0, -1.0, 0.0 - 1e-14}, 0.0, c);
    CHECK(repaired.size() == 1);
    CHECK(code_of([&] { core::profile_from_vertices({-2.0, -1.0, 0.0}, {-2.0, -0.5, 0.0}, 0.0, c); }) ==
          ErrorCode::Convexity);
    CHECK(code_of([&] { core::profile_from_vertices({-1.0, 0.0}, {-1.0, 0.5}, 0.0, c); }) == ErrorCode::Boundary);
}

TEST_CASE("Legendre transform of a kink and its inverse") {
    Coordinate c{2, 2};
    // g = max(tau, -2): g*(p) = 2(1 - p) on [0, 1], zero beyond.
    auto g = fixtures::kink(1.0, -2.0, c);
    auto d = core::legendre(g);
    CHECK(core::evaluate_dual(d, 0.0) == doctest::Approx(2.0));
    CHECK(core::evaluate_dual(d, 0.5) == doctest::Approx(1.0));
    CHECK(core::evaluate_dual(d, 1.0) == doctest::Approx(0.0));
    CHECK(core::legendre_inverse(d) == g);
    auto a = fixtures::A(c);
    CHECK(core::sup_distance(core::legendre_inverse(core::legendre(a)), a) < 1e-15);
}

TEST_CASE("reparameterizing into a coarser order keeps values at the samples") {
    Coordinate from{2, 2};
    auto g = fixtures::kink(2.0, -1.0, from);
    auto r = core::reparameterize(g, 1, {4096, 1e-9});
    CHECK(r.coordinate() == Coordinate{2, 1});
    double worst = 0.0;
    for (double tau : {-20.0, -3.0, -1.0, -0.3, -0.01})
        worst = std::max(worst, std::abs(core::evaluate(r, tau) - core::evaluate_transported(g, tau, {2, 1})));
    CHECK(worst < 1e-3);
}
