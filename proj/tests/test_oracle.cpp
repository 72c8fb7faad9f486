#include <cmath>
#include <numbers>

#include <doctest.h>

#include "fixtures.hpp"
#include "hessmetric/energy.hpp"
#include "hessmetric/oracle.hpp"

using namespace hessmetric;
using calculus::make_params;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("L1 distance of functions differing by one is the ball volume") {
    for (int n : {2, 3}) {
        auto u = oracle::sample_function([](double) { return -1.0; }, n, 4096);
        auto v = oracle::sample_function([](double) { return 0.0; }, n, 4096);
        double volume = std::pow(std::numbers::pi, n) / std::tgamma(n + 1.0);
        // Trapezoid error on the log grid: h^2 (2n)^2 / 12 relative.
        double h = std::log(1.0 / oracle::kDefaultFloor) / 4096;
        CHECK(rel(oracle::oracle_L1(u, v), volume) < 1.5 * h * h * (2 * n) * (2 * n) / 12);
        CHECK(oracle::oracle_L1(u, u) == 0.0);
    }
}

TEST_CASE("kink mass constant converges to the closed form") {
    CHECK(rel(oracle::kink_mass_constant(2, 2, 4096), calculus::hessian_constant_closed_form(2, 2)) < 1e-3);
    CHECK(rel(oracle::kink_mass_constant(2, 1, 4096), calculus::hessian_constant_closed_form(2, 1)) < 3e-3);
    CHECK(rel(oracle::kink_mass_constant(3, 2, 4096), calculus::hessian_constant_closed_form(3, 2)) < 3e-3);
}

TEST_CASE("grid oracle reproduces the exact atomic quantities") {
    for (auto [n, m] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 1}}) {
        CAPTURE(n);
        CAPTURE(m);
        auto P = make_params(n, m);
        auto c = P.coordinate();
        auto a = fixtures::A(c);
        auto b = fixtures::B(c);
        double floor = oracle::adapted_floor({a, b});
        auto Ga = oracle::sample_radial(a, 4096, floor);
        auto Gb = oracle::sample_radial(b, 4096, floor);
        CHECK(rel(oracle::oracle_total_mass(Ga, m), calculus::hessian_measure(a, P).total()) < 1e-2);
        CHECK(rel(oracle::oracle_e1(Ga, m), calculus::e1_energy(a, P)) < 1e-2);
        CHECK(rel(oracle::oracle_energy(Ga, Gb, m), energy::energy_Ew(a, b, P).value) < 1e-2);
        CHECK(rel(oracle::oracle_aubin_I(Ga, Gb, m), energy::aubin_I(a, b, P)) < 1e-2);
        CHECK(rel(oracle::oracle_metric(Ga, Gb, m), energy::metric_d(a, b, P)) < 1e-2);
    }
}

TEST_CASE("node masses are nonnegative and telescope to the total") {
    auto P = make_params(2, 2);
    auto G = oracle::sample_radial(fixtures::A(P.coordinate()), 2048);
    auto masses = oracle::node_masses(G, 2);
    double total = 0.0;
    for (double x : masses) {
        CHECK(x >= -1e-9);
        total += x;
    }
    CHECK(rel(total, oracle::oracle_total_mass(G, 2)) < 1e-12);
}

TEST_CASE("oracle rooftop of crossing profiles") {
    auto P = make_params(2, 2);
    auto c = P.coordinate();
    auto a = fixtures::A(c);
    auto b = fixtures::B(c);
    double floor = oracle::adapted_floor({a, b});
    auto R = oracle::oracle_rooftop(oracle::sample_radial(a, 4096, floor), oracle::sample_radial(b, 4096, floor), 2);
    auto exact = oracle::sample_radial(energy::rooftop_P(a, b), 4096, floor);
    double worst = 0.0;
    for (std::size_t i = R.first(); i <= R.last(); ++i) worst = std::max(worst, std::abs(R.f[i] - exact.f[i]));
    CHECK(worst < 1e-3);
}
