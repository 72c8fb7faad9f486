#pragma once

#include <functional>
#include <vector>

#include "hessmetric/profile.hpp"

namespace hessmetric::oracle {

using core::RadialProfile;

// Samples of a radial function on a log-spaced radius grid ending at s = 1.
// The first and last `ghosts` nodes extend the grid beyond [floor, 1].
struct GridFunction {
    int n = 2;
    double h = 0.0;
    int ghosts = 0;
    std::vector<double> s;
    std::vector<double> f;

    std::size_t first() const { return static_cast<std::size_t>(ghosts); }
    std::size_t last() const { return s.size() - static_cast<std::size_t>(ghosts) - 1; }
    std::size_t interior_size() const { return last() - first() + 1; }
    double floor() const { return s[first()]; }
};

constexpr double kDefaultFloor = 1e-6;
constexpr int kDefaultGridSize = 4096;
constexpr int kDefaultMollifyWidth = 8;

GridFunction sample_function(const std::function<double(double)>& f, int n, int grid_size,
                             double floor = kDefaultFloor, int ghosts = kDefaultMollifyWidth / 2 + 2);
GridFunction sample_radial(const RadialProfile& g, int grid_size, double floor = kDefaultFloor,
                           int ghosts = kDefaultMollifyWidth / 2 + 2);

// Radius floor that keeps every breakpoint of the profiles well inside the grid.
double adapted_floor(const std::vector<RadialProfile>& profiles, double margin = 1.5);

// Pointwise 4^n m! (n-m)! sigma_m of the radial eigenvalues f'/(2s) (multiplicity n-1)
// and (f'' + f'/s)/4, from central differences of the mollified samples.
std::vector<double> eigen_density(const GridFunction& F, int m, int mollify_width = kDefaultMollifyWidth);

// Hessian mass of each interior node's cell, from the same eigenvalue combination written in
// divergence form so that cell masses telescope.
std::vector<double> node_masses(const GridFunction& F, int m, int mollify_width = kDefaultMollifyWidth);

// Node masses divided by cell volumes, per unit Lebesgue volume.
std::vector<double> hessian_density_fd(const GridFunction& F, int m, int mollify_width = kDefaultMollifyWidth);
double oracle_total_mass(const GridFunction& F, int m, int mollify_width = kDefaultMollifyWidth);

// Constant relating the cumulative mass on the ball of radius s to p^m s^(2n-m), p = df/ds.
double gradient_mass_constant(int n, int m);

// e_1 and E_w in gradient form; both grids must coincide.
double oracle_e1(const GridFunction& u, int m);
double oracle_energy(const GridFunction& u, const GridFunction& w, int m);
double oracle_aubin_I(const GridFunction& psi1, const GridFunction& psi2, int m);
double oracle_L1(const GridFunction& u, const GridFunction& v);

// Greatest convex minorant of min(u, v) in the order-q coordinate by a discrete double conjugate.
GridFunction oracle_rooftop(const GridFunction& u, const GridFunction& v, int q, int slope_samples = 8192);
double oracle_metric(const GridFunction& u, const GridFunction& v, int m);

// Measured mass of max(tau_m, -1).
double kink_mass_constant(int n, int m, int grid_size);

struct PerronResult {
    std::vector<double> taus;
    std::vector<double> ts;
    // values[i * ts.size() + j] = Psi(taus[i], ts[j])
    std::vector<double> values;
    int passes = 0;
    std::vector<double> residuals;

    double at(std::size_t i, std::size_t j) const { return values[i * ts.size() + j]; }
};

struct PerronOptions {
    int q = 2;
    double tolerance = 1e-7;
    int max_passes = 200;
};

PerronResult perron_geodesic(const GridFunction& u0, const GridFunction& u1, const std::vector<double>& ts,
                             const PerronOptions& options);

}  // namespace hessmetric::oracle
