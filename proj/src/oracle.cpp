#include "hessmetric/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hessmetric/error.hpp"

namespace hessmetric::oracle {

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double int_pow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// Area of the unit sphere in C^n.
double sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, n) / factorial(n - 1); }

// Coordinate formula continued past s = 1 so profiles extend linearly in tau.
double tau_extended(double s, int n, int q) {
    if (q == n) return std::log(s);
    double k = 2.0 * n / q - 2.0;
    return -std::expm1(-k * std::log(s));
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
    if (a.n != b.n || a.s.size() != b.s.size() || a.ghosts != b.ghosts || a.h != b.h)
        fail(ErrorCode::InvalidArgument, "grid functions live on different grids");
}

std::vector<double> mollify(const std::vector<double>& f, int width) {
    int half = width / 2;
    if (half <= 0) return f;
    std::vector<double> kernel;
    for (int k = -half; k <= half; ++k) {
        double r = static_cast<double>(k) / half;
        kernel.push_back(int_pow(1.0 - r * r, 3));
    }
    double norm = 0.0;
    for (double w : kernel) norm += w;
    for (double& w : kernel) w /= norm;
    std::vector<double> out = f;
    for (std::size_t i = static_cast<std::size_t>(half); i + half < f.size(); ++i) {
        double acc = 0.0;
        for (int k = -half; k <= half; ++k) acc += kernel[k + half] * f[i + k];
        out[i] = acc;
    }
    return out;
}

}  // namespace

GridFunction sample_function(const std::function<double(double)>& f, int n, int grid_size, double floor,
                             int ghosts) {
    if (n < 2) fail(ErrorCode::Domain, "grid dimension must be at least 2");
    if (grid_size < 3) fail(ErrorCode::InvalidArgument, "grid needs at least 3 nodes");
    if (!(floor > 0.0 && floor < 1.0)) fail(ErrorCode::Domain, "grid floor must lie in (0,1)");
    GridFunction F;
    F.n = n;
    F.ghosts = ghosts;
    F.h = -std::log(floor) / (grid_size - 1);
    std::size_t total = static_cast<std::size_t>(grid_size + 2 * ghosts);
    F.s.resize(total);
    F.f.resize(total);
    std::size_t last = static_cast<std::size_t>(ghosts + grid_size - 1);
    for (std::size_t i = 0; i < total; ++i) {
        double x = (static_cast<double>(i) - static_cast<double>(last)) * F.h;
        F.s[i] = i == last ? 1.0 : std::exp(x);
        F.f[i] = f(F.s[i]);
    }
    return F;
}

GridFunction sample_radial(const RadialProfile& g, int grid_size, double floor, int ghosts) {
    core::Coordinate c = g.coordinate();
    return sample_function([&](double s) { return core::evaluate(g, tau_extended(s, c.n, c.q)); }, c.n, grid_size,
                           floor, ghosts);
}

double adapted_floor(const std::vector<RadialProfile>& profiles, double margin) {
    double floor = 0.5;
    for (const auto& g : profiles) {
        if (g.breakpoints().empty()) continue;
        double target = margin * g.breakpoints().front() - 0.5;
        floor = std::min(floor, core::radius_of_tau(target, g.coordinate()));
    }
    return std::max(floor, 1e-300);
}

std::vector<double> eigen_density(const GridFunction& F, int m, int mollify_width) {
    if (m < 1 || m > F.n) fail(ErrorCode::Domain, "order m out of range for the grid dimension");
    if (F.ghosts < mollify_width / 2 + 1) fail(ErrorCode::InvalidArgument, "grid has too few ghost nodes");
    std::vector<double> g = mollify(F.f, mollify_width);
    const int n = F.n;
    const double norm = std::pow(4.0, n) * factorial(m) * factorial(n - m);
    const double c_tan = binomial(n - 1, m);
    const double c_rad = binomial(n - 1, m - 1);
    std::vector<double> density;
    density.reserve(F.interior_size());
    for (std::size_t i = F.first(); i <= F.last(); ++i) {
        double fx = (g[i + 1] - g[i - 1]) / (2.0 * F.h);
        double fxx = (g[i + 1] - 2.0 * g[i] + g[i - 1]) / (F.h * F.h);
        double s2 = F.s[i] * F.s[i];
        double mu_tan = fx / (2.0 * s2);
        double mu_rad = fxx / (4.0 * s2);
        density.push_back(norm * (c_tan * int_pow(mu_tan, m) + c_rad * mu_rad * int_pow(mu_tan, m - 1)));
    }
    return density;
}

std::vector<double> node_masses(const GridFunction& F, int m, int mollify_width) {
    if (m < 1 || m > F.n) fail(ErrorCode::Domain, "order m out of range for the grid dimension");
    if (F.ghosts < mollify_width / 2 + 1) fail(ErrorCode::InvalidArgument, "grid has too few ghost nodes");
    std::vector<double> g = mollify(F.f, mollify_width);
    const int n = F.n;
    const double K = gradient_mass_constant(n, m);
    // Mass inside the ball of radius s is K p^m s^(2n-m) = K (df/dx)^m s^(2n-2m).
    auto flux = [&](double fx, double s) { return K * int_pow(fx, m) * int_pow(s, 2 * n - 2 * m); };
    std::size_t first = F.first();
    std::size_t last = F.last();
    std::vector<double> face(last - first + 2);
    for (std::size_t i = first; i <= last + 1; ++i) {
        double fx = (g[i] - g[i - 1]) / F.h;
        double s = std::sqrt(F.s[i] * F.s[i - 1]);
        face[i - first] = flux(fx, s);
    }
    double at_floor = flux((g[first + 1] - g[first - 1]) / (2.0 * F.h), F.s[first]);
    double at_one = flux((g[last + 1] - g[last - 1]) / (2.0 * F.h), F.s[last]);
    std::vector<double> mass(last - first + 1);
    for (std::size_t k = 0; k < mass.size(); ++k) mass[k] = face[k + 1] - face[k];
    mass.front() = face[1] - at_floor;
    mass.back() = at_one - face[mass.size() - 1];
    return mass;
}

std::vector<double> hessian_density_fd(const GridFunction& F, int m, int mollify_width) {
    std::vector<double> mass = node_masses(F, m, mollify_width);
    double omega = sphere_area(F.n);
    std::vector<double> density(mass.size());
    double peak = 0.0;
    for (std::size_t k = 0; k < mass.size(); ++k) {
        double s = F.s[F.first() + k];
        double weight = (k == 0 || k + 1 == mass.size()) ? 0.5 : 1.0;
        density[k] = mass[k] / (omega * int_pow(s, 2 * F.n) * F.h * weight);
        peak = std::max(peak, std::abs(density[k]));
    }
    for (std::size_t k = 0; k < density.size(); ++k) {
        if (density[k] < -1e-8 * peak) {
            std::ostringstream msg;
            msg << "negative Hessian density " << density[k] << " at s = " << F.s[F.first() + k]
                << ": samples are not m-subharmonic";
            fail(ErrorCode::Membership, msg.str());
        }
    }
    return density;
}

double oracle_total_mass(const GridFunction& F, int m, int mollify_width) {
    double total = 0.0;
    for (double x : node_masses(F, m, mollify_width)) total += x;
    return total;
}

double gradient_mass_constant(int n, int m) {
    return std::pow(4.0, n) * factorial(m) * factorial(n - m) * sphere_area(n) * binomial(n - 1, m - 1) /
           (m * std::pow(2.0, m + 1));
}

namespace {

struct Piece {
    double a;
    double b;
    double slope;
};

double node_x(const GridFunction& F, std::size_t i) {
    return (static_cast<double>(i) - static_cast<double>(F.last())) * F.h;
}

// Pieces of constant log-radius slope covering cell [i, i+1]. A cell whose neighbours
// on both sides are straight but disagree holds a corner; it is split where the two
// neighbouring lines meet.
std::vector<Piece> cell_pieces(const GridFunction& F, std::size_t i) {
    auto slope = [&](std::size_t k) { return (F.f[k + 1] - F.f[k]) / F.h; };
    double xa = node_x(F, i);
    double xb = node_x(F, i + 1);
    double d = slope(i);
    double dl = slope(i - 1);
    double dr = slope(i + 1);
    double jump = dr - dl;
    double smooth = std::abs(dl - slope(i - 2)) + std::abs(slope(i + 2) - dr);
    double size = std::max({std::abs(dl), std::abs(dr), 1.0});
    if (!(std::abs(jump) > 4.0 * smooth + 1e-12 * size)) return {{xa, xb, d}};
    double theta = std::clamp((dr - d) / jump, 0.0, 1.0);
    double xm = xa + theta * F.h;
    return {{xa, xm, dl}, {xm, xb, dr}};
}

// Integral of exp(e x) over [a, b].
double exp_weight(double a, double b, int e) {
    if (e == 0) return b - a;
    return (std::exp(e * b) - std::exp(e * a)) / e;
}

// Integral over the cell of h(slope_u, slope_v) exp(e x) on the common refinement of the pieces.
template <typename H>
double cell_integral(const std::vector<Piece>& pu, const std::vector<Piece>& pv, int e, H h) {
    double total = 0.0;
    std::size_t iu = 0;
    std::size_t iv = 0;
    double x = pu.front().a;
    while (iu < pu.size() && iv < pv.size()) {
        double end = std::min(pu[iu].b, pv[iv].b);
        if (end > x) total += h(pu[iu].slope, pv[iv].slope) * exp_weight(x, end, e);
        x = std::max(x, end);
        if (pu[iu].b <= end) ++iu;
        if (iv < pv.size() && pv[iv].b <= end) ++iv;
    }
    return total;
}

}  // namespace

double oracle_e1(const GridFunction& u, int m) {
    double total = 0.0;
    int e = 2 * u.n - 2 * m;
    for (std::size_t i = u.first(); i < u.last(); ++i) {
        auto pu = cell_pieces(u, i);
        total += cell_integral(pu, pu, e, [m](double a, double) { return int_pow(a, m + 1); });
    }
    return gradient_mass_constant(u.n, m) * total;
}

double oracle_energy(const GridFunction& u, const GridFunction& w, int m) {
    return (oracle_e1(w, m) - oracle_e1(u, m)) / (m + 1);
}

double oracle_aubin_I(const GridFunction& psi1, const GridFunction& psi2, int m) {
    require_same_grid(psi1, psi2);
    double total = 0.0;
    int e = 2 * psi1.n - 2 * m;
    for (std::size_t i = psi1.first(); i < psi1.last(); ++i) {
        total += cell_integral(cell_pieces(psi1, i), cell_pieces(psi2, i), e, [m](double a, double b) {
            return (a - b) * (int_pow(a, m) - int_pow(b, m));
        });
    }
    return gradient_mass_constant(psi1.n, m) * total;
}

double oracle_L1(const GridFunction& u, const GridFunction& v) {
    require_same_grid(u, v);
    double total = 0.0;
    for (std::size_t i = u.first(); i <= u.last(); ++i) {
        double weight = (i == u.first() || i == u.last()) ? 0.5 : 1.0;
        total += std::abs(u.f[i] - v.f[i]) * int_pow(u.s[i], 2 * u.n) * u.h * weight;
    }
    // Below the floor both functions are frozen at their first interior value.
    std::size_t i0 = u.first();
    total += std::abs(u.f[i0] - v.f[i0]) * int_pow(u.s[i0], 2 * u.n) / (2 * u.n);
    return sphere_area(u.n) * total;
}

GridFunction oracle_rooftop(const GridFunction& u, const GridFunction& v, int q, int slope_samples) {
    require_same_grid(u, v);
    std::size_t first = u.first();
    std::size_t count = u.interior_size();
    std::vector<double> taus(count);
    std::vector<double> ys(count);
    for (std::size_t k = 0; k < count; ++k) {
        taus[k] = tau_extended(u.s[first + k], u.n, q);
        ys[k] = std::min(u.f[first + k], v.f[first + k]);
    }
    taus.back() = 0.0;
    double p_max = 0.0;
    for (std::size_t k = 1; k < count; ++k) p_max = std::max(p_max, (ys[k] - ys[k - 1]) / (taus[k] - taus[k - 1]));
    p_max *= 1.0 + 1e-12;
    std::vector<double> ps(static_cast<std::size_t>(slope_samples));
    std::vector<double> conj(ps.size());
    for (std::size_t j = 0; j < ps.size(); ++j) {
        ps[j] = p_max * static_cast<double>(j) / (slope_samples - 1);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < count; ++k) best = std::max(best, ps[j] * taus[k] - ys[k]);
        conj[j] = best;
    }
    GridFunction out = u;
    for (std::size_t k = 0; k < count; ++k) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < ps.size(); ++j) best = std::max(best, ps[j] * taus[k] - conj[j]);
        out.f[first + k] = std::min(best, ys[k]);
    }
    out.f[first + count - 1] = 0.0;
    for (std::size_t i = 0; i < first; ++i) out.f[i] = out.f[first];
    double last_slope = (out.f[first + count - 1] - out.f[first + count - 2]) / (taus[count - 1] - taus[count - 2]);
    for (std::size_t i = first + count; i < out.f.size(); ++i)
        out.f[i] = last_slope * tau_extended(out.s[i], u.n, q);
    return out;
}

double oracle_metric(const GridFunction& u, const GridFunction& v, int m) {
    GridFunction p = oracle_rooftop(u, v, m);
    return (2.0 * oracle_e1(p, m) - oracle_e1(u, m) - oracle_e1(v, m)) / (m + 1);
}

double kink_mass_constant(int n, int m, int grid_size) {
    core::Coordinate coord{n, m};
    RadialProfile kink = core::make_profile({-1.0}, {0.0, 1.0}, coord);
    double floor = adapted_floor({kink});
    return oracle_total_mass(sample_radial(kink, grid_size, floor), m);
}

namespace {

// Lower convex envelope of samples (xs strictly increasing), evaluated back at xs.
void convexify(const std::vector<double>& xs, std::vector<double>& ys) {
    auto hull = core::lower_hull(xs, ys);
    std::size_t h = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        while (h + 1 < hull.size() && xs[hull[h + 1]] <= xs[i]) ++h;
        std::size_t a = hull[h];
        if (a == i || h + 1 >= hull.size()) continue;
        std::size_t b = hull[h + 1];
        ys[i] = std::min(ys[i], ys[a] + (ys[b] - ys[a]) * (xs[i] - xs[a]) / (xs[b] - xs[a]));
    }
}

}  // namespace

PerronResult perron_geodesic(const GridFunction& u0, const GridFunction& u1, const std::vector<double>& ts,
                             const PerronOptions& options) {
    require_same_grid(u0, u1);
    if (ts.size() < 2 || ts.front() != 0.0 || ts.back() != 1.0)
        fail(ErrorCode::InvalidArgument, "Perron t-grid must start at 0 and end at 1");
    for (std::size_t j = 1; j < ts.size(); ++j)
        if (!(ts[j] > ts[j - 1])) fail(ErrorCode::InvalidArgument, "Perron t-grid must be strictly increasing");

    PerronResult out;
    std::size_t first = u0.first();
    std::size_t count = u0.interior_size();
    out.ts = ts;
    out.taus.resize(count);
    std::vector<double> a(count);
    std::vector<double> b(count);
    for (std::size_t k = 0; k < count; ++k) {
        out.taus[k] = tau_extended(u0.s[first + k], u0.n, options.q);
        a[k] = u0.f[first + k];
        b[k] = u1.f[first + k];
    }
    out.taus.back() = 0.0;
    const auto& taus = out.taus;
    double norm0 = 0.0;
    double norm1 = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        norm0 = std::max(norm0, std::abs(a[k]));
        norm1 = std::max(norm1, std::abs(b[k]));
    }
    std::size_t nt = ts.size();
    out.values.assign(count * nt, 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return out.values[i * nt + j]; };

    auto interp_b = [&](double x, std::size_t& hint) {
        if (x <= taus.front()) return b.front();
        if (x >= 0.0) return b.back();
        while (hint > 0 && taus[hint] > x) --hint;
        while (hint + 1 < count && taus[hint + 1] <= x) ++hint;
        if (hint + 1 >= count) return b.back();
        double w = (x - taus[hint]) / (taus[hint + 1] - taus[hint]);
        return b[hint] + w * (b[hint + 1] - b[hint]);
    };

    for (std::size_t i = 0; i < count; ++i) {
        at(i, 0) = a[i];
        at(i, nt - 1) = b[i];
    }
    for (std::size_t j = 1; j + 1 < nt; ++j) {
        double t = ts[j];
        for (std::size_t i = 0; i < count; ++i) {
            double lower = std::max(a[i] - t * norm1, b[i] - (1.0 - t) * norm0);
            double best = std::numeric_limits<double>::infinity();
            std::size_t hint = count - 1;
            for (std::size_t i0 = 0; i0 < count; ++i0) {
                double x1 = (taus[i] - (1.0 - t) * taus[i0]) / t;
                if (x1 > 0.0) continue;
                best = std::min(best, (1.0 - t) * a[i0] + t * interp_b(x1, hint));
            }
            at(i, j) = std::max(lower, best);
        }
        at(count - 1, j) = 0.0;
    }

    std::vector<double> row(count);
    std::vector<double> col(nt);
    for (out.passes = 1; out.passes <= options.max_passes; ++out.passes) {
        double change = 0.0;
        for (std::size_t j = 1; j + 1 < nt; ++j) {
            for (std::size_t i = 0; i < count; ++i) row[i] = at(i, j);
            convexify(taus, row);
            for (std::size_t i = 1; i < count; ++i) row[i] = std::max(row[i], row[i - 1]);
            for (std::size_t i = 0; i < count; ++i) {
                change = std::max(change, std::abs(row[i] - at(i, j)));
                at(i, j) = row[i];
            }
        }
        for (std::size_t i = 0; i + 1 < count; ++i) {
            for (std::size_t j = 0; j < nt; ++j) col[j] = at(i, j);
            convexify(ts, col);
            for (std::size_t j = 1; j + 1 < nt; ++j) {
                change = std::max(change, std::abs(col[j] - at(i, j)));
                at(i, j) = col[j];
            }
        }
        out.residuals.push_back(change);
        if (change < options.tolerance) return out;
    }
    std::ostringstream msg;
    msg << "Perron sweep did not settle after " << options.max_passes << " passes; residuals:";
    for (double r : out.residuals) msg << ' ' << r;
    fail(ErrorCode::Iteration, msg.str());
}

}  // namespace hessmetric::oracle
