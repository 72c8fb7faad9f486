#include "hessmetric/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "hessmetric/energy.hpp"
#include "hessmetric/error.hpp"

namespace hessmetric::envelope {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLogFloor = -700.0;

double root_m(double x, int m) {
    if (m == 1) return x;
    if (m == 2) return std::sqrt(x);
    if (m == 3) return std::cbrt(x);
    return std::pow(x, 1.0 / m);
}

void check_measure(const AtomicMeasure& mu) {
    for (std::size_t k = 0; k < mu.atoms.size(); ++k) {
        const auto& a = mu.atoms[k];
        if (!std::isfinite(a.tau) || !std::isfinite(a.mass))
            fail(ErrorCode::Domain, "atom " + std::to_string(k) + " is not finite");
        if (a.mass < 0.0) fail(ErrorCode::Domain, "atom " + std::to_string(k) + " has negative mass");
        if (a.tau > 0.0) fail(ErrorCode::Domain, "atom " + std::to_string(k) + " lies outside tau <= 0");
        if (k > 0 && !(mu.atoms[k - 1].tau < a.tau))
            fail(ErrorCode::Domain, "atom locations must be strictly increasing");
    }
}

// Values at the atoms of the profile whose Hessian masses are `masses`; also the weights
// w_l = sigma_l (tau_{l+1} - tau_l) / (m S_l) that make up its Jacobian.
void values_from_masses(const std::vector<double>& taus, const std::vector<double>& masses, double c, int m,
                        std::vector<double>& x, std::vector<double>& w) {
    std::size_t k = taus.size();
    x.assign(k, 0.0);
    w.assign(k, 0.0);
    std::vector<double> sigma(k);
    double cumulative = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        cumulative += masses[i];
        sigma[i] = root_m(cumulative / c, m);
        double right = i + 1 < k ? taus[i + 1] : 0.0;
        w[i] = cumulative > 0.0 ? sigma[i] * (right - taus[i]) / (m * cumulative) : 0.0;
    }
    double acc = 0.0;
    for (std::size_t i = k; i-- > 0;) {
        double right = i + 1 < k ? taus[i + 1] : 0.0;
        acc -= sigma[i] * (right - taus[i]);
        x[i] = acc;
    }
}

bool solve_linear(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (a[piv * n + col] == 0.0) return false;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a[r * n + col] / a[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < n; ++c) acc -= a[r * n + c] * b[c];
        b[r] = acc / a[r * n + r];
    }
    return true;
}

struct Evaluation {
    bool ok = false;
    std::vector<double> masses;
    std::vector<double> x;
    std::vector<double> w;
    std::vector<double> residual;
    std::vector<double> dlog;
    double norm = 0.0;
    double noise = 0.0;
};

class LogMassSystem {
public:
    LogMassSystem(const HteProblem& problem, std::vector<double> taus, std::vector<std::size_t> index)
        : problem_(problem), taus_(std::move(taus)), index_(std::move(index)) {}

    std::size_t size() const { return taus_.size(); }

    double log_field(double x, std::size_t k) const {
        std::size_t a = index_[k];
        double base = std::log(problem_.mu.atoms[a].mass);
        if (problem_.log_field) return problem_.log_field(x, a) + base;
        double f = problem_.field(x, a);
        if (!(f >= 0.0) || std::isnan(f)) fail(ErrorCode::Domain, "field returned a negative or NaN value");
        return std::max(std::log(f), kLogFloor) + base;
    }

    double log_field_derivative(double x, std::size_t k) const {
        std::size_t a = index_[k];
        if (problem_.log_field_derivative) return problem_.log_field_derivative(x, a);
        double h = 1e-7 * (1.0 + std::abs(x));
        return (log_field(x + h, k) - log_field(x - h, k)) / (2.0 * h);
    }

    Evaluation evaluate(const std::vector<double>& ell) const {
        Evaluation e;
        std::size_t k = size();
        e.masses.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (!(ell[i] < 700.0)) return e;
            e.masses[i] = std::exp(ell[i]);
        }
        values_from_masses(taus_, e.masses, problem_.params.c, problem_.params.m, e.x, e.w);
        e.residual.resize(k);
        e.dlog.resize(k);
        double xmax = 0.0;
        double slope = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double target = log_field(e.x[i], i);
            if (!std::isfinite(target)) return e;
            e.residual[i] = ell[i] - target;
            e.dlog[i] = log_field_derivative(e.x[i], i);
            e.norm = std::max(e.norm, std::abs(e.residual[i]));
            xmax = std::max(xmax, std::abs(e.x[i]));
            slope = std::max(slope, std::abs(e.dlog[i]));
        }
        e.noise = 64.0 * kEps * (1.0 + slope * (1.0 + xmax));
        e.ok = std::isfinite(e.norm);
        return e;
    }

    // Newton direction for R(ell) = ell - L(x(e^ell)).
    bool direction(const Evaluation& e, std::vector<double>& delta) const {
        std::size_t k = size();
        std::vector<double> suffix(k + 1, 0.0);
        for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] + e.w[i];
        std::vector<double> jac(k * k);
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = 0; c < k; ++c)
                jac[r * k + c] = (r == c ? 1.0 : 0.0) + e.dlog[r] * suffix[std::max(r, c)] * e.masses[c];
        delta.resize(k);
        for (std::size_t i = 0; i < k; ++i) delta[i] = -e.residual[i];
        return solve_linear(jac, delta, k);
    }

private:
    const HteProblem& problem_;
    std::vector<double> taus_;
    std::vector<std::size_t> index_;
};

HteResult solve_once(const HteProblem& problem, const RadialProfile& phi_init, const HteOptions& options) {
    std::vector<double> taus;
    std::vector<std::size_t> index;
    for (std::size_t a = 0; a < problem.mu.atoms.size(); ++a) {
        if (problem.mu.atoms[a].mass > 0.0) {
            taus.push_back(problem.mu.atoms[a].tau);
            index.push_back(a);
        }
    }
    HteResult result;
    if (taus.empty()) {
        result.solution = RadialProfile(problem.params.coordinate());
        return result;
    }
    LogMassSystem system(problem, taus, index);
    std::size_t k = system.size();
    std::vector<double> ell(k);
    for (std::size_t i = 0; i < k; ++i) ell[i] = system.log_field(core::evaluate(phi_init, taus[i]), i);

    Evaluation cur = system.evaluate(ell);
    if (!cur.ok) fail(ErrorCode::Iteration, "field is not finite at the starting profile");
    std::vector<double> previous_x = cur.x;
    bool converged = false;
    for (int it = 0; it <= options.max_iter; ++it) {
        double change = 0.0;
        for (std::size_t i = 0; i < k; ++i) change = std::max(change, std::abs(cur.x[i] - previous_x[i]));
        double e1 = 0.0;
        for (std::size_t i = 0; i < k; ++i) e1 -= cur.x[i] * cur.masses[i];
        result.log.iterations.push_back({options.j, it, cur.norm, change, e1});
        previous_x = cur.x;
        if (cur.norm <= std::max(options.mass_tol, cur.noise)) {
            converged = true;
            break;
        }
        if (it == options.max_iter) break;
        std::vector<double> delta;
        if (!system.direction(cur, delta)) break;
        double lambda = 1.0;
        bool accepted = false;
        while (lambda >= options.min_damping) {
            std::vector<double> trial(k);
            for (std::size_t i = 0; i < k; ++i) trial[i] = ell[i] + lambda * delta[i];
            Evaluation next = system.evaluate(trial);
            if (next.ok && next.norm < (1.0 - 1e-4 * lambda) * cur.norm) {
                ell = trial;
                cur = std::move(next);
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            // Stalled at the rounding floor of the residual.
            if (cur.norm <= 1e3 * cur.noise) converged = true;
            break;
        }
    }
    result.residual = cur.norm;
    if (!converged) {
        std::ostringstream msg;
        msg << "HTE iteration did not converge (j=" << options.j << ", residual " << cur.norm << ", noise floor "
            << cur.noise << "); residual log:";
        for (const auto& rec : result.log.iterations) msg << ' ' << rec.residual;
        fail(ErrorCode::Iteration, msg.str());
    }
    AtomicMeasure masses;
    for (std::size_t i = 0; i < k; ++i) masses.atoms.push_back({taus[i], cur.masses[i]});
    result.solution = dirichlet_solve(masses, problem.params);
    return result;
}

}  // namespace

RadialProfile dirichlet_solve(const AtomicMeasure& mu, const HessianParams& params) {
    calculus::validate(params);
    check_measure(mu);
    std::vector<double> bps;
    std::vector<double> slopes{0.0};
    double cumulative = 0.0;
    for (const auto& a : mu.atoms) {
        if (a.mass == 0.0) continue;
        cumulative += a.mass;
        bps.push_back(a.tau);
        slopes.push_back(root_m(cumulative / params.c, params.m));
    }
    return core::make_profile(std::move(bps), std::move(slopes), params.coordinate());
}

HteResult hte_solve(const HteProblem& problem, const RadialProfile& phi_init, const HteOptions& options) {
    calculus::validate(problem.params);
    check_measure(problem.mu);
    if (!problem.field && !problem.log_field) fail(ErrorCode::InvalidArgument, "HTE problem has no field");
    if (!(phi_init.coordinate() == problem.params.coordinate()))
        fail(ErrorCode::Coordinate, "initial profile must live in the order-m coordinate");
    HteResult result = solve_once(problem, phi_init, options);
    if (options.verify_uniqueness) {
        RadialProfile start2 = options.second_start ? *options.second_start : core::scale(2.0, phi_init);
        HteOptions inner = options;
        inner.verify_uniqueness = false;
        HteResult other = solve_once(problem, start2, inner);
        double scale = std::max(1.0, result.solution.sup_norm());
        result.log.unique = core::sup_distance(result.solution, other.solution) <= options.uniqueness_tol * scale;
    }
    return result;
}

EnvelopeResult envelope_via_hte(const RadialProfile& u, const RadialProfile& v, const HessianParams& params,
                                const EnvelopeOptions& options) {
    core::require_same_coordinate(u, v);
    AtomicMeasure hu = calculus::hessian_measure(u, params);
    AtomicMeasure hv = calculus::hessian_measure(v, params);
    AtomicMeasure mu = calculus::merge_measures(hu, hv);
    std::size_t k = mu.atoms.size();
    std::vector<double> mass_u(k, 0.0);
    std::vector<double> mass_v(k, 0.0);
    std::vector<double> u_at(k);
    std::vector<double> v_at(k);
    for (std::size_t i = 0; i < k; ++i) {
        double tau = mu.atoms[i].tau;
        for (const auto& a : hu.atoms)
            if (std::abs(a.tau - tau) <= 1e-12) mass_u[i] += a.mass;
        for (const auto& a : hv.atoms)
            if (std::abs(a.tau - tau) <= 1e-12) mass_v[i] += a.mass;
        u_at[i] = core::evaluate(u, tau);
        v_at[i] = core::evaluate(v, tau);
    }

    EnvelopeResult result;
    if (k == 0) {
        result.envelope = RadialProfile(params.coordinate());
        return result;
    }
    double scale = std::max({u.sup_norm(), v.sup_norm(), 1e-300});

    // Dense check grid for the obstacle inequality.
    std::vector<double> grid = core::merged_breakpoints(u, v);
    double left = grid.front() - 1.0;
    for (int i = 0; i <= 400; ++i) grid.push_back(left * (1.0 - i / 400.0));
    std::sort(grid.begin(), grid.end());

    RadialProfile previous;
    bool have_previous = false;
    for (double j = options.j_start; j <= options.j_max; j *= 2.0) {
        HteProblem problem;
        problem.mu = mu;
        problem.params = params;
        problem.log_field = [&, j](double x, std::size_t i) {
            double a = mass_u[i] > 0.0 ? j * (x - u_at[i]) + std::log(mass_u[i]) : -INFINITY;
            double b = mass_v[i] > 0.0 ? j * (x - v_at[i]) + std::log(mass_v[i]) : -INFINITY;
            double top = std::max(a, b);
            return top + std::log(std::exp(a - top) + std::exp(b - top)) - std::log(mu.atoms[i].mass);
        };
        problem.log_field_derivative = [j](double, std::size_t) { return j; };
        problem.field = [&](double x, std::size_t i) { return std::exp(problem.log_field(x, i)); };

        RadialProfile start;
        if (!have_previous) {
            AtomicMeasure psi_mass;
            for (std::size_t i = 0; i < k; ++i)
                psi_mass.atoms.push_back({mu.atoms[i].tau, std::exp(problem.log_field(0.0, i)) * mu.atoms[i].mass});
            start = dirichlet_solve(psi_mass, params);
        } else {
            start = previous;
        }
        HteOptions hopt;
        hopt.j = j;
        hopt.verify_uniqueness = options.verify_uniqueness;
        hopt.second_start = core::sum(u, v);
        HteResult level = hte_solve(problem, start, hopt);
        result.log.iterations.insert(result.log.iterations.end(), level.log.iterations.begin(),
                                     level.log.iterations.end());

        LevelRecord rec;
        rec.j = j;
        rec.unique = level.log.unique;
        rec.residual = level.residual;
        for (double x : grid) {
            double phi = core::evaluate(level.solution, x);
            if (phi > std::min(core::evaluate(u, x), core::evaluate(v, x)) + options.slack * scale)
                rec.below_obstacles = false;
        }
        if (have_previous) {
            rec.change_from_previous = core::sup_distance(level.solution, previous);
            for (double x : grid)
                if (core::evaluate(level.solution, x) < core::evaluate(previous, x) - options.slack * scale)
                    rec.monotone = false;
        }
        result.log.levels.push_back(rec);
        result.log.monotone = result.log.monotone && rec.monotone;
        result.log.below_obstacles = result.log.below_obstacles && rec.below_obstacles;
        result.log.unique = result.log.unique && rec.unique;
        result.j_final = j;
        bool stop = have_previous && rec.change_from_previous < options.stop_change * scale;
        previous = level.solution;
        have_previous = true;
        if (stop) break;
    }
    result.envelope = previous;
    return result;
}

}  // namespace hessmetric::envelope
