#include "hessmetric/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "hessmetric/error.hpp"

namespace hessmetric::core {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
}

// Slope of g on the open interval (lo, hi) that lies between consecutive merged breakpoints.
double slope_on_interval(const RadialProfile& g, double lo, double hi) {
    double mid;
    if (lo == -kInf) mid = hi - 1.0;
    else mid = 0.5 * (lo + hi);
    const auto& bps = g.breakpoints();
    auto idx = static_cast<std::size_t>(std::upper_bound(bps.begin(), bps.end(), mid) - bps.begin());
    return g.slopes()[idx];
}

}  // namespace

double RadialProfile::infimum() const {
    if (slopes_.front() > 0.0) return -kInf;
    return values_.empty() ? 0.0 : values_.front();
}

RadialProfile make_profile(std::vector<double> breakpoints, std::vector<double> slopes, Coordinate coord) {
    validate(coord);
    if (slopes.size() != breakpoints.size() + 1)
        fail(ErrorCode::InvalidArgument, "expected " + std::to_string(breakpoints.size() + 1) + " slopes for " +
                                             std::to_string(breakpoints.size()) + " breakpoints, got " +
                                             std::to_string(slopes.size()));
    for (double b : breakpoints)
        if (!std::isfinite(b)) fail(ErrorCode::Domain, "breakpoint is not finite");
    for (double s : slopes)
        if (!std::isfinite(s)) fail(ErrorCode::Domain, "slope is not finite");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i - 1] < breakpoints[i]))
            fail(ErrorCode::Domain, "breakpoints must be strictly increasing at index " + std::to_string(i));
    if (!breakpoints.empty() && breakpoints.back() > 0.0)
        fail(ErrorCode::Boundary, "breakpoint " + describe(breakpoints.back()) +
                                      " lies beyond the boundary tau = 0, so g(0) would not vanish");
    if (slopes.front() < 0.0)
        fail(ErrorCode::Convexity, "leftmost slope " + describe(slopes.front()) + " is negative (decreasing profile)");
    for (std::size_t i = 1; i < slopes.size(); ++i)
        if (slopes[i] < slopes[i - 1])
            fail(ErrorCode::Convexity, "slopes decrease at index " + std::to_string(i) + ": " +
                                           describe(slopes[i - 1]) + " > " + describe(slopes[i]));

    if (!breakpoints.empty() && breakpoints.back() == 0.0) {
        breakpoints.pop_back();
        slopes.pop_back();
    }

    RadialProfile g;
    g.coord_ = coord;
    g.slopes_.clear();
    g.slopes_.push_back(slopes.front());
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (slopes[i + 1] == g.slopes_.back()) continue;
        g.breakpoints_.push_back(breakpoints[i]);
        g.slopes_.push_back(slopes[i + 1]);
    }

    std::size_t k = g.breakpoints_.size();
    g.values_.assign(k, 0.0);
    double right_tau = 0.0;
    double right_value = 0.0;
    for (std::size_t i = k; i-- > 0;) {
        right_value -= g.slopes_[i + 1] * (right_tau - g.breakpoints_[i]);
        right_tau = g.breakpoints_[i];
        g.values_[i] = right_value;
    }
    return g;
}

RadialProfile profile_from_vertices(const std::vector<double>& taus, const std::vector<double>& values,
                                    double left_slope, Coordinate coord, const std::vector<double>* piece_slopes,
                                    double repair_tol) {
    if (taus.size() != values.size() || taus.empty())
        fail(ErrorCode::InvalidArgument, "vertex lists must be nonempty and of equal length");
    if (taus.back() != 0.0) fail(ErrorCode::Boundary, "last vertex must sit at tau = 0");
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    if (std::abs(values.back()) > 1e-12 * std::max(scale, 1.0))
        fail(ErrorCode::Boundary, "profile value at tau = 0 is " + describe(values.back()) + ", expected 0");

    // starts[k] is where piece k begins; piece 0 is the left ray.
    std::vector<double> starts{-kInf};
    std::vector<double> slopes{left_slope};
    for (std::size_t i = 1; i < taus.size(); ++i) {
        double s = piece_slopes ? (*piece_slopes)[i - 1] : (values[i] - values[i - 1]) / (taus[i] - taus[i - 1]);
        double start = taus[i - 1];
        while (s < slopes.back()) {
            double tol = repair_tol * std::max({std::abs(s), std::abs(slopes.back()), 1.0});
            if (slopes.back() - s > tol)
                fail(ErrorCode::Convexity, "vertices are not convex near tau = " + describe(start) + " (slope drop " +
                                               describe(slopes.back() - s) + ")");
            if (slopes.size() == 1) {
                s = slopes.back();
                break;
            }
            double len_prev = start - starts.back();
            double len_cur = taus[i] - start;
            s = (slopes.back() * len_prev + s * len_cur) / (len_prev + len_cur);
            start = starts.back();
            starts.pop_back();
            slopes.pop_back();
        }
        starts.push_back(start);
        slopes.push_back(s);
    }
    std::vector<double> bps(starts.begin() + 1, starts.end());
    return make_profile(std::move(bps), std::move(slopes), coord);
}

double evaluate(const RadialProfile& g, double tau) {
    if (std::isnan(tau)) fail(ErrorCode::Domain, "cannot evaluate a profile at NaN");
    const auto& bps = g.breakpoints();
    const auto& sl = g.slopes();
    if (tau >= 0.0) return sl.back() * tau;
    if (tau == -kInf) return g.infimum();
    auto idx = static_cast<std::size_t>(std::upper_bound(bps.begin(), bps.end(), tau) - bps.begin());
    double right_tau = idx < bps.size() ? bps[idx] : 0.0;
    double right_value = idx < bps.size() ? g.vertex_values()[idx] : 0.0;
    return right_value - sl[idx] * (right_tau - tau);
}

void require_same_coordinate(const RadialProfile& g1, const RadialProfile& g2) {
    if (!(g1.coordinate() == g2.coordinate()))
        fail(ErrorCode::Coordinate, "profiles live in different radial coordinates (n=" +
                                        std::to_string(g1.coordinate().n) + ",q=" + std::to_string(g1.coordinate().q) +
                                        " vs n=" + std::to_string(g2.coordinate().n) +
                                        ",q=" + std::to_string(g2.coordinate().q) + ")");
}

std::vector<double> merged_breakpoints(const RadialProfile& g1, const RadialProfile& g2) {
    std::vector<double> out;
    out.reserve(g1.size() + g2.size());
    std::merge(g1.breakpoints().begin(), g1.breakpoints().end(), g2.breakpoints().begin(), g2.breakpoints().end(),
               std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

RadialProfile combine(double alpha, const RadialProfile& g1, double beta, const RadialProfile& g2) {
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
        fail(ErrorCode::InvalidArgument, "combine weights must be finite and nonnegative");
    require_same_coordinate(g1, g2);
    std::vector<double> bps = merged_breakpoints(g1, g2);
    std::vector<double> slopes;
    slopes.reserve(bps.size() + 1);
    double lo = -kInf;
    for (std::size_t i = 0; i <= bps.size(); ++i) {
        double hi = i < bps.size() ? bps[i] : 0.0;
        slopes.push_back(alpha * slope_on_interval(g1, lo, hi) + beta * slope_on_interval(g2, lo, hi));
        lo = hi;
    }
    return make_profile(std::move(bps), std::move(slopes), g1.coordinate());
}

RadialProfile scale(double alpha, const RadialProfile& g) { return combine(alpha, g, 0.0, g); }

RadialProfile sum(const RadialProfile& g1, const RadialProfile& g2) { return combine(1.0, g1, 1.0, g2); }

RadialProfile pointwise_max(const RadialProfile& g1, const RadialProfile& g2) {
    require_same_coordinate(g1, g2);
    std::vector<double> grid = merged_breakpoints(g1, g2);
    grid.push_back(0.0);
    std::vector<double> taus;
    std::vector<double> owner_slopes;
    double left = -kInf;
    for (double right : grid) {
        double s1 = slope_on_interval(g1, left, right);
        double s2 = slope_on_interval(g2, left, right);
        double d_right = evaluate(g1, right) - evaluate(g2, right);
        if (left != -kInf) {
            double d_left = evaluate(g1, left) - evaluate(g2, left);
            if ((d_left < 0.0 && d_right > 0.0) || (d_left > 0.0 && d_right < 0.0)) {
                double x = left + (right - left) * d_left / (d_left - d_right);
                if (x > left && x < right) {
                    taus.push_back(x);
                    owner_slopes.push_back(d_left > 0.0 ? s1 : s2);
                }
            }
            taus.push_back(right);
            owner_slopes.push_back(d_right > 0.0 || (d_right == 0.0 && d_left > 0.0) ? s1 : s2);
        } else {
            // On the left ray the larger leftmost slope loses eventually; crossings there
            // only occur for unbounded profiles.
            double s_hi = std::max(s1, s2);
            double s_lo = std::min(s1, s2);
            double g_hi = s1 >= s2 ? evaluate(g1, right) : evaluate(g2, right);
            double g_lo = s1 >= s2 ? evaluate(g2, right) : evaluate(g1, right);
            if (s_hi > s_lo && g_hi > g_lo) {
                double x = right - (g_hi - g_lo) / (s_hi - s_lo);
                taus.push_back(x);
                owner_slopes.push_back(s_lo);
            }
            taus.push_back(right);
            owner_slopes.push_back(d_right > 0.0 ? s1 : (d_right < 0.0 ? s2 : s_lo));
        }
        left = right;
    }
    // owner_slopes[i] is the slope on the piece ending at taus[i].
    std::vector<double> values;
    for (double x : taus) values.push_back(std::max(evaluate(g1, x), evaluate(g2, x)));
    values.back() = 0.0;
    std::vector<double> piece(owner_slopes.begin() + 1, owner_slopes.end());
    return profile_from_vertices(taus, values, owner_slopes.front(), g1.coordinate(), &piece);
}

double sup_distance(const RadialProfile& g1, const RadialProfile& g2) {
    require_same_coordinate(g1, g2);
    if (g1.leftmost_slope() != g2.leftmost_slope()) return kInf;
    double best = 0.0;
    for (double x : merged_breakpoints(g1, g2)) best = std::max(best, std::abs(evaluate(g1, x) - evaluate(g2, x)));
    return best;
}

bool pointwise_leq(const RadialProfile& g1, const RadialProfile& g2, double tol) {
    require_same_coordinate(g1, g2);
    if (g1.leftmost_slope() < g2.leftmost_slope()) return false;
    for (double x : merged_breakpoints(g1, g2))
        if (evaluate(g1, x) > evaluate(g2, x) + tol) return false;
    return true;
}

std::vector<std::size_t> lower_hull(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        while (hull.size() >= 2) {
            std::size_t a = hull[hull.size() - 2];
            std::size_t b = hull.back();
            double cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a]);
            if (cross <= 0.0) hull.pop_back();
            else break;
        }
        hull.push_back(i);
    }
    return hull;
}

double evaluate_transported(const RadialProfile& g, double tau_to, const Coordinate& to) {
    return evaluate(g, transport_tau(tau_to, to, g.coordinate()));
}

RadialProfile reparameterize(const RadialProfile& g, int q_to, const ReparameterizeOptions& options) {
    Coordinate from = g.coordinate();
    Coordinate to{from.n, q_to};
    validate(to);
    if (from == to) return g;
    if (g.is_zero()) return RadialProfile(to);
    if (options.resolution < 2) fail(ErrorCode::InvalidArgument, "reparameterize needs resolution >= 2");

    double first = g.breakpoints().empty() ? -1.0 : g.breakpoints().front();
    double left = transport_tau(first, from, to);
    if (!g.is_bounded()) left = std::min(4.0 * left, left - 4.0);

    std::vector<double> taus;
    taus.reserve(options.resolution + g.size() + 1);
    for (int i = 0; i < options.resolution; ++i) {
        taus.push_back(left * (1.0 - static_cast<double>(i) / (options.resolution - 1)));
    }
    taus.back() = 0.0;
    for (double b : g.breakpoints()) taus.push_back(transport_tau(b, from, to));
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
    while (taus.size() > 1 && taus.front() < left) taus.erase(taus.begin());

    std::vector<double> values;
    values.reserve(taus.size());
    for (double t : taus) values.push_back(evaluate(g, transport_tau(t, to, from)));
    values.back() = 0.0;

    double scale = std::max(g.sup_norm(), 0.0);
    if (!std::isfinite(scale)) scale = std::abs(values.front());
    auto hull = lower_hull(taus, values);
    double deviation = 0.0;
    std::size_t h = 0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        while (h + 1 < hull.size() && taus[hull[h + 1]] < taus[i]) ++h;
        std::size_t a = hull[h];
        std::size_t b = hull[std::min(h + 1, hull.size() - 1)];
        double hv = values[a];
        if (b != a) hv = values[a] + (values[b] - values[a]) * (taus[i] - taus[a]) / (taus[b] - taus[a]);
        deviation = std::max(deviation, values[i] - hv);
    }
    if (deviation > options.repair_tol * std::max(scale, 1e-300))
        fail(ErrorCode::Membership, "profile is not convex in the order-" + std::to_string(q_to) +
                                        " coordinate (chord deviation " + describe(deviation) + ")");

    std::vector<double> hx;
    std::vector<double> hy;
    for (std::size_t i : hull) {
        hx.push_back(taus[i]);
        hy.push_back(values[i]);
    }
    double left_slope = 0.0;
    if (!g.is_bounded() && hx.size() > 1) left_slope = (hy[1] - hy[0]) / (hx[1] - hx[0]);
    return profile_from_vertices(hx, hy, left_slope, to, nullptr, 1e-9);
}

}  // namespace hessmetric::core
