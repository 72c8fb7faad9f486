#include "hessmetric/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hessmetric/error.hpp"

namespace hessmetric::core {

namespace {

double dual_slope_on(const DualProfile& dual, double lo, double hi) {
    double mid = 0.5 * (lo + hi);
    auto idx = static_cast<std::size_t>(std::upper_bound(dual.knots.begin(), dual.knots.end(), mid) -
                                        dual.knots.begin());
    return idx < dual.slopes.size() ? dual.slopes[idx] : 0.0;
}

}  // namespace

DualProfile legendre(const RadialProfile& g) {
    DualProfile dual;
    dual.coord = g.coordinate();
    dual.start = g.slopes().front();
    dual.knots.assign(g.slopes().begin() + 1, g.slopes().end());
    dual.slopes = g.breakpoints();
    return dual;
}

RadialProfile legendre_inverse(const DualProfile& dual) {
    if (dual.knots.size() != dual.slopes.size())
        fail(ErrorCode::InvalidArgument, "dual profile needs one slope per knot");
    std::vector<double> slopes{dual.start};
    slopes.insert(slopes.end(), dual.knots.begin(), dual.knots.end());
    return make_profile(dual.slopes, std::move(slopes), dual.coord);
}

double evaluate_dual(const DualProfile& dual, double p) {
    if (p < dual.start) return std::numeric_limits<double>::infinity();
    double value = 0.0;
    for (std::size_t i = dual.knots.size(); i-- > 0;) {
        double lo = i == 0 ? dual.start : dual.knots[i - 1];
        if (p >= dual.knots[i]) break;
        double from = std::max(p, lo);
        value -= dual.slopes[i] * (dual.knots[i] - from);
    }
    return value;
}

DualProfile combine_dual(double alpha, const DualProfile& d0, double beta, const DualProfile& d1) {
    if (!(d0.coord == d1.coord)) fail(ErrorCode::Coordinate, "dual profiles live in different coordinates");
    if (!(alpha >= 0.0) || !(beta >= 0.0)) fail(ErrorCode::InvalidArgument, "dual weights must be nonnegative");
    DualProfile out;
    out.coord = d0.coord;
    out.start = std::max(alpha > 0.0 ? d0.start : 0.0, beta > 0.0 ? d1.start : 0.0);
    std::vector<double> knots;
    std::merge(d0.knots.begin(), d0.knots.end(), d1.knots.begin(), d1.knots.end(), std::back_inserter(knots));
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    double lo = out.start;
    for (double k : knots) {
        if (k <= out.start) continue;
        double s = alpha * dual_slope_on(d0, lo, k) + beta * dual_slope_on(d1, lo, k);
        out.knots.push_back(k);
        out.slopes.push_back(s);
        lo = k;
    }
    return out;
}

}  // namespace hessmetric::core
