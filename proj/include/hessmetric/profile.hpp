#pragma once

#include <cstddef>
#include <vector>

#include "hessmetric/coordinate.hpp"

namespace hessmetric::core {

// Convex nondecreasing piecewise-linear function of tau <= 0 with g(0) = 0.
// Canonical form: breakpoints strictly increasing and strictly negative,
// slopes strictly increasing, slopes.size() == breakpoints.size() + 1.
class RadialProfile {
public:
    RadialProfile() = default;
    explicit RadialProfile(Coordinate coord) : coord_(coord), slopes_{0.0} {}

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& slopes() const { return slopes_; }
    // g at each breakpoint, in the same order.
    const std::vector<double>& vertex_values() const { return values_; }
    Coordinate coordinate() const { return coord_; }

    std::size_t size() const { return breakpoints_.size(); }
    bool is_zero() const { return breakpoints_.empty() && slopes_.front() == 0.0; }
    bool is_bounded() const { return slopes_.front() == 0.0; }
    double leftmost_slope() const { return slopes_.front(); }
    double rightmost_slope() const { return slopes_.back(); }
    // Limit of g at -infinity (-inf for unbounded profiles).
    double infimum() const;
    // sup |g| over tau <= 0.
    double sup_norm() const { return -infimum(); }

    bool operator==(const RadialProfile& other) const {
        return coord_ == other.coord_ && breakpoints_ == other.breakpoints_ && slopes_ == other.slopes_;
    }

private:
    friend RadialProfile make_profile(std::vector<double>, std::vector<double>, Coordinate);

    Coordinate coord_{};
    std::vector<double> breakpoints_;
    std::vector<double> slopes_{0.0};
    std::vector<double> values_;
};

RadialProfile make_profile(std::vector<double> breakpoints, std::vector<double> slopes, Coordinate coord);

// Builds a profile from vertices (tau_i, value_i) ending with (0, 0). When piece slopes
// are supplied they override the chord slopes. Slope decreases below `repair_tol`
// relative are merged away; larger ones raise a convexity error.
RadialProfile profile_from_vertices(const std::vector<double>& taus, const std::vector<double>& values,
                                    double left_slope, Coordinate coord,
                                    const std::vector<double>* piece_slopes = nullptr,
                                    double repair_tol = 1e-12);

double evaluate(const RadialProfile& g, double tau);

RadialProfile combine(double alpha, const RadialProfile& g1, double beta, const RadialProfile& g2);
RadialProfile scale(double alpha, const RadialProfile& g);
RadialProfile sum(const RadialProfile& g1, const RadialProfile& g2);

// Pointwise maximum, which stays convex and nondecreasing.
RadialProfile pointwise_max(const RadialProfile& g1, const RadialProfile& g2);

// Union of breakpoints of both profiles, sorted, duplicates removed.
std::vector<double> merged_breakpoints(const RadialProfile& g1, const RadialProfile& g2);

double sup_distance(const RadialProfile& g1, const RadialProfile& g2);
bool pointwise_leq(const RadialProfile& g1, const RadialProfile& g2, double tol = 0.0);

void require_same_coordinate(const RadialProfile& g1, const RadialProfile& g2);

// Indices of the lower convex hull of points sorted by strictly increasing x.
std::vector<std::size_t> lower_hull(const std::vector<double>& xs, const std::vector<double>& ys);

struct ReparameterizeOptions {
    int resolution = 2048;
    double repair_tol = 1e-9;
};

RadialProfile reparameterize(const RadialProfile& g, int q_to, const ReparameterizeOptions& options = {});

// Samples profile in coordinate q_to as g composed with the coordinate change, no refit.
double evaluate_transported(const RadialProfile& g, double tau_to, const Coordinate& to);

}  // namespace hessmetric::core
