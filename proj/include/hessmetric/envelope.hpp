#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hessmetric/hessian.hpp"

namespace hessmetric::envelope {

using calculus::AtomicMeasure;
using calculus::HessianParams;
using core::RadialProfile;

RadialProfile dirichlet_solve(const AtomicMeasure& mu, const HessianParams& params);

// H_m(phi) = F(phi(tau_k), k) mu_k at every atom of mu.
struct HteProblem {
    AtomicMeasure mu;
    std::function<double(double, std::size_t)> field;
    HessianParams params;
    // Optional log F and its x-derivative, which avoid overflow for exponential fields.
    std::function<double(double, std::size_t)> log_field;
    std::function<double(double, std::size_t)> log_field_derivative;
};

struct IterationRecord {
    double j = 0.0;
    int iteration = 0;
    double residual = 0.0;
    double sup_change = 0.0;
    double e1 = 0.0;
};

struct LevelRecord {
    double j = 0.0;
    double change_from_previous = 0.0;
    bool monotone = true;
    bool below_obstacles = true;
    bool unique = true;
    double residual = 0.0;
};

struct IterationLog {
    std::vector<IterationRecord> iterations;
    std::vector<LevelRecord> levels;
    bool monotone = true;
    bool below_obstacles = true;
    bool unique = true;
};

struct HteOptions {
    int max_iter = 200;
    double mass_tol = 1e-10;
    double min_damping = 1e-12;
    bool verify_uniqueness = true;
    double uniqueness_tol = 1e-8;
    std::optional<RadialProfile> second_start;
    // Tag copied into the iteration records.
    double j = 0.0;
};

struct HteResult {
    RadialProfile solution;
    IterationLog log;
    double residual = 0.0;
};

HteResult hte_solve(const HteProblem& problem, const RadialProfile& phi_init, const HteOptions& options = {});

struct EnvelopeOptions {
    double j_start = 1.0;
    double j_max = 1099511627776.0;  // 2^40
    double stop_change = 1e-8;
    double slack = 1e-10;
    bool verify_uniqueness = true;
};

struct EnvelopeResult {
    RadialProfile envelope;
    IterationLog log;
    double j_final = 0.0;
};

EnvelopeResult envelope_via_hte(const RadialProfile& u, const RadialProfile& v, const HessianParams& params,
                                const EnvelopeOptions& options = {});

}  // namespace hessmetric::envelope
