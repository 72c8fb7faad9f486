#include "hessmetric/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hessmetric/error.hpp"
#include "hessmetric/io.hpp"
#include "hessmetric/oracle.hpp"

namespace hessmetric::calculus {

namespace {

constexpr int kConstantGridSize = 1 << 16;

double int_pow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

std::string cache_key(int n, int m) { return std::to_string(n) + "," + std::to_string(m); }

struct ConstantCache {
    std::mutex mutex;
    std::map<std::pair<int, int>, double> values;
};

ConstantCache& constant_cache() {
    static ConstantCache cache;
    return cache;
}

double read_cached(const std::string& path, int n, int m) {
    std::ifstream in(path);
    if (!in) return 0.0;
    try {
        auto doc = nlohmann::json::parse(in);
        auto it = doc.find(cache_key(n, m));
        if (it != doc.end() && it->is_number()) {
            double c = it->get<double>();
            if (c > 0.0 && std::isfinite(c)) return c;
        }
    } catch (const nlohmann::json::exception&) {
    }
    return 0.0;
}

void write_cached(const std::string& path, int n, int m, double c) {
    nlohmann::json doc = nlohmann::json::object();
    {
        std::ifstream in(path);
        if (in) {
            try {
                doc = nlohmann::json::parse(in);
                if (!doc.is_object()) doc = nlohmann::json::object();
            } catch (const nlohmann::json::exception&) {
                doc = nlohmann::json::object();
            }
        }
    }
    doc[cache_key(n, m)] = c;
    try {
        io::write_file_atomic(path, doc.dump(2) + "\n");
    } catch (const Error&) {
        // An unwritable cache only costs a recomputation next run.
    }
}

}  // namespace

double hessian_constant_closed_form(int n, int m) {
    core::validate(core::Coordinate{n, m});
    if (m == n) return int_pow(2.0 * std::numbers::pi, n);
    return int_pow(4.0 * std::numbers::pi, n) * int_pow(static_cast<double>(n - m) / m, m);
}

double hessian_constant(int n, int m) {
    core::validate(core::Coordinate{n, m});
    if (m == n) return int_pow(2.0 * std::numbers::pi, n);
    auto& cache = constant_cache();
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto it = cache.values.find({n, m});
    if (it != cache.values.end()) return it->second;
    const char* env = std::getenv("HESSMETRIC_CACHE");
    std::string path = env ? env : "";
    double c = path.empty() ? 0.0 : read_cached(path, n, m);
    if (c == 0.0) {
        c = oracle::kink_mass_constant(n, m, kConstantGridSize);
        if (!path.empty()) write_cached(path, n, m, c);
    }
    cache.values[{n, m}] = c;
    return c;
}

HessianParams make_params(int n, int m) {
    HessianParams params{n, m, 0.0};
    core::validate(params.coordinate());
    params.c = hessian_constant(n, m);
    return params;
}

void validate(const HessianParams& params) {
    core::validate(params.coordinate());
    if (!(params.c > 0.0) || !std::isfinite(params.c))
        fail(ErrorCode::InvalidArgument, "Hessian constant must be positive and finite");
}

double AtomicMeasure::total() const {
    double t = 0.0;
    for (const auto& a : atoms) t += a.mass;
    return t;
}

AtomicMeasure merge_measures(const AtomicMeasure& a, const AtomicMeasure& b, double tol) {
    std::vector<Atom> all = a.atoms;
    all.insert(all.end(), b.atoms.begin(), b.atoms.end());
    std::stable_sort(all.begin(), all.end(), [](const Atom& x, const Atom& y) { return x.tau < y.tau; });
    AtomicMeasure out;
    for (const auto& atom : all) {
        if (!out.atoms.empty() && atom.tau - out.atoms.back().tau <= tol) out.atoms.back().mass += atom.mass;
        else out.atoms.push_back(atom);
    }
    return out;
}

AtomicMeasure hessian_measure(const RadialProfile& g, const HessianParams& params) {
    validate(params);
    if (!(g.coordinate() == params.coordinate()))
        fail(ErrorCode::Coordinate, "Hessian measure of order " + std::to_string(params.m) +
                                        " needs a profile in the order-" + std::to_string(params.m) +
                                        " coordinate, got q=" + std::to_string(g.coordinate().q));
    if (!g.is_bounded())
        fail(ErrorCode::UnboundedMass, "leftmost slope is positive: the measure carries a Dirac mass at the origin");
    AtomicMeasure mu;
    mu.atoms.reserve(g.size());
    const auto& sl = g.slopes();
    for (std::size_t k = 0; k < g.size(); ++k) {
        double mass = params.c * (int_pow(sl[k + 1], params.m) - int_pow(sl[k], params.m));
        mu.atoms.push_back({g.breakpoints()[k], mass});
    }
    return mu;
}

AtomicMeasure mixed_measure(const std::vector<RadialProfile>& factors, const HessianParams& params) {
    validate(params);
    if (static_cast<int>(factors.size()) != params.m)
        fail(ErrorCode::Arity, "mixed measure of order " + std::to_string(params.m) + " needs " +
                                   std::to_string(params.m) + " factors, got " + std::to_string(factors.size()));
    for (const auto& f : factors)
        if (!(f.coordinate() == params.coordinate()))
            fail(ErrorCode::Coordinate, "mixed measure factors must be tagged with the order-m coordinate");

    const int m = params.m;
    std::map<double, double> acc;
    double scale = 0.0;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        RadialProfile partial(params.coordinate());
        int count = 0;
        for (int i = 0; i < m; ++i) {
            if (mask & (1u << i)) {
                partial = count == 0 ? factors[i] : core::sum(partial, factors[i]);
                ++count;
            }
        }
        AtomicMeasure pure = hessian_measure(partial, params);
        scale = std::max(scale, pure.total());
        double sign = ((m - count) % 2 == 0) ? 1.0 : -1.0;
        for (const auto& atom : pure.atoms) acc[atom.tau] += sign * atom.mass;
    }
    double factorial = 1.0;
    for (int i = 2; i <= m; ++i) factorial *= i;

    AtomicMeasure out;
    double floor = 1e-12 * scale;
    for (const auto& [tau, raw] : acc) {
        double mass = raw / factorial;
        if (mass < -floor) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "mixed measure has a negative atom " << mass << " at tau = " << tau << " (scale " << scale
                << "); atoms:";
            for (const auto& [t, r] : acc) msg << " (" << t << ", " << r / factorial << ")";
            fail(ErrorCode::Internal, msg.str());
        }
        if (mass <= floor) continue;
        out.atoms.push_back({tau, mass});
    }
    return out;
}

double integrate(const RadialProfile& u, const RadialProfile& w, const AtomicMeasure& mu) {
    core::require_same_coordinate(u, w);
    double total = 0.0;
    for (const auto& a : mu.atoms) total += (core::evaluate(u, a.tau) - core::evaluate(w, a.tau)) * a.mass;
    return total;
}

double integrate(const RadialProfile& h, const AtomicMeasure& mu) {
    double total = 0.0;
    for (const auto& a : mu.atoms) total += core::evaluate(h, a.tau) * a.mass;
    return total;
}

double e1_energy(const RadialProfile& g, const HessianParams& params) {
    AtomicMeasure mu = hessian_measure(g, params);
    double total = 0.0;
    for (std::size_t k = 0; k < mu.atoms.size(); ++k) total -= g.vertex_values()[k] * mu.atoms[k].mass;
    return total;
}

}  // namespace hessmetric::calculus
