// Runs the nine acceptance criteria at full size and prints one PASS/FAIL line per criterion.
// Usage: hessmetric_acceptance [out_dir] [seed]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "hessmetric/harness.hpp"
#include "hessmetric/hessian.hpp"

using namespace hessmetric;
using harness::Report;

namespace {

const std::vector<std::pair<int, int>> kParams{{2, 2}, {3, 2}, {2, 1}};

// Splits total trials across the parameter sets, first sets taking the remainder.
int share(int total, std::size_t index) {
    int k = static_cast<int>(kParams.size());
    return total / k + (static_cast<int>(index) < total % k ? 1 : 0);
}

struct Criterion {
    int id;
    std::string title;
    std::function<void(Report&, std::mt19937_64&)> run;
    double time_limit = 0.0;
};

}  // namespace

int main(int argc, char** argv) {
    std::string out_dir = argc > 1 ? argv[1] : "acceptance";
    std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20261016;
    std::filesystem::create_directories(out_dir);
    harness::RunOptions opts;
    opts.seed = seed;

    auto suite = [](void (*fn)(Report&, std::mt19937_64&, const calculus::HessianParams&, int), int total) {
        return [fn, total](Report& r, std::mt19937_64& rng) {
            for (std::size_t i = 0; i < kParams.size(); ++i)
                fn(r, rng, calculus::make_params(kParams[i].first, kParams[i].second), share(total, i));
        };
    };

    std::vector<Criterion> criteria{
        {1, "intro norm example", [&](Report& r, std::mt19937_64&) { r.append(harness::reproduce("intro-norm", opts)); },
         1.0},
        {2, "capacity example", [&](Report& r, std::mt19937_64&) { r.append(harness::reproduce("cap-example", opts)); }},
        {3, "topology incomparability",
         [&](Report& r, std::mt19937_64&) {
             r.append(harness::reproduce("topology-ex1", opts));
             r.append(harness::reproduce("topology-ex2", opts));
         }},
        {4, "metric axioms on 1000 triples", suite(harness::metric_suite, 1000), 30.0},
        {5, "envelope two-algorithm agreement on 200 pairs", suite(harness::envelope_suite, 200)},
        {6, "energy calculus on 200 instances", suite(harness::energy_suite, 200)},
        {7, "geodesic theorems", [&](Report& r, std::mt19937_64&) { r.append(harness::reproduce("geodesic-kinks", opts)); }},
        {8, "oracle consistency on 50 profiles",
         [&](Report& r, std::mt19937_64& rng) {
             suite(harness::oracle_suite, 50)(r, rng);
             harness::oracle_constant_suite(r, 2, 1, 4096);
             harness::oracle_constant_suite(r, 3, 2, 4096);
         }},
        {9, "convergence characterization",
         [&](Report& r, std::mt19937_64&) {
             for (auto [n, m] : kParams) harness::convergence_suite(r, calculus::make_params(n, m), 24);
             harness::convergence_suite(r, calculus::make_params(3, 3), 24);
         }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Report report("acceptance_" + std::to_string(c.id));
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(c.id));
        auto start = std::chrono::steady_clock::now();
        bool crashed = false;
        std::string crash;
        try {
            c.run(report, rng);
        } catch (const std::exception& e) {
            crashed = true;
            crash = e.what();
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0.0)
            report.at_most("runtime seconds", "criterion " + std::to_string(c.id), seconds, c.time_limit, "runtime budget");
        harness::write_report(report, out_dir, harness::Format::Csv);
        bool pass = !crashed && report.all_pass();
        if (!pass) ++failed;
        std::printf("CRITERION %d %s: %s (%zu checks, %zu failed, %.2f s)\n", c.id, pass ? "PASS" : "FAIL",
                    c.title.c_str(), report.rows().size(), report.failures(), seconds);
        if (crashed) std::printf("    error: %s\n", crash.c_str());
        for (const auto& row : report.rows())
            if (row.status == harness::Status::Fail)
                std::printf("    FAIL %s [%s] actual=%.17g\n", row.quantity.c_str(), row.inputs.c_str(), row.actual);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
