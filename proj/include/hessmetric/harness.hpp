#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hessmetric/hessian.hpp"
#include "hessmetric/profile.hpp"

namespace hessmetric::harness {

using core::RadialProfile;
using calculus::HessianParams;

enum class Status { Pass, Fail, Info };

const char* status_name(Status s);

struct CheckRow {
    std::string quantity;
    std::string inputs;
    std::optional<double> expected;
    double actual = 0.0;
    std::optional<double> rel_err;
    std::optional<double> tolerance;
    std::string provenance;
    Status status = Status::Info;
};

// Free-form numeric side table (traces, reproduced example tables).
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(const std::vector<double>& values);
    void add(std::vector<std::string> cells);
};

class Report {
public:
    explicit Report(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    const std::vector<CheckRow>& rows() const { return rows_; }
    const std::deque<Table>& tables() const { return tables_; }

    // PASS when |actual - expected| <= tol * |expected| (absolute when expected is 0).
    void compare(const std::string& quantity, const std::string& inputs, double expected, double actual, double tol,
                 const std::string& provenance);
    // PASS when actual <= limit.
    void at_most(const std::string& quantity, const std::string& inputs, double actual, double limit,
                 const std::string& provenance);
    // PASS when ok; the tolerance column records the threshold the predicate used.
    void require(const std::string& quantity, const std::string& inputs, bool ok, double actual,
                 std::optional<double> tolerance, const std::string& provenance);
    void info(const std::string& quantity, const std::string& inputs, double actual, const std::string& provenance);

    Table& table(const std::string& name, std::vector<std::string> columns);
    void append(const Report& other);

    bool all_pass() const;
    std::size_t failures() const;

private:
    std::string name_;
    std::vector<CheckRow> rows_;
    std::deque<Table> tables_;
};

std::string checks_to_csv(const Report& report);
std::string table_to_csv(const Table& table);
nlohmann::json report_to_json(const Report& report);

enum class Format { Csv, Json };
Format parse_format(const std::string& text);

// Writes <name>.csv plus <name>_<table>.csv per table, or a single <name>.json.
// Returns the paths written.
std::vector<std::string> write_report(const Report& report, const std::string& out_dir, Format format);

struct Scenario {
    HessianParams params;
    std::map<std::string, RadialProfile> profiles;
    std::optional<std::string> weight;
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<double> t_grid;
    std::vector<double> radii;
    std::optional<int> resolution;
    std::optional<double> tolerance;
    std::map<std::string, double> expect;

    const RadialProfile& profile(const std::string& name) const;
    // The named weight, or the zero profile in the order-m coordinate.
    RadialProfile weight_profile() const;
};

Scenario parse_scenario(const std::string& text, const std::string& source = "scenario");
Scenario load_scenario(const std::string& path);

struct RunOptions {
    std::uint64_t seed = 1;
    std::optional<int> resolution;
    std::optional<double> tolerance;
    std::optional<int> n;
    std::optional<int> jmax;
    std::optional<int> tmax;
};

Report run_energy(const Scenario& scenario, const RunOptions& options);
Report run_metric(const Scenario& scenario, const RunOptions& options);
Report run_envelope(const Scenario& scenario, const RunOptions& options);
Report run_geodesic(const Scenario& scenario, const RunOptions& options);
Report run_capacity(const Scenario& scenario, const RunOptions& options);
// Dispatches one of energy, metric, envelope, geodesic, capacity.
Report run_command(const std::string& command, const Scenario& scenario, const RunOptions& options);

const std::vector<std::string>& example_ids();
Report reproduce(const std::string& id, const RunOptions& options);

// Property suites; each appends its worst-case checks to the report.
void metric_suite(Report& report, std::mt19937_64& rng, const HessianParams& P, int trials);
void energy_suite(Report& report, std::mt19937_64& rng, const HessianParams& P, int trials);
void envelope_suite(Report& report, std::mt19937_64& rng, const HessianParams& P, int trials);
void oracle_suite(Report& report, std::mt19937_64& rng, const HessianParams& P, int trials);
// Constructed kink sequences: shrinking, flattening at constant energy, alternating at constant energy.
void convergence_suite(Report& report, const HessianParams& P, int terms);
// Stability of the measured kink mass constant under one resolution doubling.
void oracle_constant_suite(Report& report, int n, int m, int grid_size);

Report selftest(const RunOptions& options);

// Random bounded profile: 1 to max_pieces breakpoints in [-3, -0.1] at least 0.05 apart,
// slope increments in (0.1, 1.5).
RadialProfile random_profile(std::mt19937_64& rng, core::Coordinate coord, int max_pieces = 4);

}  // namespace hessmetric::harness
