#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "hessmetric/hessmetric.h"

namespace {

constexpr int kExitFailedChecks = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

int report_error(hm_status status) {
    std::fprintf(stderr, "hessmetric: %s: %s\n", hm_status_name(status), hm_last_error());
    return status == HM_ERR_USAGE ? kExitUsage : kExitError;
}

int finish(hm_report* report, const std::string& out_dir, const std::string& format) {
    hm_status st = hm_report_write(report, out_dir.c_str(), format.c_str());
    if (st != HM_OK) {
        hm_report_free(report);
        return report_error(st);
    }
    size_t rows = hm_report_row_count(report);
    for (size_t i = 0; i < rows; ++i) {
        const char* quantity = nullptr;
        const char* inputs = nullptr;
        const char* status = nullptr;
        double actual = 0.0;
        hm_report_row(report, i, &quantity, &inputs, &status, &actual);
        if (std::string(status) == "FAIL") std::printf("FAIL %s [%s] actual=%.17g\n", quantity, inputs, actual);
    }
    size_t failures = hm_report_failure_count(report);
    std::printf("%zu checks, %zu failed; report written to %s\n", rows, failures, out_dir.c_str());
    int code = hm_report_all_pass(report) ? 0 : kExitFailedChecks;
    hm_report_free(report);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial m-subharmonic energy, metric and geodesic lab"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string scenario;
    std::string out_dir = ".";
    std::string format = "csv";
    hm_options options;
    hm_options_init(&options);

    app.add_option("--scenario", scenario, "Scenario JSON file");
    app.add_option("--out", out_dir, "Directory for report files")->capture_default_str();
    app.add_option("--seed", options.seed, "Random seed")->capture_default_str();
    app.add_option("--resolution", options.resolution, "Sampling resolution for reparameterized geodesics")
        ->check(CLI::PositiveNumber);
    app.add_option("--tolerance", options.tolerance, "Override the relative tolerance of identity checks")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--n", options.n, "Dimension for example reproduction")->check(CLI::Range(2, 64));
    app.add_option("--jmax", options.jmax, "Last sequence index for sequence examples")->check(CLI::PositiveNumber);
    app.add_option("--tmax", options.tmax, "Largest t for the scaling example")->check(CLI::PositiveNumber);

    const char* scenario_commands[] = {"energy", "metric", "envelope", "geodesic", "capacity"};
    for (const char* name : scenario_commands) app.add_subcommand(name, std::string("Run the ") + name + " checks on a scenario");

    std::string example;
    std::string ids;
    for (size_t i = 0; i < hm_example_count(); ++i) ids += std::string(i ? ", " : "") + hm_example_id(i);
    auto* reproduce = app.add_subcommand("reproduce", "Reproduce a worked example (" + ids + ")");
    reproduce->add_option("example-id", example, "Example id")->required();
    app.add_subcommand("selftest", "Run the property suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    std::string command = sub->get_name();
    hm_report* report = nullptr;
    hm_status st = HM_OK;
    if (command == "reproduce") {
        st = hm_reproduce(example.c_str(), &options, &report);
    } else if (command == "selftest") {
        st = hm_selftest(&options, &report);
    } else {
        if (scenario.empty()) {
            std::fprintf(stderr, "hessmetric: usage error: %s needs --scenario <path>\n", command.c_str());
            return kExitUsage;
        }
        st = hm_run_command(command.c_str(), scenario.c_str(), &options, &report);
    }
    if (st != HM_OK) return report_error(st);
    return finish(report, out_dir, format);
}
