#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "hessmetric/energy.hpp"
#include "hessmetric/envelope.hpp"
#include "hessmetric/error.hpp"
#include "hessmetric/geodesic.hpp"
#include "hessmetric/harness.hpp"
#include "hessmetric/hessmetric.h"
#include "hessmetric/io.hpp"

using namespace hessmetric;

struct hm_profile {
    core::RadialProfile value;
};

struct hm_measure {
    calculus::AtomicMeasure value;
};

struct hm_geodesic {
    geodesic::Geodesic value;
};

struct hm_report {
    harness::Report value;
};

namespace {

thread_local std::string last_error;

class NullPointer : public std::exception {
public:
    explicit NullPointer(const char* what) : what_(std::string(what) + " must not be NULL") {}
    const char* what() const noexcept override { return what_.c_str(); }

private:
    std::string what_;
};

template <typename T>
const T& deref(const T* p, const char* name) {
    if (!p) throw NullPointer(name);
    return *p;
}

const char* cstr(const char* p, const char* name) {
    if (!p) throw NullPointer(name);
    return p;
}

template <typename T>
T& out_ref(T* p, const char* name) {
    if (!p) throw NullPointer(name);
    return *p;
}

template <typename F>
hm_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return HM_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return static_cast<hm_status>(static_cast<int>(e.code()));
    } catch (const NullPointer& e) {
        last_error = e.what();
        return HM_ERR_NULL_POINTER;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return HM_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return HM_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown exception";
        return HM_ERR_INTERNAL;
    }
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

harness::RunOptions run_options(const hm_options* o) {
    harness::RunOptions r;
    if (!o) return r;
    r.seed = o->seed;
    if (o->resolution > 0) r.resolution = o->resolution;
    if (o->tolerance > 0.0) r.tolerance = o->tolerance;
    if (o->n > 0) r.n = o->n;
    if (o->jmax > 0) r.jmax = o->jmax;
    if (o->tmax > 0) r.tmax = o->tmax;
    return r;
}

core::RadialProfile weight_or_zero(const hm_profile* w, int n, int m) {
    if (w) return w->value;
    return core::RadialProfile(core::Coordinate{n, m});
}

}  // namespace

extern "C" {

const char* hm_version(void) { return "1.0.0"; }

const char* hm_status_name(hm_status status) {
    switch (status) {
        case HM_OK: return "ok";
        case HM_ERR_NULL_POINTER: return "null-pointer";
        default: break;
    }
    int code = static_cast<int>(status);
    if (code >= 1 && code <= 12) return error_code_name(static_cast<ErrorCode>(code));
    return "unknown";
}

const char* hm_last_error(void) { return last_error.c_str(); }

void hm_string_free(char* s) { std::free(s); }

void hm_options_init(hm_options* options) {
    if (!options) return;
    options->seed = 1;
    options->resolution = 0;
    options->tolerance = 0.0;
    options->n = 0;
    options->jmax = 0;
    options->tmax = 0;
}

hm_status hm_profile_create(int n, int q, const double* breakpoints, size_t breakpoint_count, const double* slopes,
                            size_t slope_count, hm_profile** out) {
    return guarded([&] {
        auto& result = out_ref(out, "out");
        if (breakpoint_count > 0 && !breakpoints) throw NullPointer("breakpoints");
        if (!slopes) throw NullPointer("slopes");
        std::vector<double> bps(breakpoints, breakpoints + breakpoint_count);
        std::vector<double> sl(slopes, slopes + slope_count);
        result = new hm_profile{core::make_profile(std::move(bps), std::move(sl), core::Coordinate{n, q})};
    });
}

hm_status hm_profile_from_json(const char* json, hm_profile** out) {
    return guarded([&] {
        auto& result = out_ref(out, "out");
        auto j = io::parse_json(cstr(json, "json"), "profile");
        result = new hm_profile{io::profile_from_json(j)};
    });
}

hm_status hm_profile_to_json(const hm_profile* profile, char** out) {
    return guarded([&] { out_ref(out, "out") = copy_string(io::profile_to_json(deref(profile, "profile").value).dump()); });
}

hm_status hm_profile_clone(const hm_profile* profile, hm_profile** out) {
    return guarded([&] { out_ref(out, "out") = new hm_profile{deref(profile, "profile").value}; });
}

void hm_profile_free(hm_profile* profile) { delete profile; }

hm_status hm_profile_size(const hm_profile* profile, size_t* breakpoint_count) {
    return guarded([&] { out_ref(breakpoint_count, "breakpoint_count") = deref(profile, "profile").value.size(); });
}

hm_status hm_profile_data(const hm_profile* profile, double* breakpoints, double* slopes) {
    return guarded([&] {
        const auto& g = deref(profile, "profile").value;
        if (breakpoints) std::copy(g.breakpoints().begin(), g.breakpoints().end(), breakpoints);
        if (slopes) std::copy(g.slopes().begin(), g.slopes().end(), slopes);
    });
}

hm_status hm_profile_evaluate(const hm_profile* profile, double tau, double* out) {
    return guarded([&] { out_ref(out, "out") = core::evaluate(deref(profile, "profile").value, tau); });
}

hm_status hm_profile_combine(double alpha, const hm_profile* g1, double beta, const hm_profile* g2,
                             hm_profile** out) {
    return guarded([&] {
        out_ref(out, "out") = new hm_profile{core::combine(alpha, deref(g1, "g1").value, beta, deref(g2, "g2").value)};
    });
}

hm_status hm_profile_reparameterize(const hm_profile* profile, int q_to, int resolution, hm_profile** out) {
    return guarded([&] {
        core::ReparameterizeOptions opts;
        if (resolution > 0) opts.resolution = resolution;
        out_ref(out, "out") = new hm_profile{core::reparameterize(deref(profile, "profile").value, q_to, opts)};
    });
}

hm_status hm_hessian_constant(int n, int m, double* out) {
    return guarded([&] { out_ref(out, "out") = calculus::hessian_constant(n, m); });
}

hm_status hm_hessian_measure(const hm_profile* profile, int n, int m, hm_measure** out) {
    return guarded([&] {
        auto P = calculus::make_params(n, m);
        out_ref(out, "out") = new hm_measure{calculus::hessian_measure(deref(profile, "profile").value, P)};
    });
}

hm_status hm_measure_create(const double* taus, const double* masses, size_t count, hm_measure** out) {
    return guarded([&] {
        auto& result = out_ref(out, "out");
        if (count > 0 && (!taus || !masses)) throw NullPointer("taus and masses");
        calculus::AtomicMeasure mu;
        for (size_t i = 0; i < count; ++i) mu.atoms.push_back({taus[i], masses[i]});
        result = new hm_measure{std::move(mu)};
    });
}

void hm_measure_free(hm_measure* measure) { delete measure; }

hm_status hm_measure_size(const hm_measure* measure, size_t* count) {
    return guarded([&] { out_ref(count, "count") = deref(measure, "measure").value.atoms.size(); });
}

hm_status hm_measure_atom(const hm_measure* measure, size_t index, double* tau, double* mass) {
    return guarded([&] {
        const auto& atoms = deref(measure, "measure").value.atoms;
        if (index >= atoms.size()) fail(ErrorCode::InvalidArgument, "atom index out of range");
        if (tau) *tau = atoms[index].tau;
        if (mass) *mass = atoms[index].mass;
    });
}

hm_status hm_measure_total(const hm_measure* measure, double* out) {
    return guarded([&] { out_ref(out, "out") = deref(measure, "measure").value.total(); });
}

hm_status hm_e1_energy(const hm_profile* profile, int n, int m, double* out) {
    return guarded([&] {
        out_ref(out, "out") = calculus::e1_energy(deref(profile, "profile").value, calculus::make_params(n, m));
    });
}

hm_status hm_energy(const hm_profile* u, const hm_profile* weight, int n, int m, double* out) {
    return guarded([&] {
        auto P = calculus::make_params(n, m);
        out_ref(out, "out") = energy::energy_Ew(deref(u, "u").value, weight_or_zero(weight, n, m), P).value;
    });
}

hm_status hm_aubin_I(const hm_profile* psi1, const hm_profile* psi2, int n, int m, double* out) {
    return guarded([&] {
        out_ref(out, "out") =
            energy::aubin_I(deref(psi1, "psi1").value, deref(psi2, "psi2").value, calculus::make_params(n, m));
    });
}

hm_status hm_metric(const hm_profile* u, const hm_profile* v, const hm_profile* weight, int n, int m, double* out) {
    return guarded([&] {
        auto P = calculus::make_params(n, m);
        const auto& a = deref(u, "u").value;
        const auto& b = deref(v, "v").value;
        out_ref(out, "out") = weight ? energy::metric_d(a, b, weight->value, P) : energy::metric_d(a, b, P);
    });
}

hm_status hm_norm_energy_difference(const hm_profile* u, const hm_profile* v, int n, int m, double* out) {
    return guarded([&] {
        out_ref(out, "out") =
            energy::norm_energy_difference(deref(u, "u").value, deref(v, "v").value, calculus::make_params(n, m));
    });
}

hm_status hm_rooftop(const hm_profile* u, const hm_profile* v, hm_profile** out) {
    return guarded([&] {
        out_ref(out, "out") = new hm_profile{energy::rooftop_P(deref(u, "u").value, deref(v, "v").value)};
    });
}

hm_status hm_capacity_ball(double r, int n, int m, double* out) {
    return guarded([&] { out_ref(out, "out") = energy::capacity_ball(r, calculus::make_params(n, m)); });
}

hm_status hm_dirichlet_solve(const hm_measure* mu, int n, int m, hm_profile** out) {
    return guarded([&] {
        out_ref(out, "out") =
            new hm_profile{envelope::dirichlet_solve(deref(mu, "mu").value, calculus::make_params(n, m))};
    });
}

hm_status hm_envelope_hte(const hm_profile* u, const hm_profile* v, int n, int m, hm_profile** out,
                          double* j_final) {
    return guarded([&] {
        auto& result = out_ref(out, "out");
        auto env = envelope::envelope_via_hte(deref(u, "u").value, deref(v, "v").value, calculus::make_params(n, m));
        if (j_final) *j_final = env.j_final;
        result = new hm_profile{std::move(env.envelope)};
    });
}

hm_status hm_geodesic_create(const hm_profile* u0, const hm_profile* u1, int n, int m, int resolution,
                             hm_geodesic** out) {
    return guarded([&] {
        auto& result = out_ref(out, "out");
        int res = resolution > 0 ? resolution : geodesic::kDefaultResolution;
        result = new hm_geodesic{
            geodesic::weak_geodesic(deref(u0, "u0").value, deref(u1, "u1").value, calculus::make_params(n, m), res)};
    });
}

hm_status hm_geodesic_eval(const hm_geodesic* g, double t, hm_profile** out) {
    return guarded([&] { out_ref(out, "out") = new hm_profile{geodesic::geodesic_eval(deref(g, "geodesic").value, t)}; });
}

void hm_geodesic_free(hm_geodesic* geodesic) { delete geodesic; }

hm_status hm_run_command(const char* command, const char* scenario_path, const hm_options* options,
                         hm_report** out) {
    return guarded([&] {
        auto& result = out_ref(out, "out");
        std::string cmd = cstr(command, "command");
        auto scenario = harness::load_scenario(cstr(scenario_path, "scenario_path"));
        result = new hm_report{harness::run_command(cmd, scenario, run_options(options))};
    });
}

hm_status hm_run_scenario_text(const char* command, const char* scenario_json, const hm_options* options,
                               hm_report** out) {
    return guarded([&] {
        auto& result = out_ref(out, "out");
        std::string cmd = cstr(command, "command");
        auto scenario = harness::parse_scenario(cstr(scenario_json, "scenario_json"));
        result = new hm_report{harness::run_command(cmd, scenario, run_options(options))};
    });
}

hm_status hm_reproduce(const char* example_id, const hm_options* options, hm_report** out) {
    return guarded([&] {
        auto& result = out_ref(out, "out");
        std::string id = cstr(example_id, "example_id");
        result = new hm_report{harness::reproduce(id, run_options(options))};
    });
}

hm_status hm_selftest(const hm_options* options, hm_report** out) {
    return guarded([&] { out_ref(out, "out") = new hm_report{harness::selftest(run_options(options))}; });
}

size_t hm_example_count(void) { return harness::example_ids().size(); }

const char* hm_example_id(size_t index) {
    const auto& ids = harness::example_ids();
    return index < ids.size() ? ids[index].c_str() : nullptr;
}

int hm_report_all_pass(const hm_report* report) { return report && report->value.all_pass() ? 1 : 0; }

size_t hm_report_row_count(const hm_report* report) { return report ? report->value.rows().size() : 0; }

size_t hm_report_failure_count(const hm_report* report) { return report ? report->value.failures() : 0; }

hm_status hm_report_row(const hm_report* report, size_t index, const char** quantity, const char** inputs,
                        const char** status, double* actual) {
    return guarded([&] {
        const auto& rows = deref(report, "report").value.rows();
        if (index >= rows.size()) fail(ErrorCode::InvalidArgument, "report row index out of range");
        const auto& r = rows[index];
        if (quantity) *quantity = r.quantity.c_str();
        if (inputs) *inputs = r.inputs.c_str();
        if (status) *status = harness::status_name(r.status);
        if (actual) *actual = r.actual;
    });
}

hm_status hm_report_to_string(const hm_report* report, const char* format, char** out) {
    return guarded([&] {
        auto& result = out_ref(out, "out");
        const auto& rep = deref(report, "report").value;
        auto fmt = harness::parse_format(cstr(format, "format"));
        result = copy_string(fmt == harness::Format::Json ? harness::report_to_json(rep).dump(2) + "\n"
                                                          : harness::checks_to_csv(rep));
    });
}

hm_status hm_report_write(const hm_report* report, const char* out_dir, const char* format) {
    return guarded([&] {
        const auto& rep = deref(report, "report").value;
        auto fmt = harness::parse_format(cstr(format, "format"));
        harness::write_report(rep, cstr(out_dir, "out_dir"), fmt);
    });
}

void hm_report_free(hm_report* report) { delete report; }

}  // extern "C"
