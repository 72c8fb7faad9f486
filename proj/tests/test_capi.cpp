#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hessmetric/hessmetric.h"

namespace {

hm_profile* make(int n, int q, std::initializer_list<double> bps, std::initializer_list<double> slopes) {
    hm_profile* p = nullptr;
    REQUIRE(hm_profile_create(n, q, bps.begin(), bps.size(), slopes.begin(), slopes.size(), &p) == HM_OK);
    return p;
}

}  // namespace

TEST_CASE("status names and version") {
    CHECK(std::string(hm_status_name(HM_OK)) == "ok");
    CHECK(std::string(hm_status_name(HM_ERR_CONVEXITY)).size() > 0);
    CHECK(std::strlen(hm_version()) > 0);
}

TEST_CASE("profile lifecycle and validation") {
    hm_profile* a = make(2, 2, {-2.0, -1.0}, {0.0, 0.5, 1.5});
    size_t k = 0;
    CHECK(hm_profile_size(a, &k) == HM_OK);
    CHECK(k == 2);
    double bps[2], slopes[3];
    CHECK(hm_profile_data(a, bps, slopes) == HM_OK);
    CHECK(bps[1] == -1.0);
    CHECK(slopes[2] == 1.5);
    double value = 0.0;
    CHECK(hm_profile_evaluate(a, -0.5, &value) == HM_OK);
    CHECK(value == -0.75);

    char* json = nullptr;
    REQUIRE(hm_profile_to_json(a, &json) == HM_OK);
    hm_profile* back = nullptr;
    CHECK(hm_profile_from_json(json, &back) == HM_OK);
    hm_string_free(json);
    hm_profile* sum = nullptr;
    CHECK(hm_profile_combine(1.0, a, 1.0, back, &sum) == HM_OK);
    CHECK(hm_profile_evaluate(sum, -0.5, &value) == HM_OK);
    CHECK(value == -1.5);

    const double bad_slopes[] = {1.0, 0.5};
    const double bad_bps[] = {-1.0};
    hm_profile* bad = nullptr;
    CHECK(hm_profile_create(2, 2, bad_bps, 1, bad_slopes, 2, &bad) == HM_ERR_CONVEXITY);
    CHECK(bad == nullptr);
    CHECK(std::string(hm_last_error()).find("slopes") != std::string::npos);
    CHECK(hm_profile_from_json("{not json", &bad) == HM_ERR_PARSE);
    CHECK(hm_profile_evaluate(nullptr, 0.0, &value) == HM_ERR_NULL_POINTER);
    CHECK(hm_profile_evaluate(a, 0.0, nullptr) == HM_ERR_NULL_POINTER);
    CHECK(hm_profile_size(a, &k) == HM_OK);
    CHECK(std::string(hm_last_error()).empty());

    hm_profile_free(sum);
    hm_profile_free(back);
    hm_profile_free(a);
    hm_profile_free(nullptr);
}

TEST_CASE("energies and metric through the C interface") {
    hm_profile* a = make(2, 2, {-2.0, -1.0}, {0.0, 0.5, 1.5});
    hm_profile* b = make(2, 2, {-1.0, -0.25}, {0.0, 1.0, 4.0});
    double e1 = 0.0, d = 0.0, dw = 0.0, cap = 0.0;
    CHECK(hm_e1_energy(a, 2, 2, &e1) == HM_OK);
    CHECK(e1 == doctest::Approx(138.17446161525102).epsilon(1e-13));
    CHECK(hm_metric(a, b, nullptr, 2, 2, &d) == HM_OK);
    CHECK(d == doctest::Approx(174.77424460262406).epsilon(1e-13));
    CHECK(hm_metric(a, b, a, 2, 2, &dw) == HM_OK);
    CHECK(dw == doctest::Approx(d).epsilon(1e-12));
    CHECK(hm_capacity_ball(0.5, 2, 2, &cap) == HM_OK);
    CHECK(cap == doctest::Approx(82.169153820895282).epsilon(1e-13));
    CHECK(hm_e1_energy(a, 2, 1, &e1) == HM_ERR_COORDINATE);

    hm_profile* roof = nullptr;
    REQUIRE(hm_rooftop(a, b, &roof) == HM_OK);
    size_t k = 0;
    hm_profile_size(roof, &k);
    CHECK(k == 3);

    hm_measure* mu = nullptr;
    REQUIRE(hm_hessian_measure(a, 2, 2, &mu) == HM_OK);
    size_t atoms = 0;
    hm_measure_size(mu, &atoms);
    CHECK(atoms == 2);
    hm_profile* solved = nullptr;
    REQUIRE(hm_dirichlet_solve(mu, 2, 2, &solved) == HM_OK);
    double v1 = 0.0, v2 = 0.0;
    hm_profile_evaluate(solved, -1.5, &v1);
    hm_profile_evaluate(a, -1.5, &v2);
    CHECK(v1 == doctest::Approx(v2).epsilon(1e-14));

    hm_profile* env = nullptr;
    double j_final = 0.0;
    REQUIRE(hm_envelope_hte(a, b, 2, 2, &env, &j_final) == HM_OK);
    hm_profile_evaluate(env, -1.0, &v1);
    hm_profile_evaluate(roof, -1.0, &v2);
    CHECK(std::abs(v1 - v2) < 1e-6);

    hm_profile_free(env);
    hm_profile_free(solved);
    hm_measure_free(mu);
    hm_profile_free(roof);
    hm_profile_free(b);
    hm_profile_free(a);
}

TEST_CASE("geodesic handle") {
    hm_profile* u0 = make(2, 2, {-2.0}, {0.0, 1.0});
    hm_profile* u1 = make(2, 2, {-0.5}, {0.0, 3.0});
    hm_geodesic* g = nullptr;
    REQUIRE(hm_geodesic_create(u0, u1, 2, 2, 0, &g) == HM_OK);
    hm_profile* mid = nullptr;
    REQUIRE(hm_geodesic_eval(g, 0.5, &mid) == HM_OK);
    double v = 0.0;
    hm_profile_evaluate(mid, -2.0, &v);
    CHECK(v == doctest::Approx(-1.75));
    CHECK(hm_geodesic_eval(g, 2.0, &mid) == HM_ERR_DOMAIN);
    hm_profile_free(mid);
    hm_geodesic_free(g);
    hm_profile_free(u1);
    hm_profile_free(u0);
}

TEST_CASE("reports from reproduction and scenarios") {
    CHECK(hm_example_count() == 5);
    CHECK(std::string(hm_example_id(0)) == "intro-norm");
    CHECK(hm_example_id(99) == nullptr);
    hm_options opts;
    hm_options_init(&opts);
    hm_report* r = nullptr;
    REQUIRE(hm_reproduce("intro-norm", &opts, &r) == HM_OK);
    CHECK(hm_report_all_pass(r) == 1);
    CHECK(hm_report_failure_count(r) == 0);
    const char* quantity = nullptr;
    const char* status = nullptr;
    double actual = 0.0;
    CHECK(hm_report_row(r, 0, &quantity, nullptr, &status, &actual) == HM_OK);
    CHECK(std::string(status) == "PASS");
    CHECK(hm_report_row(r, 100000, &quantity, nullptr, &status, &actual) == HM_ERR_INVALID_ARGUMENT);
    char* text = nullptr;
    REQUIRE(hm_report_to_string(r, "json", &text) == HM_OK);
    CHECK(std::string(text).find("\"all_pass\": true") != std::string::npos);
    hm_string_free(text);
    CHECK(hm_report_to_string(r, "yaml", &text) == HM_ERR_USAGE);
    hm_report_free(r);

    CHECK(hm_reproduce("nope", &opts, &r) == HM_ERR_USAGE);
    const char* scenario = R"({"params": {"n": 2, "m": 2},
        "profiles": {"a": {"breakpoints": [-1], "slopes": [0, 1]}, "b": {"breakpoints": [-2], "slopes": [0, 2]}},
        "pairs": [["a", "b"]]})";
    REQUIRE(hm_run_scenario_text("metric", scenario, &opts, &r) == HM_OK);
    CHECK(hm_report_all_pass(r) == 1);
    hm_report_free(r);
    CHECK(hm_run_scenario_text("metric", "{", &opts, &r) == HM_ERR_PARSE);
    CHECK(hm_run_command("metric", "/nonexistent/scenario.json", &opts, &r) != HM_OK);
}
