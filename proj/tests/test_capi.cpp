#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>
#include <noma/noma.h>

TEST_CASE("version and status strings") {
    CHECK(std::string(noma_version()) == "0.1.0");
    CHECK(std::string(noma_status_str(NOMA_OK)) == "ok");
    CHECK(std::string(noma_status_str(NOMA_ERR_DOMAIN)) == "domain error");
}

TEST_CASE("scalar functions and error codes") {
    double v = 0.0;
    CHECK(noma_q_function(0.0, &v) == NOMA_OK);
    CHECK(v == doctest::Approx(0.5));
    CHECK(noma_q_function(0.0, nullptr) == NOMA_ERR_BAD_ARG);
    CHECK(noma_q_inverse(0.0, &v) == NOMA_ERR_DOMAIN);
    CHECK(std::strlen(noma_last_error()) > 0);
    CHECK(noma_reg_lower_gamma(2.0, 0.5, &v) == NOMA_OK);
    CHECK(v == doctest::Approx(0.09020401043104986).epsilon(1e-10));
    CHECK(noma_binary_entropy(0.25, &v) == NOMA_OK);
    CHECK(v == doctest::Approx(0.8112781244591328).epsilon(1e-12));
    CHECK(noma_binary_entropy(-1.0, &v) == NOMA_ERR_DOMAIN);
}

TEST_CASE("bound surface") {
    double v = 0.0;
    CHECK(noma_correction_c(16, &v) == NOMA_OK);
    CHECK(v == doctest::Approx(0.8655392686046933).epsilon(1e-12));
    CHECK(noma_correction_c(0, &v) == NOMA_ERR_DOMAIN);

    const double snr = std::pow(10.0, 0.6);
    CHECK(noma_residual_term(16, 2, 10.0, snr, &v) == NOMA_OK);
    CHECK(v == doctest::Approx(0.6709555749997274).epsilon(1e-12));
    CHECK(noma_residual_term(4, 1, 100.0, 10.0, &v) == NOMA_ERR_CONDITION);

    noma_bound_result b{};
    CHECK(noma_outage_bound(16, 2, 2.0, snr, &b) == NOMA_OK);
    CHECK(b.valid == 1);
    double psi = 0.0, resid = 0.0;
    CHECK(noma_psi(16, 2, 2.0, snr, &psi) == NOMA_OK);
    CHECK(noma_residual_term(16, 2, 2.0, snr, &resid) == NOMA_OK);
    CHECK(b.total == doctest::Approx(psi + resid).epsilon(1e-14));
    CHECK(noma_outage_bound(4, 1, 100.0, 10.0, &b) == NOMA_OK);
    CHECK(b.valid == 0);

    int m = -1;
    CHECK(noma_max_interferers(16, 2.0, &m) == NOMA_OK);
    CHECK(m == 2);
    CHECK(noma_copies_needed(2, 2.0, &m) == NOMA_OK);
    CHECK(m == 16);
    CHECK(noma_sufficient_condition(16, 1, 2.0, &m) == NOMA_OK);
    CHECK(m == 1);
}

TEST_CASE("layout handles and json") {
    noma_layout* layout = nullptr;
    REQUIRE(noma_layout_build(4, 3, &layout) == NOMA_OK);
    int n = 0;
    CHECK(noma_layout_blocks(layout, &n) == NOMA_OK);
    CHECK(n == 4);
    CHECK(noma_layout_num_layers(layout, &n) == NOMA_OK);
    CHECK(n == 3);
    CHECK(noma_layout_total_users(layout, &n) == NOMA_OK);
    CHECK(n == 7);
    int copies[3], users[3], interferers[3];
    CHECK(noma_layout_layers(layout, copies, users, interferers) == NOMA_OK);
    CHECK(copies[0] == 4);
    CHECK(users[2] == 4);
    CHECK(interferers[0] == 2);

    char* json = nullptr;
    REQUIRE(noma_layout_to_json(layout, &json) == NOMA_OK);
    noma_layout* back = nullptr;
    CHECK(noma_layout_from_json(json, &back) == NOMA_OK);
    CHECK(noma_layout_blocks(back, &n) == NOMA_OK);
    CHECK(n == 4);
    noma_string_free(json);
    noma_layout_free(back);
    noma_layout_free(layout);

    CHECK(noma_layout_build(6, 3, &layout) == NOMA_ERR_INVALID_LAYOUT);
    CHECK(noma_layout_from_json("{bad", &layout) == NOMA_ERR_PARSE);
    const int bad_copies[2] = {4, 3};
    const int bad_users[2] = {1, 1};
    CHECK(noma_layout_build_custom(bad_copies, bad_users, 2, &layout) ==
          NOMA_ERR_INVALID_LAYOUT);
}

TEST_CASE("samples, estimates, and streaming parity") {
    noma_samples* samples = nullptr;
    REQUIRE(noma_sample_sinr(NOMA_SINR_EXACT, 8, 2, 4.0, 50000, 123, &samples) == NOMA_OK);
    uint64_t count = 0;
    CHECK(noma_samples_size(samples, &count) == NOMA_OK);
    CHECK(count == 50000);
    const double* values = nullptr;
    CHECK(noma_samples_values(samples, &values) == NOMA_OK);
    CHECK(values[0] > 0.0);

    noma_estimate from_samples{}, streamed{};
    CHECK(noma_estimate_outage(samples, 2.0, &from_samples) == NOMA_OK);
    CHECK(noma_outage_mc(NOMA_SINR_EXACT, 8, 2, 2.0, 4.0, 50000, 123, &streamed) == NOMA_OK);
    CHECK(from_samples.value == streamed.value);
    CHECK(from_samples.ci_lo <= from_samples.value);
    CHECK(from_samples.ci_hi >= from_samples.value);

    noma_estimate err{};
    CHECK(noma_avg_error_mc(samples, 1.0, 512.0, NOMA_DISPERSION_EXACT, &err) == NOMA_OK);
    CHECK(err.value >= 0.0);
    CHECK(err.value <= 1.0);
    noma_samples_free(samples);

    CHECK(noma_sample_sinr(NOMA_SINR_OMEGA, 8, 0, 4.0, 1000, 1, &samples) == NOMA_ERR_DOMAIN);
}

TEST_CASE("moment diagnostics struct") {
    noma_moment_diag diag{};
    REQUIRE(noma_moment_diagnostics(8, 2, 100000, 5, &diag) == NOMA_OK);
    CHECK(diag.predicted_mean == doctest::Approx(4.0));
    CHECK(diag.predicted_second == doctest::Approx(4.0 * 2.0 * (2.0 + 2.0 / 9.0)));
    CHECK(diag.trials == 100000);
    CHECK(diag.ks_w_omega < 0.05);
}

TEST_CASE("sic and linklevel through the C surface") {
    noma_layout* layout = nullptr;
    REQUIRE(noma_layout_build(4, 2, &layout) == NOMA_OK);
    const double thresholds[2] = {1.0, 1.0};
    noma_estimate eps[2], rho[2];
    REQUIRE(noma_simulate_sic(layout, thresholds, 4.0, 20000, 3, NOMA_SIC_THRESHOLD, 0, eps,
                              rho) == NOMA_OK);
    CHECK(rho[1].value <= eps[0].value + eps[1].value + 0.02);
    CHECK(eps[0].trials == 20000);
    CHECK(eps[1].trials == 40000);  // two users in the second layer

    noma_estimate ll{};
    REQUIRE(noma_simulate_linklevel(layout, 0, 1.0, 128, 4.0, 2000, 4, &ll) == NOMA_OK);
    CHECK(ll.value >= 0.0);
    CHECK(ll.value <= 1.0);
    CHECK(noma_simulate_linklevel(layout, 99, 1.0, 128, 4.0, 10, 4, &ll) == NOMA_ERR_DOMAIN);
    noma_layout_free(layout);
}

TEST_CASE("planner through the C surface") {
    double v = 0.0;
    CHECK(noma_rate_for_threshold(3.0, &v) == NOMA_OK);
    CHECK(v == doctest::Approx(2.0));
    CHECK(noma_threshold_for_rate(2.0, &v) == NOMA_OK);
    CHECK(v == doctest::Approx(3.0));
    CHECK(noma_solve_threshold(1, 0, 1e-6, 1e-3, &v) == NOMA_ERR_INFEASIBLE);

    const double eps[3] = {1e-3, 1e-3, 1e-3};
    double rho[3];
    CHECK(noma_propagated_error(eps, 3, rho) == NOMA_OK);
    CHECK(rho[2] <= 3e-3);

    char* json = nullptr;
    int feasible = 0;
    REQUIRE(noma_plan_dyadic(8, 3, std::pow(10.0, 0.6), 1e-3, NOMA_TARGET_PER_LAYER, &json,
                             &feasible) == NOMA_OK);
    CHECK(feasible == 1);
    const nlohmann::json plan = nlohmann::json::parse(json);
    CHECK(plan["layers"].size() == 3);
    CHECK(plan["layers"][0]["D"] == 8);
    noma_string_free(json);

    REQUIRE(noma_plan_exponential(3, 2.0, 4.0, &json, &feasible) == NOMA_OK);
    const nlohmann::json plan31 = nlohmann::json::parse(json);
    CHECK(plan31["L"] == 48);
    noma_string_free(json);
}
