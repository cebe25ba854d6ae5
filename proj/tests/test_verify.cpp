#include "ermo/verify.hpp"

#include <doctest.h>

#include <chrono>

using namespace ermo;

namespace {

CheckReport only(const std::vector<CheckReport>& r)
{
    REQUIRE(r.size() == 1);
    return r.front();
}

ScenarioConfig quiet(const std::string& type, int level = 1)
{
    ScenarioConfig c;
    c.type = type;
    c.level = level;
    c.timing = false;
    return c;
}

}  // namespace

TEST_CASE("complex numbers in the config syntax")
{
    CHECK(parse_complex("0.3") == cplx(0.3, 0));
    CHECK(parse_complex("0.1,0.9") == cplx(0.1, 0.9));
    CHECK(parse_complex("0.1+0.9i") == cplx(0.1, 0.9));
    CHECK(parse_complex("1e-3-2i") == cplx(1e-3, -2));
    CHECK(parse_complex("-i") == cplx(0, -1));
    CHECK(parse_complex("(2,-1)") == cplx(2, -1));
    CHECK_THROWS_AS(parse_complex("abc"), ConfigError);
}

TEST_CASE("config file keys and errors")
{
    auto c = parse_config("# scenario\n"
                          "type = G2~1\n"
                          "level = 3   # comment\n"
                          "mode = generic\n"
                          "mu = 0.31 0.2+0.01i\n"
                          "tau = 0.05,1.1\n"
                          "seed = 9\n"
                          "tolerance.commutativity = 1e-7\n"
                          "boundary.nu = 0.1 0.2 0 0.3\n");
    CHECK(c.type == "G2~1");
    CHECK(c.level == 3);
    CHECK(c.mode == SpectralMode::Generic);
    REQUIRE(c.mu.size() == 2);
    CHECK(c.mu[1] == cplx(0.2, 0.01));
    CHECK(c.tau == cplx(0.05, 1.1));
    CHECK(c.seed == 9);
    CHECK(c.tolerance("commutativity") == 1e-7);
    CHECK(c.tolerance("yang_baxter") == 1e-9);
    REQUIRE(c.a2l.has_value());
    CHECK(c.a2l->nu[2] == cplx(0, 0));
    CHECK_THROWS_AS(parse_config("colour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("tolerance.nothing = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("level 2\n"), ConfigError);
}

TEST_CASE("scenario validation")
{
    auto c = quiet("C2~1");
    c.kappa = 0.5;
    CHECK_THROWS_AS(make_context(c), ConfigError);
    c = quiet("C2~1");
    c.tau = {0.0, 0.1};
    CHECK_THROWS_AS(make_context(c), ConfigError);
    c = quiet("C2~1");
    c.mu = {0.3};
    CHECK_THROWS_AS(make_context(c), ConfigError);
    c = quiet("Q7~1");
    CHECK_THROWS_AS(make_context(c), ConfigError);
    c = quiet("C2~1");
    c.mode = SpectralMode::Manual;
    CHECK_THROWS_AS(make_context(c), ConfigError);

    c = quiet("C2~1", 2);
    auto ctx = make_context(c);
    CHECK(std::abs(ctx->spectral.kappa - ctx->h_vee() / 2.0) < 1e-15);
    CHECK((ctx->spectral.xi + ctx->rho_mu()).norm() < 1e-15);
}

TEST_CASE("empty and unknown check lists")
{
    auto c = quiet("C2~1");
    CHECK(run_suite(c, {}).empty());
    CHECK(validate_report(report_json(c, {})).empty());
    CHECK_THROWS_AS(run_suite(c, {"yang_baxter", "nope"}), ConfigError);
}

TEST_CASE("default suite on C2~1 passes within a minute")
{
    auto c = quiet("C2~1");
    const auto t0 = std::chrono::steady_clock::now();
    const auto reports = run_suite(c, default_checks());
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 60.0);
    CHECK(reports.size() == known_checks().size());
    for (const auto& r : reports) CHECK_MESSAGE(r.status == CheckStatus::Pass, r.name, " ", r.residual);
}

TEST_CASE("JSON reports round-trip through the schema check and are reproducible")
{
    auto c = quiet("A2~1");
    const std::vector<std::string> checks = {"unitarity", "leading_term", "theta_closure"};
    const auto a = report_json(c, run_suite(c, checks));
    const auto b = report_json(c, run_suite(c, checks));
    CHECK(a.dump() == b.dump());
    const auto back = nlohmann::json::parse(a.dump());
    CHECK(back == a);
    CHECK(validate_report(back).empty());

    auto bad = back;
    bad["checks"][0]["status"] = "maybe";
    CHECK_FALSE(validate_report(bad).empty());
    bad = back;
    bad["checks"][1].erase("scale");
    CHECK_FALSE(validate_report(bad).empty());
    CHECK_FALSE(validate_report(nlohmann::json::array()).empty());
    CHECK(report_text(c, run_suite(c, checks)).find("theta_closure") != std::string::npos);
}

TEST_CASE("translation-order mutation breaks Weyl invariance at a reported point")
{
    auto c = quiet("C2~1");
    c.translation_sign = -1.0;
    const auto r = only(run_suite(c, {"weyl_invariance"}));
    CHECK(r.status == CheckStatus::Fail);
    CHECK(r.residual > 1e-3);
    REQUIRE(r.diagnostics.contains("worst_point"));
    CHECK(r.diagnostics["worst_point"].size() == 2);
}

TEST_CASE("xi away from -rho_mu breaks Weyl invariance and skips the closed forms")
{
    auto c = quiet("C2~1");
    c.mode = SpectralMode::Manual;
    c.xi = CVec::Zero(2);
    (*c.xi)[0] = cplx(-0.23, 0.0);
    (*c.xi)[1] = cplx(-0.41, 0.0);
    c.kappa = 0.5;
    const auto reports = run_suite(c, {"weyl_invariance", "closed_form_equiv", "theta_closure"});
    CHECK(reports[0].status == CheckStatus::Fail);
    CHECK(reports[1].status == CheckStatus::Skipped);
    CHECK(reports[2].status == CheckStatus::Skipped);
}

TEST_CASE("closure negative control: kappa off by ten percent")
{
    for (int k : {1, 2}) {
        auto c = quiet("A1~1", k);
        c.mu = {0.37};
        CHECK(only(run_suite(c, {"theta_closure"})).status == CheckStatus::Pass);
        c.kappa_factor = 1.1;
        const auto r = only(run_suite(c, {"theta_closure"}));
        CHECK(r.status == CheckStatus::Fail);
        CHECK(r.residual > 1e-2);
    }
}

TEST_CASE("lengths against breadth-first search on G2~1")
{
    auto c = quiet("G2~1");
    const auto r = only(run_suite(c, {"lengths_vs_bfs"}));
    CHECK(r.status == CheckStatus::Pass);
    CHECK(r.residual == 0.0);
    // Bott: sum_w q^l(w) = [2][6] / ((1 - q)(1 - q^5)); coefficients up to q^8 sum to 88
    CHECK(r.diagnostics["bfs_elements"].get<int>() == 88);
    CHECK(r.diagnostics["translation_lengths"] == nlohmann::json::array({6, 10}));
}

TEST_CASE("Yang-Baxter is skipped without braid relations")
{
    CHECK(only(run_suite(quiet("A1~1"), {"yang_baxter"})).status == CheckStatus::Skipped);
}

TEST_CASE("closed-form check compares every minuscule weight")
{
    const auto r = only(run_suite(quiet("A2~1"), {"closed_form_equiv"}));
    CHECK(r.status == CheckStatus::Pass);
    std::vector<std::string> names;
    for (const auto& p : r.diagnostics["parts"]) names.push_back(p["name"]);
    CHECK(names == std::vector<std::string>{"minuscule -lambda_1", "minuscule -lambda_2", "explicit_type_A"});
}
