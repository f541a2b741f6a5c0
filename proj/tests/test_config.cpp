#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wkam/config.hpp"
#include "wkam/errors.hpp"
#include "wkam/pipeline.hpp"

using namespace wkam;

namespace {

const char* kSmallPendulum = R"(
[experiment]
name = small_pendulum

[model]
family = separated_linear
potential = cosine_well
r0 = 10

[scheme]
n = 32
window = 5

[lambdas]
values = 0.4 0.2 0.1

[tolerances]
solver = 1e-9

[output]
dir = out/small
)";

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

} // namespace

TEST_CASE("config parsing") {
    SUBCASE("well-formed config round-trips fields") {
        const ExperimentConfig config = parse_config_text(kSmallPendulum);
        CHECK(config.name == "small_pendulum");
        CHECK(config.model.family == Family::SeparatedLinear);
        CHECK(config.scheme.n == 32);
        CHECK(config.scheme.tau == doctest::Approx(1.0 / 32));
        CHECK(config.scheme.window == 5);
        CHECK(config.lambdas == std::vector<double>{0.4, 0.2, 0.1});
        CHECK(config.output_dir == "out/small");
        CHECK_FALSE(config.oracles);
    }
    SUBCASE("unknown key is an error") {
        std::string text = kSmallPendulum;
        text += "\n[scheme]\nstep = 3\n";
        CHECK_THROWS_AS((void)parse_config_text(text), ConfigError);
    }
    SUBCASE("unknown section is an error") {
        std::string text = kSmallPendulum;
        text += "\n[plotting]\nstyle = fancy\n";
        CHECK_THROWS_AS((void)parse_config_text(text), ConfigError);
    }
    SUBCASE("lambdas must decrease strictly") {
        std::string text = kSmallPendulum;
        text += "\n[lambdas]\nvalues = 0.1 0.2\n";
        CHECK_THROWS_AS((void)parse_config_text(text), ConfigError);
    }
    SUBCASE("state-weighted family requires a weight") {
        std::string text = kSmallPendulum;
        text += "\n[model]\nfamily = state_weighted\n";
        CHECK_THROWS_AS((void)parse_config_text(text), ConfigError);
    }
    SUBCASE("grid floor") {
        std::string text = kSmallPendulum;
        text += "\n[scheme]\nn = 4\n";
        CHECK_THROWS_AS((void)parse_config_text(text), ConfigError);
    }
    SUBCASE("malformed number") {
        std::string text = kSmallPendulum;
        text += "\n[model]\nr0 = ten\n";
        CHECK_THROWS_AS((void)parse_config_text(text), ConfigError);
    }
}

TEST_CASE("pipeline smoke run on a small pendulum") {
    ExperimentConfig config = parse_config_text(kSmallPendulum);
    const std::string out = "test_out/smoke";
    std::filesystem::remove_all(out);
    const PipelineResult result = run_pipeline(config, out);
    CHECK(result.ok());

    for (const char* artifact :
         {"critical_value.csv", "peierls_barrier.csv", "aubry_set.csv", "measure_0.csv",
          "u_lambda_0.4.csv", "u0_barrier.csv", "u0_subsolution_sup.csv", "u0_aubry_min.csv",
          "convergence.csv", "occupation_diagnostics.csv", "summary.txt"})
        CHECK(std::filesystem::exists(std::filesystem::path(out) / artifact));
}

TEST_CASE("pipeline rejects a sign-changing weight at the assumption stage") {
    std::string text = kSmallPendulum;
    text += "\n[model]\nfamily = state_weighted\nweight_sin = 1\n"; // a(x) = sin(2 pi x)
    ExperimentConfig config = parse_config_text(text);
    const std::string out = "test_out/badweight";
    std::filesystem::remove_all(out);
    const PipelineResult result = run_pipeline(config, out);
    CHECK_FALSE(result.ok());

    bool monotonicity_failed = false;
    for (const auto& record : result.records)
        if (record.stage == "assumptions" && !record.pass &&
            record.check.find("monotonicity") != std::string::npos)
            monotonicity_failed = true;
    CHECK(monotonicity_failed);
}

TEST_CASE("identical configs produce byte-identical artifacts") {
    ExperimentConfig config = parse_config_text(kSmallPendulum);
    const std::string out_a = "test_out/det_a";
    const std::string out_b = "test_out/det_b";
    std::filesystem::remove_all(out_a);
    std::filesystem::remove_all(out_b);
    CHECK(run_pipeline(config, out_a).ok());
    CHECK(run_pipeline(config, out_b).ok());

    for (const auto& entry : std::filesystem::directory_iterator(out_a)) {
        const auto name = entry.path().filename();
        CAPTURE(name.string());
        CHECK(slurp(entry.path()) == slurp(std::filesystem::path(out_b) / name));
    }
}

TEST_CASE("refinement study") {
    SUBCASE("pendulum errors decrease against the closed form") {
        ExperimentConfig config = parse_config_text(kSmallPendulum);
        const RefinementReport report = run_refinement(config, 3, "test_out/refine");
        CHECK(report.closed_form_reference);
        REQUIRE(report.levels.size() == 3);
        CHECK(report.violations.empty());
        CHECK(report.levels.back().err_h < report.levels.front().err_h);
    }
    SUBCASE("flat potential has identically zero limit error") {
        std::string text = kSmallPendulum;
        text += "\n[model]\npotential = zero\n";
        ExperimentConfig config = parse_config_text(text);
        const RefinementReport report = run_refinement(config, 2, "test_out/refine_flat");
        for (const auto& level : report.levels) {
            CHECK(level.err_c == 0.0);
            CHECK(level.err_u0 == 0.0);
        }
        CHECK(report.violations.empty());
    }
}
