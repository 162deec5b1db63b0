#include <doctest.h>

#include <otfs/config.hpp>

using namespace otfs;

namespace {

const char* kFullConfig = R"(# full-scale run description
[frame]
m = 8
n = 16
n_cp = 16
delta_f = 15e3
f_c = 3.5e9

[channel]
l = 7
q = 3
sigma_h2 = 0.5
paths = 0

[arrangement]
delay_extent = 8
doppler_extent = 3
doppler_margin = 3
data_limit = 40

[optimizer]
eta = 0.25        ; trade-off
rho = 2.0
zeta = 1.5
p_max = 1.0
p0 = 0.6
init = cluster

[experiment]
kind = region
etas = 0, 0.5, 1
splits = 0.2, 0.8
trials = 10
seed = 42
l_hat = 7
q_hat = 5
modulation = 16qam
workers = 2
snr_db_fixed = 0
)";

}  // namespace

TEST_SUITE("config") {

TEST_CASE("full config round trip") {
    RunSpec spec = parse_config_text(kFullConfig);
    CHECK(spec.frame.M == 8);
    CHECK(spec.frame.N == 16);
    CHECK(spec.frame.n_cp == 16);
    CHECK(spec.frame.delta_f == doctest::Approx(15e3));
    CHECK(spec.channel.L == 7);
    CHECK(spec.channel.Q == 3);
    CHECK(spec.plan.delay_extent == 8);
    CHECK(spec.plan.data_limit == 40);
    CHECK(spec.opt.eta == doctest::Approx(0.25));
    CHECK(spec.opt.rho == doctest::Approx(2.0));
    CHECK(spec.opt.init == InitPattern::cluster);
    CHECK(spec.exp.kind == ExperimentKind::region);
    CHECK(spec.exp.etas == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(spec.exp.splits == std::vector<double>{0.2, 0.8});
    CHECK(spec.exp.seed == 42);
    CHECK(spec.exp.modulation == "16qam");
    CHECK(spec.exp.workers == 2);
    CHECK(spec.exp.snr_db_fixed == doctest::Approx(0.0));
    CHECK(spec.source_text == kFullConfig);
    // Untouched keys keep their defaults.
    CHECK(spec.exp.trials == 10);
    CHECK(spec.exp.noise_trials == 100);
    CHECK(spec.opt.eps2 == doctest::Approx(1e-4));
}

TEST_CASE("unknown keys and sections are rejected with line numbers") {
    CHECK_THROWS_WITH_AS(parse_config_text("[frame]\nbogus = 1\n"),
                         doctest::Contains("line 2"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("[nosuch]\n"),
                         doctest::Contains("unknown section"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("m = 4\n"),
                         doctest::Contains("outside any section"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("[frame\nm = 4\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("[frame]\nm\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("[frame]\nm = oops\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("[experiment]\nkind = nope\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("[experiment]\netas =\n"), std::invalid_argument);
}

TEST_CASE("comments and whitespace are tolerated") {
    RunSpec spec = parse_config_text("  [frame]  \n  m = 4  # inline\n\n; full-line\nn=8\nn_cp=2\n");
    CHECK(spec.frame.M == 4);
    CHECK(spec.frame.N == 8);
    CHECK(spec.frame.n_cp == 2);
}

TEST_CASE("invalid frame geometry fails at parse time") {
    CHECK_THROWS_AS(parse_config_text("[frame]\nm = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("[frame]\nm = 2\nn = 2\nn_cp = 9\n"), std::invalid_argument);
}

TEST_CASE("derived powers") {
    RunSpec spec = parse_config_text(kFullConfig);
    Arrangement arr = build_arrangement(spec.frame, spec.plan);
    // P_max spread over the occupied cells of the CP-extended frame.
    double e_s = spec.symbol_power(arr);
    CHECK(e_s == doctest::Approx(144.0 * 1.0 / 64.0));
    CHECK(spec.sigma_n2_at(10.0, arr) == doctest::Approx(e_s / 10.0));
    CHECK(spec.sigma_n2_at(0.0, arr) == doctest::Approx(e_s));
}

TEST_CASE("experiment kind names round trip") {
    for (auto kind : {ExperimentKind::capacity_vs_snr, ExperimentKind::capacity_vs_velocity,
                      ExperimentKind::optimize_sweep, ExperimentKind::region,
                      ExperimentKind::af_slices, ExperimentKind::throughput})
        CHECK(parse_experiment_kind(to_string(kind)) == kind);
}

}  // TEST_SUITE
