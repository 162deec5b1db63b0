#include <doctest.h>

#include "helpers.hpp"

#include <otfs/modem.hpp>
#include <otfs/rng.hpp>
#include <otfs/sensing.hpp>

#include <cmath>

using namespace otfs;

namespace {

FrameConfig frame44() {
    FrameConfig cfg;
    cfg.M = 4;
    cfg.N = 4;
    cfg.n_cp = 2;
    return cfg;
}

// Small grid with K_p = 2 and K_d = 4 for the Monte Carlo ISL checks.
Arrangement small_arrangement() {
    GuardPlan plan;
    plan.delay_extent = 2;
    plan.doppler_extent = 1;
    plan.delay_margin = 1;
    plan.doppler_margin = 1;
    plan.data_limit = 4;
    return build_arrangement(frame44(), plan);
}

double direct_isl(const CVec& x_full, const SensingConstants& consts, const FrameConfig& cfg) {
    double sum = 0.0;
    for (const auto& bin : consts.bins)
        sum += std::norm(cross_correlation(x_full, bin.first, bin.second, cfg));
    return sum;
}

}  // namespace

TEST_SUITE("sensing") {

TEST_CASE("build_A_lk matches the explicit dense definition") {
    FrameConfig tiny;
    tiny.M = 2;
    tiny.N = 2;
    tiny.n_cp = 1;
    for (int l : {-2, -1, 0, 1, 2})
        for (int k : {-1, 0, 2}) {
            CMat fast = build_A_lk(l, k, tiny);
            CMat oracle = testutil::dense_A_lk(l, k, tiny);
            CHECK((fast - oracle).cwiseAbs().maxCoeff() < 1e-12);
        }
    FrameConfig cfg = frame44();
    const std::vector<std::pair<int, int>> bins = {{2, -1}, {-3, 2}, {0, 1}};
    for (auto [l, k] : bins) {
        CHECK((build_A_lk(l, k, cfg) - testutil::dense_A_lk(l, k, cfg)).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("zero-mismatch correlation is the CP-extended frame energy") {
    FrameConfig cfg = frame44();
    auto rng = make_rng(51);
    CVec x = cscg_vector(rng, cfg.mn());
    cd f00 = cross_correlation(x, 0, 0, cfg);
    double energy = add_cp(dd_to_time(x, cfg), cfg).squaredNorm();
    CHECK(std::abs(f00.imag()) < 1e-10);
    CHECK(f00.real() == doctest::Approx(energy).epsilon(1e-10));
}

TEST_CASE("mainlobe and transmit power identities") {
    FrameConfig cfg = frame44();
    Arrangement arr = small_arrangement();
    SensingConstants consts = build_sensing_constants(arr, cfg, 2, 1);
    auto rng = make_rng(52);
    CVec x_p = cscg_vector(rng, arr.k_p(), 2.0);
    // Pilot-only frame: the expected mainlobe is the exact frame energy.
    CVec full = scatter(x_p, arr.pilot_tx_idx, cfg);
    double energy = add_cp(dd_to_time(full, cfg), cfg).squaredNorm();
    CHECK(expected_mainlobe(0.0, x_p, consts) == doctest::Approx(energy).epsilon(1e-10));
    CHECK(transmit_power(0.0, x_p, consts) ==
          doctest::Approx(energy / cfg.frame_len()).epsilon(1e-10));
    // The data term is linear with slope g_d.
    double m0 = expected_mainlobe(0.0, x_p, consts);
    double m2 = expected_mainlobe(2.0, x_p, consts);
    CHECK(m2 - m0 == doctest::Approx(2.0 * consts.g_d).epsilon(1e-12));
    CHECK(consts.g_d >= arr.k_d());  // identity plus a PSD CP term
}

TEST_CASE("deterministic ISL (p_d = 0) matches direct correlation sums") {
    FrameConfig cfg = frame44();
    Arrangement arr = small_arrangement();
    SensingConstants consts = build_sensing_constants(arr, cfg, 2, 1);
    auto rng = make_rng(53);
    for (int t = 0; t < 5; ++t) {
        CVec x_p = cscg_vector(rng, arr.k_p(), 1.5);
        CVec full = scatter(x_p, arr.pilot_tx_idx, cfg);
        CHECK(expected_isl(0.0, x_p, consts) ==
              doctest::Approx(direct_isl(full, consts, cfg)).epsilon(1e-9));
    }
}

TEST_CASE("analytic expected ISL matches Monte Carlo") {
    FrameConfig cfg = frame44();
    Arrangement arr = small_arrangement();
    SensingConstants consts = build_sensing_constants(arr, cfg, 2, 1);
    auto rng = make_rng(54);
    CVec x_p = cscg_vector(rng, arr.k_p(), 2.0);
    const double p_d = 1.3;
    double analytic = expected_isl(p_d, x_p, consts);

    auto mc_rng = make_rng(55);
    EmpiricalAf af = empirical_af(x_p, p_d, arr, cfg, 2, 1, mc_rng, 20000);
    double mc = 0.0;
    for (size_t b = 0; b < af.bins.size(); ++b)
        if (af.bins[b] != std::pair<int, int>{0, 0}) mc += af.mean_sq[b];
    CHECK(std::abs(mc - analytic) / analytic < 0.03);
}

TEST_CASE("isl polynomial coefficients reproduce expected_isl") {
    FrameConfig cfg = frame44();
    Arrangement arr = small_arrangement();
    SensingConstants consts = build_sensing_constants(arr, cfg, 2, 1);
    auto rng = make_rng(56);
    CVec x_p = cscg_vector(rng, arr.k_p());
    IslPolynomial poly = isl_polynomial(x_p, consts);
    CHECK(poly.c1 > 0.0);
    CHECK(poly.c3 >= 0.0);
    for (double p : {0.0, 0.7, 2.5})
        CHECK(expected_isl(p, x_p, consts) ==
              doctest::Approx(poly.c1 * p * p + poly.c2 * p + poly.c3).epsilon(1e-12));
}

TEST_CASE("expected ISL is invariant to a global pilot phase") {
    FrameConfig cfg = frame44();
    Arrangement arr = small_arrangement();
    SensingConstants consts = build_sensing_constants(arr, cfg, 2, 1);
    auto rng = make_rng(57);
    CVec x_p = cscg_vector(rng, arr.k_p());
    cd phase = std::polar(1.0, 1.234);
    CHECK(expected_isl(1.1, x_p, consts) ==
          doctest::Approx(expected_isl(1.1, CVec(phase * x_p), consts)).epsilon(1e-12));
    CHECK(expected_mainlobe(1.1, x_p, consts) ==
          doctest::Approx(expected_mainlobe(1.1, CVec(phase * x_p), consts)).epsilon(1e-12));
}

TEST_CASE("empirical AF at zero data power is deterministic") {
    FrameConfig cfg = frame44();
    Arrangement arr = small_arrangement();
    auto rng = make_rng(58);
    CVec x_p = cscg_vector(rng, arr.k_p());
    CVec full = scatter(x_p, arr.pilot_tx_idx, cfg);
    auto af_rng = make_rng(59);
    EmpiricalAf af = empirical_af(x_p, 0.0, arr, cfg, 2, 1, af_rng, 7);
    for (size_t b = 0; b < af.bins.size(); ++b) {
        double direct = std::norm(cross_correlation(full, af.bins[b].first, af.bins[b].second, cfg));
        CHECK(af.mean_sq[b] == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("interaction kernels are Hermitian PSD and bins skip the origin") {
    FrameConfig cfg = frame44();
    Arrangement arr = small_arrangement();
    SensingConstants consts = build_sensing_constants(arr, cfg, 2, 1);
    CHECK(consts.bin_count() == (2 * 2 + 1) * (2 * 1 + 1) - 1);
    for (const auto& bin : consts.bins) CHECK((bin.first != 0 || bin.second != 0));
    for (const auto& b : consts.b_mat) {
        CHECK((b - b.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
        Eigen::SelfAdjointEigenSolver<CMat> es(b);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
    CHECK((consts.g_p - consts.g_p.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

}  // TEST_SUITE
