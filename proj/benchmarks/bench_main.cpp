// Microbenchmarks for the hot paths: channel-matrix assembly, the analytic
// ISL evaluation (with its constants build), and the optimizer inner loop.

#include <benchmark/benchmark.h>

#include <otfs/channel.hpp>
#include <otfs/optimizer.hpp>
#include <otfs/rng.hpp>
#include <otfs/sensing.hpp>

using namespace otfs;

namespace {

struct Fixture {
    FrameConfig frame;
    Arrangement arr;
    Dictionaries dicts;
    SensingConstants consts;
    CVec x_p;

    Fixture() {
        frame.M = 8;
        frame.N = 16;
        frame.n_cp = 16;
        GuardPlan plan;
        plan.delay_extent = 8;
        plan.doppler_extent = 3;
        plan.doppler_margin = 3;
        plan.data_limit = 40;
        arr = build_arrangement(frame, plan);
        dicts = build_dictionaries(arr, frame, 7, 3);
        consts = build_sensing_constants(arr, frame, 7, 5);
        auto rng = make_rng(1);
        x_p = cscg_vector(rng, arr.k_p(), 2.0);
    }
};

const Fixture& fixture() {
    static Fixture f;
    return f;
}

void bm_dd_channel_matrix(benchmark::State& state) {
    const auto& f = fixture();
    auto rng = make_rng(2);
    ChannelSpec spec = draw_channel(rng, 7, 3, 0.5, 32);
    for (auto _ : state) benchmark::DoNotOptimize(dd_channel_matrix(spec, f.frame));
}
BENCHMARK(bm_dd_channel_matrix)->Unit(benchmark::kMillisecond);

void bm_sensing_constants(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state)
        benchmark::DoNotOptimize(build_sensing_constants(f.arr, f.frame, 7, 5));
}
BENCHMARK(bm_sensing_constants)->Unit(benchmark::kMillisecond);

void bm_expected_isl(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(expected_isl(1.5, f.x_p, f.consts));
}
BENCHMARK(bm_expected_isl)->Unit(benchmark::kMicrosecond);

void bm_admm_sca_step(benchmark::State& state) {
    const auto& f = fixture();
    OptimizerConfig cfg;
    cfg.sigma_n2 = 0.5;
    cfg.isl_ref = 100.0;
    cfg.xi_min = 0.5 * f.consts.frame_len * cfg.p_max;
    PilotContext ctx = build_pilot_context(f.consts, f.dicts);
    DesignPoint dp = make_init(f.arr, f.frame, f.consts, f.dicts, cfg);
    for (auto _ : state) {
        AdmmState st;
        st.x1 = st.x2 = dp.x_p;
        st.a = CMat::Identity(ctx.k_h, ctx.k_h);
        st.d = CVec::Zero(ctx.k_p);
        st.s1 = dp.s1;
        admm_sca_step(dp.p_d, st, f.consts, ctx, cfg);
        benchmark::DoNotOptimize(st.x1);
    }
}
BENCHMARK(bm_admm_sca_step)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
