#include "otfs/channel.hpp"
#include "otfs/modem.hpp"
#include "otfs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace otfs {

void ChannelSpec::validate() const {
    if (paths.empty()) throw std::invalid_argument("ChannelSpec: at least one path required");
    if (L < 0 || Q < 0) throw std::invalid_argument("ChannelSpec: L and Q must be nonnegative");
    for (const auto& p : paths) {
        if (p.delay_tap < 0 || p.delay_tap > L) throw std::invalid_argument("ChannelSpec: delay tap out of range");
        if (p.doppler_tap < 0 || p.doppler_tap > Q)
            throw std::invalid_argument("ChannelSpec: Doppler tap out of range");
    }
}

CVec ChannelSpec::response_vector() const {
    CVec h = CVec::Zero(k_h());
    for (const auto& p : paths) h(tap_index(p.delay_tap, p.doppler_tap)) += p.gain;
    return h;
}

CVec apply_dd_tap(const CVec& x_dd, int l, int k, const FrameConfig& cfg) {
    const int mn = cfg.mn();
    CVec s = dd_to_time(x_dd, cfg);
    // Delta^k then Pi^l on the time samples.
    for (int n = 0; n < mn; ++n) {
        double phase = 2.0 * M_PI * static_cast<double>(n) * k / mn;
        s(n) *= cd(std::cos(phase), std::sin(phase));
    }
    CVec shifted(mn);
    for (int n = 0; n < mn; ++n) shifted(n) = s(((n - l) % mn + mn) % mn);
    return time_to_dd(shifted, cfg);
}

CMat dd_channel_matrix(const ChannelSpec& spec, const FrameConfig& cfg) {
    spec.validate();
    cfg.validate();
    const int mn = cfg.mn();
    CMat h = CMat::Zero(mn, mn);
    for (const auto& p : spec.paths) {
        CVec e = CVec::Zero(mn);
        for (int j = 0; j < mn; ++j) {
            e(j) = 1.0;
            h.col(j) += p.gain * apply_dd_tap(e, p.delay_tap, p.doppler_tap, cfg);
            e(j) = 0.0;
        }
    }
    return h;
}

ChannelSpec draw_channel(std::mt19937_64& rng, int L, int Q, double sigma_h2, int paths) {
    ChannelSpec spec;
    spec.L = L;
    spec.Q = Q;
    spec.sigma_h2 = sigma_h2;
    const int kh = spec.k_h();
    if (paths < 1 || paths > kh) throw std::invalid_argument("draw_channel: need 1 <= P <= K_h");
    std::vector<int> slots(kh);
    std::iota(slots.begin(), slots.end(), 0);
    std::shuffle(slots.begin(), slots.end(), rng);
    slots.resize(paths);
    std::sort(slots.begin(), slots.end());
    for (int t : slots) spec.paths.push_back({cscg(rng, sigma_h2), t / (Q + 1), t % (Q + 1)});
    return spec;
}

RxSignal simulate_rx(const CVec& x_dd, const ChannelSpec& spec, const Arrangement& arr,
                     const FrameConfig& cfg, std::mt19937_64& rng, double sigma_n2) {
    spec.validate();
    if (x_dd.size() != cfg.mn()) throw std::invalid_argument("simulate_rx: x_dd length must be M*N");
    RxSignal rx;
    rx.y_dd = CVec::Zero(cfg.mn());
    for (const auto& p : spec.paths)
        rx.y_dd += p.gain * apply_dd_tap(x_dd, p.delay_tap, p.doppler_tap, cfg);
    if (sigma_n2 > 0.0) rx.y_dd += time_to_dd(cscg_vector(rng, cfg.mn(), sigma_n2), cfg);
    rx.y_p = gather(rx.y_dd, arr.pilot_rx_idx);
    rx.y_d = gather(rx.y_dd, arr.data_rx_idx);
    return rx;
}

CMat Dictionaries::pilot_dictionary(const CVec& x_p) const {
    if (pilot_blocks.empty()) throw std::logic_error("Dictionaries not built");
    if (x_p.size() != pilot_blocks[0].cols())
        throw std::invalid_argument("pilot_dictionary: x_p length must be K_p");
    CMat omega(pilot_blocks[0].rows(), k_h());
    for (int t = 0; t < k_h(); ++t) omega.col(t) = pilot_blocks[static_cast<size_t>(t)] * x_p;
    return omega;
}

CMat Dictionaries::extended_pilot_dictionary() const {
    const auto rp = pilot_blocks[0].rows();
    const auto kp = pilot_blocks[0].cols();
    CMat ext(rp, k_h() * kp);
    for (int t = 0; t < k_h(); ++t) ext.middleCols(t * kp, kp) = pilot_blocks[static_cast<size_t>(t)];
    return ext;
}

Dictionaries build_dictionaries(const Arrangement& arr, const FrameConfig& cfg, int L, int Q) {
    arr.validate(cfg);
    Dictionaries d;
    d.L = L;
    d.Q = Q;
    const int kh = d.k_h();
    d.pilot_blocks.reserve(kh);
    d.data_blocks.reserve(kh);
    CVec e = CVec::Zero(cfg.mn());
    for (int l = 0; l <= L; ++l)
        for (int k = 0; k <= Q; ++k) {
            CMat pb(arr.r_p(), arr.k_p());
            CMat db(arr.r_d(), arr.k_d());
            for (int c = 0; c < arr.k_p(); ++c) {
                e(arr.pilot_tx_idx[static_cast<size_t>(c)]) = 1.0;
                pb.col(c) = gather(apply_dd_tap(e, l, k, cfg), arr.pilot_rx_idx);
                e(arr.pilot_tx_idx[static_cast<size_t>(c)]) = 0.0;
            }
            for (int c = 0; c < arr.k_d(); ++c) {
                e(arr.data_tx_idx[static_cast<size_t>(c)]) = 1.0;
                db.col(c) = gather(apply_dd_tap(e, l, k, cfg), arr.data_rx_idx);
                e(arr.data_tx_idx[static_cast<size_t>(c)]) = 0.0;
            }
            d.pilot_blocks.push_back(std::move(pb));
            d.data_blocks.push_back(std::move(db));
        }
    return d;
}

}  // namespace otfs
