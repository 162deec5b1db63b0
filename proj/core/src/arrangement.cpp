#include "otfs/arrangement.hpp"
#include "otfs/channel.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace otfs {

namespace {

int cell(int delay, int doppler, const FrameConfig& cfg) {
    return ((delay % cfg.M) + cfg.M) % cfg.M + cfg.M * (((doppler % cfg.N) + cfg.N) % cfg.N);
}

void check_distinct_in_range(const std::vector<int>& idx, int mn, const char* what) {
    std::set<int> seen;
    for (int i : idx) {
        if (i < 0 || i >= mn) throw std::invalid_argument(std::string(what) + ": index out of range");
        if (!seen.insert(i).second)
            throw std::invalid_argument(std::string(what) + ": duplicate index");
    }
}

}  // namespace

void Arrangement::validate(const FrameConfig& cfg) const {
    const int mn = cfg.mn();
    check_distinct_in_range(pilot_tx_idx, mn, "pilot_tx_idx");
    check_distinct_in_range(data_tx_idx, mn, "data_tx_idx");
    check_distinct_in_range(pilot_rx_idx, mn, "pilot_rx_idx");
    check_distinct_in_range(data_rx_idx, mn, "data_rx_idx");
    std::set<int> p(pilot_tx_idx.begin(), pilot_tx_idx.end());
    for (int i : data_tx_idx)
        if (p.count(i)) throw std::invalid_argument("pilot and data tx regions overlap");
    std::set<int> pr(pilot_rx_idx.begin(), pilot_rx_idx.end());
    for (int i : data_rx_idx)
        if (pr.count(i)) throw std::invalid_argument("pilot and data rx regions overlap");
    if (k_p() + k_d() > mn) throw std::invalid_argument("K_p + K_d exceeds the grid size");
}

Arrangement build_arrangement(const FrameConfig& cfg, const GuardPlan& plan) {
    cfg.validate();
    if (plan.delay_extent < 1 || plan.doppler_extent < 1)
        throw std::invalid_argument("build_arrangement: pilot block must be nonempty");
    const bool delay_full = plan.delay_extent == cfg.M && plan.delay_margin == 0;
    if (!delay_full && plan.delay_extent + 2 * plan.delay_margin > cfg.M)
        throw std::invalid_argument("build_arrangement: pilot block plus margins exceeds the delay axis");
    const bool doppler_full = plan.doppler_extent == cfg.N && plan.doppler_margin == 0;
    if (!doppler_full && plan.doppler_extent + 2 * plan.doppler_margin > cfg.N)
        throw std::invalid_argument("build_arrangement: pilot block plus margins exceeds the Doppler axis");

    Arrangement arr;
    std::set<int> guard, pilot_rx;
    for (int b = 0; b < plan.doppler_extent; ++b)
        for (int a = 0; a < plan.delay_extent; ++a)
            arr.pilot_tx_idx.push_back(cell(plan.delay0 + a, plan.doppler0 + b, cfg));

    // Guard: the pilot block dilated by the margins on both sides.
    for (int b = -plan.doppler_margin; b < plan.doppler_extent + plan.doppler_margin; ++b)
        for (int a = -plan.delay_margin; a < plan.delay_extent + plan.delay_margin; ++a)
            guard.insert(cell(plan.delay0 + a, plan.doppler0 + b, cfg));

    // Pilot observation region: the block dilated forward only, since the
    // channel applies nonnegative delay/Doppler shifts.
    for (int b = 0; b < plan.doppler_extent + plan.doppler_margin; ++b)
        for (int a = 0; a < plan.delay_extent + plan.delay_margin; ++a)
            pilot_rx.insert(cell(plan.delay0 + a, plan.doppler0 + b, cfg));
    arr.pilot_rx_idx.assign(pilot_rx.begin(), pilot_rx.end());

    // Data fills the remainder, scanning Doppler columns starting just past
    // the pilot block's trailing guard so a data_limit keeps a contiguous run.
    const int limit = plan.data_limit < 0 ? cfg.mn() : plan.data_limit;
    for (int db = 0; db < cfg.N && arr.k_d() < limit; ++db) {
        int b = plan.doppler0 + plan.doppler_extent + plan.doppler_margin + db;
        for (int da = 0; da < cfg.M && arr.k_d() < limit; ++da) {
            int idx = cell(plan.delay0 + da, b, cfg);
            if (!guard.count(idx)) arr.data_tx_idx.push_back(idx);
        }
    }
    std::sort(arr.data_tx_idx.begin(), arr.data_tx_idx.end());

    for (int i = 0; i < cfg.mn(); ++i)
        if (!pilot_rx.count(i)) arr.data_rx_idx.push_back(i);

    arr.validate(cfg);
    return arr;
}

DecouplingReport verify_decoupling(const Arrangement& arr, const FrameConfig& cfg, int L, int Q,
                                   double tol) {
    DecouplingReport rep;
    for (int l = 0; l <= L; ++l)
        for (int k = 0; k <= Q; ++k) {
            ChannelSpec spec;
            spec.paths = {{cd(1.0, 0.0), l, k}};
            spec.L = L;
            spec.Q = Q;
            CMat h = dd_channel_matrix(spec, cfg);
            for (int pr : arr.pilot_rx_idx)
                for (int dt : arr.data_tx_idx)
                    rep.max_leakage = std::max(rep.max_leakage, std::abs(h(pr, dt)));
            for (int dr : arr.data_rx_idx)
                for (int pt : arr.pilot_tx_idx)
                    rep.max_leakage = std::max(rep.max_leakage, std::abs(h(dr, pt)));
        }
    rep.ok = rep.max_leakage < tol;
    return rep;
}

CVec scatter(const CVec& values, const std::vector<int>& idx, const FrameConfig& cfg) {
    if (values.size() != static_cast<Eigen::Index>(idx.size()))
        throw std::invalid_argument("scatter: values/idx size mismatch");
    check_distinct_in_range(idx, cfg.mn(), "scatter");
    CVec x = CVec::Zero(cfg.mn());
    for (size_t i = 0; i < idx.size(); ++i) x(idx[i]) = values(static_cast<Eigen::Index>(i));
    return x;
}

CVec gather(const CVec& x, const std::vector<int>& idx) {
    CVec v(static_cast<Eigen::Index>(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= x.size()) throw std::invalid_argument("gather: index out of range");
        v(static_cast<Eigen::Index>(i)) = x(idx[i]);
    }
    return v;
}

CMat selection_matrix(const std::vector<int>& idx, int rows) {
    CMat m = CMat::Zero(rows, static_cast<Eigen::Index>(idx.size()));
    for (size_t c = 0; c < idx.size(); ++c) m(idx[c], static_cast<Eigen::Index>(c)) = 1.0;
    return m;
}

std::string describe(const Arrangement& arr, const FrameConfig& cfg) {
    std::ostringstream os;
    os << "grid " << cfg.M << "x" << cfg.N << " K_p=" << arr.k_p() << " K_d=" << arr.k_d()
       << " R_p=" << arr.r_p() << " R_d=" << arr.r_d()
       << " r_pilot=" << arr.pilot_ratio() << " r_GI=" << arr.guard_ratio(cfg);
    return os.str();
}

}  // namespace otfs
