#include "otfs/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace otfs {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw std::invalid_argument("config: empty list value");
    return out;
}

using Setter = std::function<void(RunSpec&, const std::string&)>;

#define INT_FIELD(expr) [](RunSpec& s, const std::string& v) { s.expr = std::stoi(v); }
#define DBL_FIELD(expr) [](RunSpec& s, const std::string& v) { s.expr = std::stod(v); }
#define U64_FIELD(expr) [](RunSpec& s, const std::string& v) { s.expr = std::stoull(v); }
#define LIST_FIELD(expr) [](RunSpec& s, const std::string& v) { s.expr = parse_list(v); }

const std::map<std::string, std::map<std::string, Setter>>& schema() {
    static const std::map<std::string, std::map<std::string, Setter>> s = {
        {"frame",
         {
             {"m", INT_FIELD(frame.M)},
             {"n", INT_FIELD(frame.N)},
             {"n_cp", INT_FIELD(frame.n_cp)},
             {"delta_f", DBL_FIELD(frame.delta_f)},
             {"f_c", DBL_FIELD(frame.f_c)},
         }},
        {"channel",
         {
             {"l", INT_FIELD(channel.L)},
             {"q", INT_FIELD(channel.Q)},
             {"sigma_h2", DBL_FIELD(channel.sigma_h2)},
             {"paths", INT_FIELD(channel.paths)},
         }},
        {"arrangement",
         {
             {"delay0", INT_FIELD(plan.delay0)},
             {"doppler0", INT_FIELD(plan.doppler0)},
             {"delay_extent", INT_FIELD(plan.delay_extent)},
             {"doppler_extent", INT_FIELD(plan.doppler_extent)},
             {"delay_margin", INT_FIELD(plan.delay_margin)},
             {"doppler_margin", INT_FIELD(plan.doppler_margin)},
             {"data_limit", INT_FIELD(plan.data_limit)},
         }},
        {"optimizer",
         {
             {"eta", DBL_FIELD(opt.eta)},
             {"rho", DBL_FIELD(opt.rho)},
             {"zeta", DBL_FIELD(opt.zeta)},
             {"eps1", DBL_FIELD(opt.eps1)},
             {"eps2", DBL_FIELD(opt.eps2)},
             {"max_ao_iters", INT_FIELD(opt.max_ao_iters)},
             {"max_admm_iters", INT_FIELD(opt.max_admm_iters)},
             {"p_max", DBL_FIELD(opt.p_max)},
             {"xi_min", DBL_FIELD(opt.xi_min)},
             {"sinr_ref", DBL_FIELD(opt.sinr_ref)},
             {"isl_ref", DBL_FIELD(opt.isl_ref)},
             {"init", [](RunSpec& s, const std::string& v) { s.opt.init = parse_init_pattern(v); }},
             {"p0", DBL_FIELD(opt.p0)},
         }},
        {"experiment",
         {
             {"kind",
              [](RunSpec& s, const std::string& v) { s.exp.kind = parse_experiment_kind(v); }},
             {"snr_db", LIST_FIELD(exp.snr_db)},
             {"velocities", LIST_FIELD(exp.velocities)},
             {"etas", LIST_FIELD(exp.etas)},
             {"splits", LIST_FIELD(exp.splits)},
             {"trials", INT_FIELD(exp.trials)},
             {"noise_trials", INT_FIELD(exp.noise_trials)},
             {"seed", U64_FIELD(exp.seed)},
             {"l_hat", INT_FIELD(exp.l_hat)},
             {"q_hat", INT_FIELD(exp.q_hat)},
             {"af_trials", INT_FIELD(exp.af_trials)},
             {"modulation", [](RunSpec& s, const std::string& v) { s.exp.modulation = v; }},
             {"workers", INT_FIELD(exp.workers)},
             {"snr_db_fixed", DBL_FIELD(exp.snr_db_fixed)},
         }},
    };
    return s;
}

#undef INT_FIELD
#undef DBL_FIELD
#undef U64_FIELD
#undef LIST_FIELD

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
    if (name == "capacity_vs_snr") return ExperimentKind::capacity_vs_snr;
    if (name == "capacity_vs_velocity") return ExperimentKind::capacity_vs_velocity;
    if (name == "optimize_sweep") return ExperimentKind::optimize_sweep;
    if (name == "region") return ExperimentKind::region;
    if (name == "af_slices") return ExperimentKind::af_slices;
    if (name == "throughput") return ExperimentKind::throughput;
    throw std::invalid_argument("unknown experiment kind: " + name);
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::capacity_vs_snr: return "capacity_vs_snr";
        case ExperimentKind::capacity_vs_velocity: return "capacity_vs_velocity";
        case ExperimentKind::optimize_sweep: return "optimize_sweep";
        case ExperimentKind::region: return "region";
        case ExperimentKind::af_slices: return "af_slices";
        case ExperimentKind::throughput: return "throughput";
    }
    throw std::logic_error("unreachable");
}

double RunSpec::symbol_power(const Arrangement& arr) const {
    return frame.frame_len() * opt.p_max / (arr.k_p() + arr.k_d());
}

double RunSpec::sigma_n2_at(double snr_db, const Arrangement& arr) const {
    return symbol_power(arr) / std::pow(10.0, snr_db / 10.0);
}

RunSpec parse_config_text(const std::string& text) {
    RunSpec spec;
    spec.source_text = text;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw std::invalid_argument("config line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (schema().find(section) == schema().end())
                throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown section [" + section + "]");
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": key outside any section");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        const auto& fields = schema().at(section);
        auto it = fields.find(key);
        if (it == fields.end())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "' in section [" + section + "]");
        try {
            it->second(spec, value);
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception& e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad value for '" + key + "': " + e.what());
        }
    }
    spec.frame.validate();
    return spec;
}

RunSpec parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace otfs
