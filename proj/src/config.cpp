#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "brlab/errors.hpp"
#include "brlab/harness.hpp"

namespace brlab {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string k) {
    std::replace(k.begin(), k.end(), '-', '_');
    return k;
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
    T out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw PreconditionError("config: bad value for " + key + ": '" + v + "'");
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number<int>(key, trim(item)));
    if (out.empty()) throw PreconditionError("config: empty list for " + key);
    return out;
}

Rational parse_exponent(const std::string& key, const std::string& v) {
    try {
        return parse_rational(v);
    } catch (const std::exception&) {
        throw PreconditionError("config: bad value for " + key + ": '" + v + "'");
    }
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = normalize_key(trim(raw_key));
    const std::string v = trim(raw_value);
    if (key == "n") cfg.n = parse_number<int>(key, v);
    else if (key == "L" || key == "grid_l") cfg.L = parse_number<double>(key, v);
    else if (key == "N" || key == "grid_n") cfg.grid_n = parse_int_list(key, v);
    else if (key == "delta") cfg.delta = parse_exponent(key, v);
    else if (key == "p0") cfg.p0 = parse_exponent(key, v);
    else if (key == "q0") cfg.q0 = parse_exponent(key, v);
    else if (key == "p") cfg.p = parse_exponent(key, v);
    else if (key == "q") cfg.q = parse_exponent(key, v);
    else if (key == "trials") cfg.trials = parse_number<int>(key, v);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, v);
    else if (key == "eps_policy") cfg.eps_policy = v;
    else if (key == "C_init") cfg.C_init = parse_number<double>(key, v);
    else if (key == "recursion_floor") cfg.recursion_floor = parse_number<int>(key, v);
    else if (key == "N_decay") cfg.N_decay = parse_number<int>(key, v);
    else if (key == "M_decay") cfg.M_decay = parse_number<int>(key, v);
    else if (key == "rho_offset") cfg.rho_offset = parse_number<double>(key, v);
    else if (key == "test_function") cfg.test_function = v;
    else if (key == "decay_scales") cfg.decay_scales = parse_int_list(key, v);
    else if (key == "weight_preset") cfg.weight_preset = v;
    else if (key == "functions") cfg.functions = parse_number<int>(key, v);
    else if (key == "output_dir" || key == "out") cfg.output_dir = v;
    else throw PreconditionError("config: unknown key '" + key + "'");

    if (cfg.trials < 1) throw PreconditionError("config: trials must be >= 1");
    if (cfg.eps_policy != "adaptive") throw PreconditionError("config: eps_policy must be 'adaptive'");
    if (cfg.recursion_floor < 1) throw PreconditionError("config: recursion_floor must be >= 1");
    if (cfg.functions < 1) throw PreconditionError("config: functions must be >= 1");
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        if (trim(line).empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw PreconditionError("config line " + std::to_string(lineno) + ": expected key = value");
        apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace brlab
