#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "brlab/errors.hpp"
#include "brlab/harness.hpp"
#include "brlab/indices.hpp"

using namespace brlab;

namespace {

struct Overrides {
    std::optional<std::string> config;
    std::vector<int> grid_n;
    std::optional<double> grid_l;
    std::optional<std::string> delta, p0, q0, p, q;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::vector<std::string> settings;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "key = value configuration file");
    cmd->add_option("--grid-n", o.grid_n, "grid sizes (power of two), repeatable")->delimiter(',');
    cmd->add_option("--grid-l", o.grid_l, "domain side L");
    cmd->add_option("--delta", o.delta, "Bochner-Riesz index (rational or decimal)");
    cmd->add_option("--p0", o.p0, "exponent p0");
    cmd->add_option("--q0", o.q0, "exponent q0");
    cmd->add_option("--p", o.p, "exponent p");
    cmd->add_option("--q", o.q, "exponent q");
    cmd->add_option("--trials", o.trials, "trials per grid size");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--set", o.settings, "extra key=value setting, repeatable");
}

ExperimentConfig resolve(const Overrides& o) {
    ExperimentConfig cfg = o.config ? load_config(*o.config) : ExperimentConfig{};
    if (!o.grid_n.empty()) {
        std::string list;
        for (int N : o.grid_n) list += (list.empty() ? "" : ",") + std::to_string(N);
        apply_setting(cfg, "grid_n", list);
    }
    if (o.grid_l) cfg.L = *o.grid_l;
    if (o.delta) apply_setting(cfg, "delta", *o.delta);
    if (o.p0) apply_setting(cfg, "p0", *o.p0);
    if (o.q0) apply_setting(cfg, "q0", *o.q0);
    if (o.p) apply_setting(cfg, "p", *o.p);
    if (o.q) apply_setting(cfg, "q", *o.q);
    if (o.trials) apply_setting(cfg, "trials", std::to_string(*o.trials));
    if (o.seed) cfg.seed = *o.seed;
    if (o.out) cfg.output_dir = *o.out;
    for (const auto& s : o.settings) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw PreconditionError("--set expects key=value, got '" + s + "'");
        apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    return cfg;
}

void print_summary(const Report& r) {
    std::printf("%s: %zu rows, regime: %s\n", r.name.c_str(), r.rows.size(), r.regime.c_str());
    for (const auto& s : r.summaries)
        std::printf("  N=%d rows=%zu degenerate=%zu max=%.6g p95=%.6g median=%.6g\n", s.N, s.rows, s.degenerate,
                    s.max, s.p95, s.median);
    if (r.summaries.size() > 1) std::printf("  slope(max vs log2 N)=%.4f\n", r.slope);
    if (r.name == "decay")
        for (const auto& k : r.extra["scales"])
            std::printf("  k=%d mid_slope=%.4f far_slope=%.4f\n", k["k"].get<int>(), k["mid_slope"].get<double>(),
                        k["far_slope"].get<double>());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bochner-Riesz numerical lab"};
    app.require_subcommand(1);
    Overrides o;
    using Runner = Report (*)(const ExperimentConfig&);
    const std::vector<std::tuple<std::string, std::string, Runner>> runners{
        {"dominate", "sparse domination sweep", run_domination},
        {"prop41", "off-ball local S_k estimate sweep", run_prop41},
        {"prop42", "diagonal local S_k estimate sweep", run_prop42},
        {"decay", "S_k kernel envelope slopes", run_decay},
        {"weights", "weighted norm sweep against predicted bounds", run_weights},
        {"vv", "vector-valued norm sweep", run_vector_valued},
    };
    std::vector<std::pair<CLI::App*, Runner>> cmds;
    for (const auto& [name, help, fn] : runners) {
        auto* cmd = app.add_subcommand(name, help);
        add_common(cmd, o);
        cmds.emplace_back(cmd, fn);
    }
    auto* idx = app.add_subcommand("indices", "exact exponent record");
    int n = 2;
    std::string ip0 = "6/5", iq0 = "2", ip = "8/5", iq = "5/2";
    bool csv = false, conjecture = false;
    idx->add_option("--n", n, "dimension");
    idx->add_option("--p0", ip0, "exponent p0");
    idx->add_option("--q0", iq0, "exponent q0");
    idx->add_option("--p", ip, "exponent p");
    idx->add_option("--q", iq, "exponent q");
    idx->add_flag("--csv", csv, "CSV row with header");
    idx->add_flag("--assume-conjecture", conjecture, "use the conjectured companion index in n >= 3");

    CLI11_PARSE(app, argc, argv);
    try {
        if (idx->parsed()) {
            auto rec = make_record(n, parse_rational(ip0), parse_rational(iq0), parse_rational(ip), parse_rational(iq),
                                   conjecture || n != 2 ? DeltaTildeProvider::assume_conjecture
                                                        : DeltaTildeProvider::dim2_solved);
            if (csv)
                std::cout << record_csv_header() << '\n' << format_record_csv(rec) << '\n';
            else
                std::cout << format_record_text(rec);
            return 0;
        }
        for (const auto& [cmd, fn] : cmds) {
            if (!cmd->parsed()) continue;
            const ExperimentConfig cfg = resolve(o);
            const Report r = fn(cfg);
            write_report(r, cfg);
            print_summary(r);
        }
        return 0;
    } catch (const ThresholdFailure& e) {
        std::fprintf(stderr, "threshold failure: %s\n", e.what());
        return 3;
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "precondition error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
