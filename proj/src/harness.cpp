#include "brlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "brlab/errors.hpp"
#include "brlab/multiplier.hpp"
#include "brlab/sparse.hpp"
#include "brlab/weights.hpp"

namespace brlab {

namespace {

using nlohmann::json;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double a, double b) { return a + (b - a) * uniform01(rng); }

double gaussian(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, int t) { return cfg.seed ^ static_cast<std::uint64_t>(t); }

GridSpec grid_for(const ExperimentConfig& cfg, int N) { return GridSpec(cfg.n, cfg.L, N); }

struct Wave {
    std::array<double, kMaxDim> xi{};
    cplx amplitude;
};

std::vector<Wave> random_waves(int n, int count, double max_frequency, std::mt19937_64& rng) {
    std::vector<Wave> waves(static_cast<std::size_t>(count));
    for (auto& w : waves) {
        double r2;
        do {
            r2 = 0.0;
            for (int d = 0; d < n; ++d) {
                w.xi[d] = uniform(rng, -max_frequency, max_frequency);
                r2 += w.xi[d] * w.xi[d];
            }
        } while (r2 > max_frequency * max_frequency);
        double re = gaussian(rng);
        double im = gaussian(rng);
        w.amplitude = cplx(re, im);
    }
    return waves;
}

std::array<double, kMaxDim> point(const GridSpec& spec, std::size_t i) {
    Index p = spec.lattice().unflat(i);
    std::array<double, kMaxDim> x{};
    for (int d = 0; d < spec.n(); ++d) x[d] = spec.coordinate(p[d]);
    return x;
}

double norm_of(const GridSpec& spec, const std::array<double, kMaxDim>& x) {
    double s = 0.0;
    for (int d = 0; d < spec.n(); ++d) s += x[d] * x[d];
    return std::sqrt(s);
}

// Sum of waves on the points where keep(|x|) holds, zero elsewhere.
template <class Keep>
SampledField waves_on(const GridSpec& spec, const std::vector<Wave>& waves, Keep&& keep) {
    SampledField f(spec);
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto x = point(spec, i);
        if (!keep(x)) continue;
        cplx acc = 0.0;
        for (const auto& w : waves) {
            double t = 0.0;
            for (int d = 0; d < spec.n(); ++d) t += w.xi[d] * x[d];
            acc += w.amplitude * std::polar(1.0, 2.0 * std::numbers::pi * t);
        }
        f[i] = acc;
    }
    return f;
}

// Mean of |f|^p over points with lo < |x| <= hi; returns {mean, count}.
std::pair<double, std::size_t> shell_mean(const SampledField& f, double lo, double hi, double p) {
    const GridSpec& spec = f.spec();
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double r = norm_of(spec, point(spec, i));
        if (r > lo && r <= hi) {
            acc += std::pow(std::abs(f[i]), p);
            ++count;
        }
    }
    return {count ? acc / static_cast<double>(count) : 0.0, count};
}

SampledField masked_outside(const SampledField& f, double radius) {
    SampledField out = f;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (norm_of(f.spec(), point(f.spec(), i)) <= radius) out[i] = 0.0;
    return out;
}

json record_json(const ExponentRecord& r) {
    json j;
    j["n"] = r.n;
    j["p0"] = to_string(r.p0);
    j["q0"] = to_string(r.q0);
    j["p"] = to_string(r.p);
    j["q"] = to_string(r.q);
    j["delta_p"] = to_string(r.delta_p);
    j["p1"] = to_string(r.p1);
    j["theta"] = to_string(r.theta);
    j["rho"] = to_string(r.rho);
    j["delta_bar"] = to_string(r.delta_bar);
    j["nu2"] = to_string(r.nu2);
    j["delta_bar2"] = r.delta_bar2 ? json(to_string(*r.delta_bar2)) : json(nullptr);
    j["alpha_below"] = r.alpha_below ? json(to_string(*r.alpha_below)) : json(nullptr);
    j["alpha_above"] = r.alpha_above ? json(to_string(*r.alpha_above)) : json(nullptr);
    j["pair_admissible"] = r.pair_admissible;
    j["vv_admissible"] = r.vv_admissible;
    j["conjectural"] = r.conjectural;
    return j;
}

Rational critical_delta(const ExperimentConfig& cfg) {
    if (cfg.n == 2) return delta_bar_2(cfg.p0);
    return delta_bar(cfg.p0, cfg.n, DeltaTildeProvider::assume_conjecture).value;
}

void finish(Report& r, const std::vector<int>& Ns, const std::map<int, std::vector<double>>& ratios,
            const std::map<int, std::size_t>& degenerate) {
    std::vector<double> maxima;
    for (int N : Ns) {
        auto it = ratios.find(N);
        auto dg = degenerate.find(N);
        r.summaries.push_back(summarize(N, it == ratios.end() ? std::vector<double>{} : it->second,
                                        dg == degenerate.end() ? 0 : dg->second));
        maxima.push_back(r.summaries.back().max);
    }
    r.slope = log2_slope(Ns, maxima);
}

std::vector<int> sorted_grids(const ExperimentConfig& cfg) {
    std::vector<int> Ns = cfg.grid_n;
    std::sort(Ns.begin(), Ns.end());
    Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
    return Ns;
}

TestKind test_kind(const std::string& name) {
    if (name == "random_trig") return TestKind::random_trig;
    if (name == "bump") return TestKind::bump;
    if (name == "gaussian") return TestKind::gaussian;
    if (name == "indicator_smooth") return TestKind::indicator_smooth;
    throw PreconditionError("unknown test_function '" + name + "'");
}

}  // namespace

Summary summarize(int N, std::vector<double> ratios, std::size_t degenerate) {
    Summary s;
    s.N = N;
    s.degenerate = degenerate;
    ratios.erase(std::remove_if(ratios.begin(), ratios.end(), [](double v) { return !std::isfinite(v); }),
                 ratios.end());
    s.rows = ratios.size();
    if (ratios.empty()) return s;
    std::sort(ratios.begin(), ratios.end());
    s.max = ratios.back();
    std::size_t rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(ratios.size())));
    s.p95 = ratios[std::max<std::size_t>(rank, 1) - 1];
    std::size_t m = ratios.size() / 2;
    s.median = ratios.size() % 2 ? ratios[m] : 0.5 * (ratios[m - 1] + ratios[m]);
    return s;
}

double log2_slope(const std::vector<int>& x, const std::vector<double>& y) {
    if (x.size() < 2 || x.size() != y.size()) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log2(static_cast<double>(x[i]));
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = std::log2(static_cast<double>(x[i])) - mx;
        sxy += dx * (y[i] - my);
        sxx += dx * dx;
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string report_csv(const Report& r) {
    std::ostringstream os;
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
    os << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    }
    return os.str();
}

std::string report_json(const Report& r, const ExperimentConfig& cfg) {
    json j;
    j["name"] = r.name;
    j["regime"] = r.regime;
    json c;
    c["n"] = cfg.n;
    c["L"] = cfg.L;
    c["grid_n"] = cfg.grid_n;
    c["delta"] = to_string(cfg.delta);
    c["p0"] = to_string(cfg.p0);
    c["q0"] = to_string(cfg.q0);
    c["p"] = to_string(cfg.p);
    c["q"] = to_string(cfg.q);
    c["trials"] = cfg.trials;
    c["seed"] = cfg.seed;
    c["eps_policy"] = cfg.eps_policy;
    c["C_init"] = cfg.C_init;
    c["recursion_floor"] = cfg.recursion_floor;
    c["N_decay"] = cfg.N_decay;
    c["M_decay"] = cfg.M_decay;
    c["rho_offset"] = cfg.rho_offset;
    c["test_function"] = cfg.test_function;
    j["config"] = c;
    j["record"] = record_json(make_record(cfg.n, cfg.p0, cfg.q0, cfg.p, cfg.q,
                                          cfg.n == 2 ? DeltaTildeProvider::dim2_solved
                                                     : DeltaTildeProvider::assume_conjecture));
    json s = json::array();
    for (const auto& m : r.summaries)
        s.push_back({{"N", m.N}, {"rows", m.rows}, {"degenerate", m.degenerate}, {"max", m.max}, {"p95", m.p95},
                     {"median", m.median}});
    j["summaries"] = s;
    j["slope"] = r.slope;
    j["extra"] = r.extra;
    return j.dump(2) + "\n";
}

void write_report(const Report& r, const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream csv(cfg.output_dir / (r.name + ".csv"), std::ios::binary);
    csv << report_csv(r);
    std::ofstream js(cfg.output_dir / (r.name + ".json"), std::ios::binary);
    js << report_json(r, cfg);
    if (!csv || !js) throw std::runtime_error("cannot write report to " + cfg.output_dir.string());
}

Report run_domination(const ExperimentConfig& cfg) {
    Report r;
    r.name = "dominate";
    r.columns = {"N",     "trial", "seed",  "p0",    "q0",    "delta",       "pairing",    "form",
                 "ratio", "C",     "depth", "nodes", "certificate", "E_fraction", "degenerate"};
    const Rational crit = critical_delta(cfg);
    if (cfg.delta <= crit) r.regime = "below critical index";
    r.extra["critical_delta"] = to_string(crit);

    const double delta = to_double(cfg.delta);
    const double p0 = to_double(cfg.p0);
    const double q0 = to_double(cfg.q0);
    const double q0_dual = q0 / (q0 - 1.0);
    SparseConfig scfg;
    scfg.C_init = cfg.C_init;
    scfg.min_side = cfg.recursion_floor;
    scfg.record_off_diagonal = false;
    scfg.maximal.p0 = p0;
    scfg.maximal.q0 = q0;

    const auto Ns = sorted_grids(cfg);
    std::map<int, std::vector<double>> ratios;
    std::map<int, std::size_t> degenerate;
    bool all_certified = true;
    for (int N : Ns) {
        const GridSpec spec = grid_for(cfg, N);
        for (int t = 0; t < cfg.trials; ++t) {
            const std::uint64_t s = trial_seed(cfg, t);
            std::mt19937_64 rng(s);
            TestFunctionParams pf, pg;
            for (int d = 0; d < cfg.n; ++d) pf.center[d] = uniform(rng, -1.0, 1.0);
            for (int d = 0; d < cfg.n; ++d) pg.center[d] = uniform(rng, -1.0, 1.0);
            SampledField f = zero_field(spec), g = zero_field(spec);
            if (cfg.test_function != "zero") {
                const TestKind kind = test_kind(cfg.test_function);
                f = make_test_function(spec, kind, pf, 2 * s);
                g = make_test_function(spec, kind, pg, 2 * s + 1);
            }
            std::vector<std::string> row{std::to_string(N), std::to_string(t), std::to_string(s),
                                         to_string(cfg.p0), to_string(cfg.q0), to_string(cfg.delta)};
            if (f.is_zero() || g.is_zero()) {
                row.insert(row.end(), {"0", "0", "nan", "", "0", "0", "1", "", "1"});
                r.rows.push_back(row);
                ++degenerate[N];
                continue;
            }
            SparseCollection S = build_sparse(f, g, delta, p0, q0, scfg);
            const double form = sparse_form(S, f, g, p0, q0_dual);
            const double pairing = std::abs(bilinear_pairing(f, g, delta));
            const bool cert = S.certificate_holds();
            all_certified = all_certified && cert;

            std::map<int, std::pair<std::int64_t, std::int64_t>> per_level;
            for (const auto& node : S.nodes) {
                auto& acc = per_level[node.cube.level];
                acc.first += node.E_cells;
                acc.second += node.cube.cells();
            }
            std::string fractions;
            for (const auto& [level, acc] : per_level) {
                if (!fractions.empty()) fractions += ';';
                fractions += format_double(static_cast<double>(acc.first) / static_cast<double>(acc.second));
            }
            const bool degen = !(form > 0.0);
            const double ratio = degen ? std::nan("") : pairing / form;
            row.insert(row.end(), {format_double(pairing), format_double(form), format_double(ratio),
                                   format_double(S.nodes.front().C), std::to_string(S.depth()),
                                   std::to_string(S.nodes.size()), cert ? "1" : "0", fractions,
                                   degen ? "1" : "0"});
            r.rows.push_back(row);
            if (degen)
                ++degenerate[N];
            else
                ratios[N].push_back(ratio);
        }
    }
    r.extra["all_certified"] = all_certified;
    finish(r, Ns, ratios, degenerate);
    return r;
}

Report run_prop41(const ExperimentConfig& cfg) {
    if (cfg.n != 2) throw PreconditionError("local estimates are implemented for n = 2");
    Report r;
    r.name = "prop41";
    r.columns = {"N", "config", "seed", "k", "r", "profile", "rho", "M", "lhs", "rhs", "ratio", "degenerate"};
    const double delta = to_double(cfg.delta);
    const double p0 = to_double(cfg.p0);
    const double rho = to_double(rho_n(cfg.p0, cfg.n)) + cfg.rho_offset;
    const int M = cfg.M_decay;
    r.extra["rho"] = rho;

    const auto Ns = sorted_grids(cfg);
    const int k_min = min_resolvable_scale(grid_for(cfg, Ns.front()));
    struct Scale {
        int k;
        double radius;
        int jmax;
    };
    std::vector<Scale> scales;
    for (int k = 0; k >= k_min; --k)
        for (double rad = std::ldexp(1.0, -k); 4.0 * rad <= cfg.L / 2; rad *= 2) {
            int jmax = 1;
            while (std::ldexp(rad, jmax + 2) <= cfg.L / 2) ++jmax;
            scales.push_back({k, rad, jmax});
        }
    if (scales.empty()) throw PreconditionError("no admissible (k, r) with 2^k r >= 1 and 4r <= L/2 on this grid");

    std::map<int, std::vector<double>> ratios;
    std::map<int, std::size_t> degenerate;
    for (int N : Ns) {
        const GridSpec spec = grid_for(cfg, N);
        int config = 0;
        for (const auto& sc : scales) {
            std::vector<std::pair<std::string, std::pair<int, int>>> profiles;
            for (int j = 1; j <= sc.jmax; ++j) profiles.push_back({"j" + std::to_string(j), {j, j}});
            if (sc.jmax >= 2) profiles.push_back({"all", {1, sc.jmax}});
            for (const auto& [label, range] : profiles)
                for (int t = 0; t < cfg.trials; ++t, ++config) {
                    const std::uint64_t s = trial_seed(cfg, t);
                    std::mt19937_64 rng(s);
                    auto waves = random_waves(spec.n(), 8, 1.5, rng);
                    const double inner = std::ldexp(sc.radius, range.first);
                    const double outer = std::ldexp(sc.radius, range.second + 1);
                    SampledField f = cfg.test_function == "zero"
                                         ? zero_field(spec)
                                         : waves_on(spec, waves, [&](const auto& x) {
                                               double rr = norm_of(spec, x);
                                               return rr > inner && rr <= outer;
                                           });
                    SampledField Sf = apply_Sk(masked_outside(f, 2.0 * sc.radius), sc.k, delta);
                    const double lhs = std::sqrt(shell_mean(Sf, -1.0, sc.radius, 2.0).first);
                    double sum = 0.0;
                    for (int j = 1; j <= sc.jmax; ++j) {
                        double avg = shell_mean(f, std::ldexp(sc.radius, j), std::ldexp(sc.radius, j + 1), p0).first;
                        sum += std::ldexp(1.0, -j * M) * std::pow(avg, 1.0 / p0);
                    }
                    const double rhs = std::pow(2.0, -sc.k * rho) * sum;
                    const bool degen = !(rhs > 0.0);
                    const double ratio = degen ? std::nan("") : lhs / rhs;
                    r.rows.push_back({std::to_string(N), std::to_string(config), std::to_string(s),
                                      std::to_string(sc.k), format_double(sc.radius), label, format_double(rho),
                                      std::to_string(M), format_double(lhs), format_double(rhs),
                                      format_double(ratio), degen ? "1" : "0"});
                    if (degen)
                        ++degenerate[N];
                    else
                        ratios[N].push_back(ratio);
                }
        }
        r.extra["configurations"] = config;
    }
    finish(r, Ns, ratios, degenerate);
    return r;
}

Report run_prop42(const ExperimentConfig& cfg) {
    if (cfg.n != 2) throw PreconditionError("local estimates are implemented for n = 2");
    Report r;
    r.name = "prop42";
    r.columns = {"N", "config", "seed", "k", "eps", "profile", "rho", "lhs", "rhs", "ratio", "degenerate"};
    const double delta = to_double(cfg.delta);
    const double p0 = to_double(cfg.p0);
    const double rho = to_double(rho_n(cfg.p0, cfg.n)) + cfg.rho_offset;
    r.extra["rho"] = rho;

    const auto Ns = sorted_grids(cfg);
    const int k_min = min_resolvable_scale(grid_for(cfg, Ns.front()));
    std::vector<std::pair<int, double>> scales;
    for (double eps = 1.0; 3.0 * eps < cfg.L / 2; eps *= 2)
        for (int k = 0; k >= k_min; --k)
            if (std::ldexp(eps, k) <= 1.0) scales.push_back({k, eps});
    if (scales.empty()) throw PreconditionError("no admissible (k, eps) with eps >= 1, 2^k eps <= 1 on this grid");

    std::map<int, std::vector<double>> ratios;
    std::map<int, std::size_t> degenerate;
    for (int N : Ns) {
        const GridSpec spec = grid_for(cfg, N);
        int config = 0;
        for (const auto& [k, eps] : scales)
            for (const std::string profile : {"trig", "bumps"})
                for (int t = 0; t < cfg.trials; ++t, ++config) {
                    const std::uint64_t s = trial_seed(cfg, t);
                    std::mt19937_64 rng(s);
                    SampledField f = zero_field(spec);
                    if (cfg.test_function != "zero") {
                        if (profile == "trig") {
                            auto waves = random_waves(spec.n(), 8, 1.5, rng);
                            f = waves_on(spec, waves, [&](const auto& x) { return norm_of(spec, x) <= 3.0 * eps; });
                        } else {
                            for (int b = 0; b < 4; ++b) {
                                std::array<double, kMaxDim> c{};
                                double rr;
                                do {
                                    for (int d = 0; d < spec.n(); ++d) c[d] = uniform(rng, -2.5 * eps, 2.5 * eps);
                                    rr = norm_of(spec, c);
                                } while (rr > 2.5 * eps);
                                const double amp = gaussian(rng);
                                const double width = 0.5 * eps;
                                for (std::size_t i = 0; i < f.size(); ++i) {
                                    auto x = point(spec, i);
                                    double d2 = 0.0;
                                    for (int d = 0; d < spec.n(); ++d) d2 += (x[d] - c[d]) * (x[d] - c[d]);
                                    double u = d2 / (width * width);
                                    if (u < 1.0) f[i] += amp * std::exp(1.0 - 1.0 / (1.0 - u));
                                }
                            }
                        }
                    }
                    SampledField local = f;
                    for (std::size_t i = 0; i < local.size(); ++i)
                        if (norm_of(spec, point(spec, i)) > 3.0 * eps) local[i] = 0.0;
                    SampledField Sf = apply_Sk(local, k, delta);
                    const double lhs = std::sqrt(shell_mean(Sf, -1.0, 2.0 * eps, 2.0).first);
                    const double avg = shell_mean(local, -1.0, 3.0 * eps, p0).first;
                    const double rhs = std::pow(2.0, -k * rho) * std::pow(avg, 1.0 / p0);
                    const bool degen = !(rhs > 0.0);
                    const double ratio = degen ? std::nan("") : lhs / rhs;
                    r.rows.push_back({std::to_string(N), std::to_string(config), std::to_string(s),
                                      std::to_string(k), format_double(eps), profile, format_double(rho),
                                      format_double(lhs), format_double(rhs), format_double(ratio),
                                      degen ? "1" : "0"});
                    if (degen)
                        ++degenerate[N];
                    else
                        ratios[N].push_back(ratio);
                }
        r.extra["configurations"] = config;
    }
    finish(r, Ns, ratios, degenerate);
    return r;
}

Report run_decay(const ExperimentConfig& cfg) {
    if (cfg.n != 2) throw PreconditionError("kernel decay diagnostics are implemented for n = 2");
    Report r;
    r.name = "decay";
    r.columns = {"k", "L", "radius", "envelope", "range"};
    const double delta = to_double(cfg.delta);
    json per_k = json::array();
    for (int k : cfg.decay_scales) {
        if (k > 0) throw PreconditionError("decay scales must satisfy k <= 0");
        const double scale = std::ldexp(1.0, -k);
        const double L = 64.0 * scale;
        const GridSpec spec(2, L, static_cast<int>(8.0 * L));
        std::vector<double> radii;
        for (double rad = 1.0; rad <= 12.0 * scale; rad *= 1.125) radii.push_back(rad);
        const auto env = kernel_envelope(spec, k, delta, radii);
        std::vector<double> mid_x, mid_y, far_x, far_y;
        for (std::size_t i = 0; i < radii.size(); ++i) {
            std::string range = "other";
            if (radii[i] >= 2.0 && radii[i] <= scale / 4.0) {
                range = "mid";
                mid_x.push_back(std::log(radii[i]));
                mid_y.push_back(std::log(env[i]));
            } else if (radii[i] >= 4.0 * scale) {
                range = "far";
                far_x.push_back(std::log(radii[i]));
                far_y.push_back(std::log(env[i]));
            }
            r.rows.push_back({std::to_string(k), format_double(L), format_double(radii[i]), format_double(env[i]),
                              range});
        }
        auto fit = [](const std::vector<double>& x, const std::vector<double>& y) {
            if (x.size() < 2) return std::nan("");
            double mx = 0, my = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                mx += x[i];
                my += y[i];
            }
            mx /= static_cast<double>(x.size());
            my /= static_cast<double>(x.size());
            double sxy = 0, sxx = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                sxy += (x[i] - mx) * (y[i] - my);
                sxx += (x[i] - mx) * (x[i] - mx);
            }
            return sxy / sxx;
        };
        per_k.push_back({{"k", k},
                         {"L", L},
                         {"mid_slope", fit(mid_x, mid_y)},
                         {"far_slope", fit(far_x, far_y)},
                         {"mid_window", {2.0, scale / 4.0}},
                         {"far_window", {4.0 * scale, 12.0 * scale}}});
    }
    r.extra["scales"] = per_k;
    r.extra["far_target"] = -cfg.N_decay;
    return r;
}

Report run_weights(const ExperimentConfig& cfg) {
    Report r;
    r.name = "weights";
    r.columns = {"N", "weight_id", "trial", "p", "p0", "delta", "ApChar", "RHChar", "alpha", "predicted",
                 "empirical_ratio"};
    const Side side = cfg.p < Rational(2) ? Side::below2 : Side::above2;
    const double delta = to_double(cfg.delta);
    const double p = to_double(cfg.p);
    const auto Ns = sorted_grids(cfg);
    std::map<int, std::vector<double>> ratios;
    std::map<std::string, std::vector<double>> per_weight_max;
    std::vector<std::string> ids;
    std::size_t violations = 0;
    json kl = json::array();
    for (int N : Ns) {
        const GridSpec spec = grid_for(cfg, N);
        auto family = CubeFamily::standard(spec, 10000, cfg.seed);
        std::vector<std::pair<std::string, Weight>> weights;
        weights.emplace_back("const1", constant_weight(spec, 1.0, family));
        if (cfg.weight_preset == "suite") {
            weights.emplace_back("pow_-0.3", power_weight(spec, -0.3, family));
            weights.emplace_back("pow_0.3", power_weight(spec, 0.3, family));
            weights.emplace_back("pow_0.5", power_weight(spec, 0.5, family));
            weights.emplace_back("checker_1_2", checkerboard_weight(spec, 1.0, 2.0, N / 16, family));
            weights.emplace_back("checker_1_4", checkerboard_weight(spec, 1.0, 4.0, N / 32, family));
            weights.emplace_back("lognormal_0.5", lognormal_weight(spec, 0.5, cfg.seed, family));
            weights.emplace_back("lognormal_1", lognormal_weight(spec, 1.0, cfg.seed + 1, family));
        } else if (cfg.weight_preset != "constant") {
            throw PreconditionError("weight_preset must be 'suite' or 'constant'");
        }
        for (const auto& [id, w] : weights) {
            if (N == Ns.front()) ids.push_back(id);
            const PredictedBound b = predicted_bound(w, cfg.p, cfg.p0, cfg.n, side);
            double mx = 0.0;
            for (int t = 0; t < cfg.trials; ++t) {
                const std::uint64_t s = trial_seed(cfg, t);
                std::mt19937_64 rng(s);
                TestFunctionParams prm;
                for (int d = 0; d < cfg.n; ++d) prm.center[d] = uniform(rng, -1.0, 1.0);
                SampledField f = make_test_function(spec, TestKind::random_trig, prm, s);
                const double ratio = weighted_operator_ratio(f, w, p, delta);
                if (ratio > 10.0 * b.value) ++violations;
                mx = std::max(mx, ratio);
                ratios[N].push_back(ratio);
                r.rows.push_back({std::to_string(N), id, std::to_string(t), to_string(cfg.p), to_string(cfg.p0),
                                  to_string(cfg.delta), format_double(b.ap), format_double(b.rh),
                                  to_string(b.alpha), format_double(b.value), format_double(ratio)});
            }
            per_weight_max[id].push_back(mx);
        }
        if (cfg.weight_preset == "suite") {
            KLPreset k = kl_preset(weights[2].second);
            kl.push_back({{"N", N}, {"weight_id", weights[2].first}, {"a2_w3", k.a2_w3},
                          {"ainf_mix", k.ainf_mix}, {"value", k.value}});
        }
    }
    json pw = json::object();
    for (const auto& id : ids)
        pw[id] = {{"max", per_weight_max[id]}, {"slope", log2_slope(Ns, per_weight_max[id])}};
    r.extra["per_weight"] = pw;
    r.extra["violations_slack10"] = violations;
    r.extra["kl_preset"] = kl;
    finish(r, Ns, ratios, {});
    return r;
}

Report run_vector_valued(const ExperimentConfig& cfg) {
    Report r;
    r.name = "vv";
    r.columns = {"N", "trial", "p", "q", "admissible", "input_norm", "output_norm", "ratio"};
    const double delta = to_double(cfg.delta);
    const auto Ns = sorted_grids(cfg);
    std::map<int, std::vector<double>> ratios;
    bool admissible = admissible_vv(cfg.p, cfg.q);
    for (int N : Ns) {
        const GridSpec spec = grid_for(cfg, N);
        for (int t = 0; t < cfg.trials; ++t) {
            const std::uint64_t s = trial_seed(cfg, t);
            std::mt19937_64 rng(s);
            std::vector<SampledField> fs;
            for (int i = 0; i < cfg.functions; ++i) {
                TestFunctionParams prm;
                prm.radius = 0.75;
                for (int d = 0; d < cfg.n; ++d) prm.center[d] = uniform(rng, -2.0, 2.0);
                fs.push_back(make_test_function(spec, TestKind::random_trig, prm, rng()));
            }
            const VectorValuedReport v = vector_valued_norm(fs, cfg.p, cfg.q, delta);
            ratios[N].push_back(v.ratio);
            r.rows.push_back({std::to_string(N), std::to_string(t), to_string(cfg.p), to_string(cfg.q),
                              v.admissible ? "1" : "0", format_double(v.input_norm), format_double(v.output_norm),
                              format_double(v.ratio)});
        }
    }
    r.extra["admissible"] = admissible;
    if (!admissible) r.regime = "inadmissible (p, q)";
    finish(r, Ns, ratios, {});
    return r;
}

}  // namespace brlab
