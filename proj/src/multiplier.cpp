#include "brlab/multiplier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <tuple>

#include "brlab/errors.hpp"
#include "brlab/fft.hpp"

namespace brlab {

namespace {

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

constexpr double kWidth = 0.01;

}  // namespace

double smooth_step(double x) {
    if (x <= 1.0) return 1.0;
    if (x >= 1.0 + kWidth) return 0.0;
    const double a = psi(1.0 + kWidth - x);
    const double b = psi(x - 1.0);
    return a / (a + b);
}

double chi(double x) { return smooth_step(x) - smooth_step(2.0 * x); }

double chi_tilde(double t) { return smooth_step(t) * smooth_step(1.0 - t); }

double bochner_riesz_symbol(double t, double delta) {
    if (t <= 0.0) return 0.0;
    return delta == 0.0 ? 1.0 : std::pow(t, delta);
}

double truncated_symbol(double t, double delta, double epsilon) {
    return bochner_riesz_symbol(t, delta) * chi_tilde(epsilon * t);
}

double piece_symbol(double t, int k, double delta) {
    if (t <= 0.0) return 0.0;
    const double c = chi(std::ldexp(t, -k));
    if (c == 0.0) return 0.0;
    return std::exp2(-k * delta) * bochner_riesz_symbol(t, delta) * c;
}

int min_resolvable_scale(const GridSpec& spec) {
    return static_cast<int>(std::ceil(std::log2(8.0 / spec.L()) - 1e-12));
}

// ---------------------------------------------------------------- symbol cache

namespace {

enum class Kind { bochner_riesz, truncated, piece };

using Key = std::tuple<int, int, double, Kind, double, double>;

class SymbolCache {
public:
    static SymbolCache& instance() {
        static SymbolCache cache;
        return cache;
    }

    template <class Fn>
    SymbolTable get(const Key& key, Fn&& build) {
        {
            std::shared_lock lock(mutex_);
            if (auto it = tables_.find(key); it != tables_.end()) return it->second;
        }
        SymbolTable table = build();
        std::unique_lock lock(mutex_);
        if (tables_.size() >= kMaxEntries) tables_.clear();
        return tables_.emplace(key, table).first->second;
    }

    void clear() {
        std::unique_lock lock(mutex_);
        tables_.clear();
    }

private:
    static constexpr std::size_t kMaxEntries = 48;
    std::shared_mutex mutex_;
    std::map<Key, SymbolTable> tables_;
};

// Evaluates sym(1 - |xi|^2) on the frequency lattice.
template <class Sym>
SymbolTable build_table(const GridSpec& spec, Sym&& sym) {
    const int n = spec.n(), N = spec.N();
    std::vector<double> xi2(N);
    for (int j = 0; j < N; ++j) {
        const double xi = spec.frequency_index(j) / spec.L();
        xi2[j] = xi * xi;
    }
    auto table = std::make_shared<std::vector<double>>(spec.size());
    std::size_t i = 0;
    for_each_index(spec.lattice().domain(), [&](const Index& p) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) s += xi2[p[d]];
        (*table)[i++] = sym(1.0 - s);
    });
    return table;
}

}  // namespace

SymbolTable bochner_riesz_table(const GridSpec& spec, double delta) {
    if (!(delta >= 0.0)) throw PreconditionError("delta must be >= 0");
    Key key{spec.n(), spec.N(), spec.L(), Kind::bochner_riesz, delta, 0.0};
    return SymbolCache::instance().get(key, [&] {
        return build_table(spec, [&](double t) { return bochner_riesz_symbol(t, delta); });
    });
}

SymbolTable truncated_table(const GridSpec& spec, double delta, double epsilon) {
    if (!(delta >= 0.0)) throw PreconditionError("delta must be >= 0");
    if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be > 0");
    // For epsilon <= 1 the cutoff is inactive on [0, 1]: the symbol is B^delta's.
    if (epsilon <= 1.0) return bochner_riesz_table(spec, delta);
    Key key{spec.n(), spec.N(), spec.L(), Kind::truncated, delta, epsilon};
    return SymbolCache::instance().get(key, [&] {
        return build_table(spec, [&](double t) { return truncated_symbol(t, delta, epsilon); });
    });
}

SymbolTable piece_table(const GridSpec& spec, int k, double delta) {
    if (!(delta >= 0.0)) throw PreconditionError("delta must be >= 0");
    if (k > 0) throw PreconditionError("scale index k must be <= 0");
    if (k < min_resolvable_scale(spec)) throw PreconditionError("scale below grid resolution");
    Key key{spec.n(), spec.N(), spec.L(), Kind::piece, delta, static_cast<double>(k)};
    return SymbolCache::instance().get(key, [&] {
        return build_table(spec, [&](double t) { return piece_symbol(t, k, delta); });
    });
}

void clear_symbol_cache() { SymbolCache::instance().clear(); }

KernelTable truncated_kernel(const GridSpec& spec, double delta, double epsilon) {
    static std::mutex mutex;
    static std::map<std::tuple<int, int, double, double, double>, KernelTable> cache;
    const double key_eps = epsilon <= 1.0 ? 0.0 : epsilon;
    const auto key = std::make_tuple(spec.n(), spec.N(), spec.L(), delta, key_eps);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto table = key_eps == 0.0 ? bochner_riesz_table(spec, delta) : truncated_table(spec, delta, key_eps);
    auto k = std::make_shared<std::vector<cplx>>(table->begin(), table->end());
    fft::backward(*k, spec.n(), spec.N());
    const double inv = 1.0 / static_cast<double>(spec.size());
    for (auto& v : *k) v *= inv;
    std::lock_guard lock(mutex);
    if (cache.size() >= 32) cache.clear();
    return cache.emplace(key, k).first->second;
}

std::vector<cplx> apply_local(const SampledField& f, const IndexBox& src, const IndexBox& dst,
                              const GridSpec& spec, double delta, double epsilon) {
    const int n = spec.n();
    const Lattice& lat = spec.lattice();
    std::vector<cplx> out(static_cast<std::size_t>(dst.count()));
    if (src.empty() || dst.empty()) return out;
    // Offsets z - w span hull extents; the window must hold them without aliasing.
    const IndexBox hull = src.hull(dst);
    int extent = 0;
    for (int d = 0; d < n; ++d) extent = std::max(extent, hull.hi[d] - hull.lo[d]);
    const int W = static_cast<int>(std::bit_ceil(static_cast<unsigned>(2 * extent + 1)));
    if (W >= spec.N()) {
        SampledField g(spec);
        for_each_index(src, [&](const Index& w) { g[lat.flat_wrapped(w)] = f[lat.flat_wrapped(w)]; });
        auto table = epsilon <= 1.0 ? bochner_riesz_table(spec, delta) : truncated_table(spec, delta, epsilon);
        auto B = fft::apply_table(g, *table);
        std::size_t t = 0;
        for_each_index(dst, [&](const Index& z) { out[t++] = B[lat.flat_wrapped(z)]; });
        return out;
    }
    auto K = truncated_kernel(spec, delta, epsilon);
    Lattice wl(n, W);
    std::vector<cplx> k(wl.size()), g(wl.size());
    IndexBox cube{n, {}, {}};
    for (int d = 0; d < n; ++d) {
        cube.lo[d] = -W / 2;
        cube.hi[d] = W / 2;
    }
    for_each_index(cube, [&](const Index& o) { k[wl.flat_wrapped(o)] = (*K)[lat.flat_wrapped(o)]; });
    for_each_index(src, [&](const Index& w) {
        g[wl.flat_wrapped({w[0] - hull.lo[0], w[1] - hull.lo[1], w[2] - hull.lo[2]})] = f[lat.flat_wrapped(w)];
    });
    fft::forward(k, n, W);
    fft::forward(g, n, W);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= k[i];
    fft::backward(g, n, W);
    const double inv = 1.0 / static_cast<double>(wl.size());
    std::size_t t = 0;
    for_each_index(dst, [&](const Index& z) {
        out[t++] = g[wl.flat_wrapped({z[0] - hull.lo[0], z[1] - hull.lo[1], z[2] - hull.lo[2]})] * inv;
    });
    return out;
}

SampledField apply_bochner_riesz(const SampledField& f, double delta) {
    return fft::apply_table(f, *bochner_riesz_table(f.spec(), delta));
}

SampledField apply_truncated(const SampledField& f, double delta, double epsilon) {
    return fft::apply_table(f, *truncated_table(f.spec(), delta, epsilon));
}

SampledField apply_Sk(const SampledField& f, int k, double delta) {
    return fft::apply_table(f, *piece_table(f.spec(), k, delta));
}

// ---------------------------------------------------------------- kernel profile

namespace {

// Symbol mass projected onto a line: axis uses m1, diagonal uses m1 + m2.
struct Projection {
    int offset = 0;
    std::vector<double> axis;
    std::vector<double> diagonal;
};

Projection project_piece(double L, int k, double delta) {
    const int M = static_cast<int>(std::ceil(L)) + 1;
    Projection P;
    P.offset = 2 * M;
    P.axis.assign(4 * M + 1, 0.0);
    P.diagonal.assign(4 * M + 1, 0.0);
    // Annulus 1 - 1.01 * 2^k <= |xi|^2 <= 1 - 2^{k-1}, in lattice units.
    const double L2 = L * L;
    const double lo2 = std::max(0.0, (1.0 - (1.0 + kWidth) * std::ldexp(1.0, k)) * L2);
    const double hi2 = (1.0 - std::ldexp(1.0, k - 1)) * L2;
    for (int m1 = -M; m1 <= M; ++m1) {
        const double r1 = static_cast<double>(m1) * m1;
        if (r1 > hi2) continue;
        const int b_hi = static_cast<int>(std::floor(std::sqrt(hi2 - r1))) + 1;
        const int b_lo = r1 >= lo2 ? 0 : std::max(0, static_cast<int>(std::floor(std::sqrt(lo2 - r1))) - 1);
        for (int a = b_lo; a <= b_hi; ++a) {
            const double t = 1.0 - (r1 + static_cast<double>(a) * a) / L2;
            const double s = piece_symbol(t, k, delta);
            if (s == 0.0) continue;
            for (int m2 : {a, -a}) {
                P.axis[P.offset + m1] += s;
                P.diagonal[P.offset + m1 + m2] += s;
                if (a == 0) break;
            }
        }
    }
    return P;
}

double evaluate(const Projection& P, double L, double r) {
    const double w = 2.0 * std::numbers::pi / L;
    const double c = r * w;
    const double cd = r / std::numbers::sqrt2 * w;
    double ax = 0.0, dg = 0.0;
    for (std::size_t i = 0; i < P.axis.size(); ++i) {
        const double m = static_cast<double>(static_cast<int>(i) - P.offset);
        if (P.axis[i] != 0.0) ax += P.axis[i] * std::cos(c * m);
        if (P.diagonal[i] != 0.0) dg += P.diagonal[i] * std::cos(cd * m);
    }
    return std::max(std::abs(ax), std::abs(dg)) / (L * L);
}

void check_profile_args(const GridSpec& spec, int k, const std::vector<double>& radii, double pad) {
    if (spec.n() != 2) throw PreconditionError("kernel_profile is implemented for n = 2");
    if (k > 0) throw PreconditionError("scale index k must be <= 0");
    if (k < min_resolvable_scale(spec)) throw PreconditionError("scale below grid resolution");
    for (double r : radii)
        if (!(r > 0.0) || r + pad >= spec.L() / 2)
            throw PreconditionError("kernel radius must lie in (0, L/2): periodization corrupts tails");
}

}  // namespace

std::vector<double> kernel_profile(const GridSpec& spec, int k, double delta,
                                   const std::vector<double>& radii) {
    check_profile_args(spec, k, radii, 0.0);
    const Projection P = project_piece(spec.L(), k, delta);
    std::vector<double> out(radii.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < radii.size(); ++i) out[i] = evaluate(P, spec.L(), radii[i]);
    return out;
}

std::vector<double> kernel_envelope(const GridSpec& spec, int k, double delta,
                                    const std::vector<double>& radii, double halfwidth, int samples) {
    check_profile_args(spec, k, radii, halfwidth);
    const Projection P = project_piece(spec.L(), k, delta);
    const int S = std::max(samples, 2);
    std::vector<double> out(radii.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double m = 0.0;
        for (int s = 0; s < S; ++s) {
            const double r = std::max(radii[i] - halfwidth + 2.0 * halfwidth * s / (S - 1), 1e-9);
            m = std::max(m, evaluate(P, spec.L(), r));
        }
        out[i] = m;
    }
    return out;
}

}  // namespace brlab
