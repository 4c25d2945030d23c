#include "brlab/maximal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "brlab/errors.hpp"
#include "brlab/fft.hpp"
#include "brlab/kernels.hpp"
#include "brlab/multiplier.hpp"

namespace brlab {

namespace {

using Spectrum = std::shared_ptr<const std::vector<cplx>>;

template <class Key>
class SpectrumCache {
public:
    template <class Fn>
    Spectrum get(const Key& key, Fn&& build) {
        {
            std::lock_guard lock(mutex_);
            if (auto it = items_.find(key); it != items_.end()) return it->second;
        }
        Spectrum s = build();
        std::lock_guard lock(mutex_);
        if (items_.size() >= 32) items_.clear();
        return items_.emplace(key, s).first->second;
    }

private:
    std::mutex mutex_;
    std::map<Key, Spectrum> items_;
};

// DFT of the normalized indicator of the closed ball of radius r at the origin.
Spectrum ball_spectrum(const GridSpec& spec, int r) {
    static SpectrumCache<std::tuple<int, int, int>> cache;
    return cache.get({spec.n(), spec.N(), r}, [&] {
        const auto ball = ball_offsets(spec.n(), r);
        auto s = std::make_shared<std::vector<cplx>>(spec.size());
        const double w = 1.0 / static_cast<double>(ball.size());
        for (const Index& d : ball) (*s)[spec.lattice().flat_wrapped(d)] += w;
        fft::forward(*s, spec.n(), spec.N());
        return s;
    });
}

// Means of P over periodic balls, for centers in a box. Chooses direct
// summation or an FFT disk convolution by cost.
class BallAverager {
public:
    BallAverager(const GridSpec& spec, std::vector<double> P) : spec_(spec), P_(std::move(P)) {}

    std::vector<double> means(int r, const std::vector<Index>& ball, const IndexBox& box) {
        std::vector<double> out(static_cast<std::size_t>(box.count()));
        const double direct = static_cast<double>(box.count()) * static_cast<double>(ball.size());
        const double total = static_cast<double>(spec_.size());
        const double via_fft = 4.0 * total * std::log2(total) + (Phat_ ? 0.0 : 2.0 * total * std::log2(total));
        if (direct <= via_fft) {
            kernels::omp::ball_mean(P_, spec_.lattice(), ball, box, out);
            return out;
        }
        if (!Phat_) {
            Phat_.emplace(P_.begin(), P_.end());
            fft::forward(*Phat_, spec_.n(), spec_.N());
        }
        auto bs = ball_spectrum(spec_, r);
        std::vector<cplx> conv(Phat_->size());
        for (std::size_t i = 0; i < conv.size(); ++i) conv[i] = (*Phat_)[i] * (*bs)[i];
        fft::backward(conv, spec_.n(), spec_.N());
        const double inv = 1.0 / total;
        std::size_t t = 0;
        for_each_index(box, [&](const Index& x) {
            out[t++] = std::max(0.0, conv[spec_.lattice().flat_wrapped(x)].real() * inv);
        });
        return out;
    }

    const std::vector<double>& values() const { return P_; }

private:
    const GridSpec& spec_;
    std::vector<double> P_;
    std::optional<std::vector<cplx>> Phat_;
};

std::vector<double> abs_pow(std::span<const cplx> v, double p) {
    std::vector<double> out(v.size());
    kernels::omp::abs_pow(v, p, out);
    return out;
}

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// Per-axis range of |periodic offset| between a point and a box.
struct AxisReach {
    double min2 = 0.0;
    double max2 = 0.0;
};

AxisReach reach(const Index& c, const IndexBox& S, int N, int n) {
    AxisReach out;
    for (int d = 0; d < n; ++d) {
        int lo = N, hi = 0;
        for (int s = S.lo[d]; s < S.hi[d]; ++s) {
            const int a = std::abs(periodic_delta(s, c[d], N));
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
        out.min2 += static_cast<double>(lo) * lo;
        out.max2 += static_cast<double>(hi) * hi;
    }
    return out;
}

// Largest |periodic offset|^2 between any point of R and any point of S.
double max_reach2(const IndexBox& R, const IndexBox& S, int N, int n) {
    double total = 0.0;
    for (int d = 0; d < n; ++d) {
        int hi = 0;
        for (int x = R.lo[d]; x < R.hi[d]; ++x)
            for (int s = S.lo[d]; s < S.hi[d]; ++s) hi = std::max(hi, std::abs(periodic_delta(s, x, N)));
        total += static_cast<double>(hi) * hi;
    }
    return total;
}

struct Setup {
    std::vector<int> radii;
    IndexBox region;
};

Setup validate(const GridSpec& spec, const MaximalConfig& cfg) {
    if (!(cfg.p0 >= 1.0)) throw PreconditionError("p0 must be >= 1");
    if (!(cfg.q0 >= 2.0 && cfg.q0 <= 6.0)) throw PreconditionError("q0 must lie in [2, 6]");
    if (cfg.y_cap < 1) throw PreconditionError("y_cap must be positive");
    Setup s;
    s.radii = cfg.radii.empty() ? default_radii(spec) : cfg.radii;
    if (s.radii.empty()) throw PreconditionError("radius set is empty");
    for (std::size_t i = 0; i < s.radii.size(); ++i) {
        if (s.radii[i] < 1 || 2 * s.radii[i] + 1 > spec.N())
            throw PreconditionError("ball radius must lie in [1, N/2)");
        if (i > 0 && s.radii[i] <= s.radii[i - 1]) throw PreconditionError("radii must be increasing");
    }
    s.region = cfg.region.value_or(spec.lattice().domain());
    if (s.region.n != spec.n() || !spec.lattice().domain().contains(s.region))
        throw PreconditionError("evaluation region must lie inside the domain");
    return s;
}

SampledField scatter(const GridSpec& spec, const IndexBox& region, const std::vector<double>& local) {
    SampledField out(spec);
    std::size_t t = 0;
    for_each_index(region, [&](const Index& x) { out[spec.lattice().flat(x)] = local[t++]; });
    return out;
}

struct Wanted {
    bool star = false;
    bool starstar = false;
    bool hl = false;
};

struct Result {
    std::vector<double> star, starstar, hl;
};

// Inner sup for one mask center c at radius r, given the unmasked field.
class StarCell {
public:
    StarCell(const SampledField& f, const IndexBox& support, double delta, double q0, int r,
             const std::vector<Index>& ball, const std::vector<Index>& Y, const std::vector<cplx>& Bf,
             std::span<const double> table)
        : f_(f), spec_(f.spec()), S_(support), q0_(q0), r_(r), ball_(ball), Y_(Y), Bf_(Bf), table_(table) {
        const int W = static_cast<int>(std::bit_ceil(static_cast<unsigned>(10 * r + 1)));
        if (W < spec_.N()) {
            W_ = W;
            auto K = truncated_kernel(spec_, delta, r * spec_.dx());
            Lattice wl(spec_.n(), W);
            kspec_.assign(wl.size(), cplx{});
            IndexBox cube{spec_.n(), {}, {}};
            for (int d = 0; d < spec_.n(); ++d) {
                cube.lo[d] = -W / 2;
                cube.hi[d] = W / 2;
            }
            for_each_index(cube, [&](const Index& o) { kspec_[wl.flat_wrapped(o)] = (*K)[spec_.lattice().flat_wrapped(o)]; });
            fft::forward(kspec_, spec_.n(), W);
        }
    }

    // Masked-input value at c when B(c, 3r) partially meets the support.
    double partial(const Index& c) const { return W_ > 0 ? windowed(c) : full(c); }

private:
    double windowed(const Index& c) const {
        const int n = spec_.n(), W = W_;
        const Lattice& lat = spec_.lattice();
        Lattice wl(n, W);
        std::vector<cplx> g(wl.size());
        const int R3 = 3 * r_;
        const double r3sq = 9.0 * r_ * r_;
        IndexBox cube{n, {}, {}};
        for (int d = 0; d < n; ++d) {
            cube.lo[d] = -R3;
            cube.hi[d] = R3 + 1;
        }
        for_each_index(cube, [&](const Index& o) {
            double s = 0.0;
            for (int d = 0; d < n; ++d) s += static_cast<double>(o[d]) * o[d];
            if (s > r3sq) return;
            const Index w{c[0] + o[0], c[1] + o[1], c[2] + o[2]};
            const cplx v = f_[lat.flat_wrapped(w)];
            if (v != cplx{}) g[wl.flat_wrapped({o[0] + W / 2, o[1] + W / 2, o[2] + W / 2})] = v;
        });
        fft::forward(g, n, W);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] *= kspec_[i];
        fft::backward(g, n, W);
        const double inv = 1.0 / static_cast<double>(wl.size());

        IndexBox vbox{n, {}, {}};
        for (int d = 0; d < n; ++d) {
            vbox.lo[d] = c[d] - 2 * r_;
            vbox.hi[d] = c[d] + 2 * r_ + 1;
        }
        std::vector<double> pv(static_cast<std::size_t>(vbox.count()));
        std::size_t t = 0;
        for_each_index(vbox, [&](const Index& z) {
            const cplx local = g[wl.flat_wrapped({z[0] - c[0] + W / 2, z[1] - c[1] + W / 2, z[2] - c[2] + W / 2})] * inv;
            pv[t++] = std::pow(std::abs(Bf_[lat.flat_wrapped(z)] - local), q0_);
        });
        double best = 0.0;
        const double invb = 1.0 / static_cast<double>(ball_.size());
        for (const Index& d : Y_) {
            double s = 0.0;
            for (const Index& b : ball_)
                s += pv[local_offset(vbox, {c[0] + d[0] + b[0], c[1] + d[1] + b[1], c[2] + d[2] + b[2]})];
            best = std::max(best, s * invb);
        }
        return best;
    }

    double full(const Index& c) const {
        const int n = spec_.n(), N = spec_.N();
        const Lattice& lat = spec_.lattice();
        SampledField fm = f_;
        const double r3sq = 9.0 * r_ * r_;
        for_each_index(S_, [&](const Index& s) {
            double q = 0.0;
            for (int d = 0; d < n; ++d) {
                const double a = periodic_delta(s[d], c[d], N);
                q += a * a;
            }
            if (q <= r3sq) fm[lat.flat_wrapped(s)] = 0.0;
        });
        auto Bm = fft::apply_table(fm, table_);
        double best = 0.0;
        const double invb = 1.0 / static_cast<double>(ball_.size());
        for (const Index& d : Y_) {
            double s = 0.0;
            for (const Index& b : ball_) {
                const Index z{c[0] + d[0] + b[0], c[1] + d[1] + b[1], c[2] + d[2] + b[2]};
                s += std::pow(std::abs(Bm[lat.flat_wrapped(z)]), q0_);
            }
            best = std::max(best, s * invb);
        }
        return best;
    }

    const SampledField& f_;
    const GridSpec& spec_;
    IndexBox S_;
    double q0_;
    int r_;
    const std::vector<Index>& ball_;
    const std::vector<Index>& Y_;
    const std::vector<cplx>& Bf_;
    std::span<const double> table_;
    int W_ = 0;
    std::vector<cplx> kspec_;
};

Result evaluate(const SampledField& f, double delta, const MaximalConfig& cfg, Wanted want) {
    const GridSpec& spec = f.spec();
    const Setup setup = validate(spec, cfg);
    const IndexBox& R = setup.region;
    const int n = spec.n(), N = spec.N();
    const std::size_t count = static_cast<std::size_t>(R.count());
    Result res;
    if (want.star) res.star.assign(count, 0.0);
    if (want.starstar) res.starstar.assign(count, 0.0);
    if (want.hl) res.hl.assign(count, 0.0);
    if (!(delta >= 0.0)) throw PreconditionError("delta must be >= 0");
    const IndexBox S = f.support_or_bounds();
    if (S.empty() || f.is_zero()) return res;

    if (want.hl) {
        BallAverager avg(spec, abs_pow(f.values(), cfg.p0));
        const double reach2 = max_reach2(R, S, N, n);
        for (int r : setup.radii) {
            const auto ball = ball_offsets(n, r);
            const auto A = avg.means(r, ball, R);
            for (std::size_t t = 0; t < count; ++t) res.hl[t] = std::max(res.hl[t], A[t]);
            // Every ball already holds the whole support: larger balls only lower the mean.
            if (reach2 <= static_cast<double>(r) * r) break;
        }
        for (double& v : res.hl) v = std::pow(v, 1.0 / cfg.p0);
    }
    if (!want.star && !want.starstar) return res;

    const auto F = fft::dft(f);
    SymbolTable last_table;
    std::vector<cplx> Bf;
    std::optional<BallAverager> avg;
    for (int r : setup.radii) {
        const double eps = r * spec.dx();
        auto table = truncated_table(spec, delta, eps);
        if (table != last_table) {
            Bf = fft::apply_table(spec, F, *table).data();
            avg.emplace(spec, abs_pow(Bf, cfg.q0));
            last_table = table;
        }
        const auto ball = ball_offsets(n, r);
        const auto Y = cfg.full_enumeration ? ball : thin_offsets(ball, n, cfg.y_cap);
        const int h = cfg.full_enumeration ? 1 : std::max(1, r / 2);
        const IndexBox Abox = R.expanded(r + h);
        const auto A = avg->means(r, ball, Abox);

        if (want.starstar) {
            std::vector<double> m(count);
            kernels::omp::offset_max(A, Abox, Y, R, m);
            for (std::size_t t = 0; t < count; ++t) res.starstar[t] = std::max(res.starstar[t], m[t]);
        }
        if (!want.star) continue;

        IndexBox cells{n, {}, {}};
        for (int d = 0; d < n; ++d) {
            cells.lo[d] = floor_div(R.lo[d], h);
            cells.hi[d] = floor_div(R.hi[d] - 1, h) + 1;
        }
        std::vector<Index> reps;
        for_each_index(cells, [&](const Index& q) {
            Index c{};
            for (int d = 0; d < n; ++d) c[d] = q[d] * h + h / 2;
            reps.push_back(c);
        });
        std::vector<double> value(reps.size(), 0.0);
        StarCell cell(f, S, delta, cfg.q0, r, ball, Y, Bf, *table);
        const double r3sq = 9.0 * r * r;
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < reps.size(); ++i) {
            const Index& c = reps[i];
            const AxisReach a = reach(c, S, N, n);
            if (a.max2 <= r3sq) continue;  // mask removes all of f
            if (a.min2 > r3sq) {           // mask misses f entirely
                double best = 0.0;
                for (const Index& d : Y)
                    best = std::max(best, A[local_offset(Abox, {c[0] + d[0], c[1] + d[1], c[2] + d[2]})]);
                value[i] = best;
            } else {
                value[i] = cell.partial(c);
            }
        }
        std::size_t t = 0;
        for_each_index(R, [&](const Index& x) {
            Index q{};
            for (int d = 0; d < n; ++d) q[d] = floor_div(x[d], h);
            res.star[t] = std::max(res.star[t], value[local_offset(cells, q)]);
            ++t;
        });
    }
    const double inv = 1.0 / cfg.q0;
    for (double& v : res.star) v = std::pow(v, inv);
    for (double& v : res.starstar) v = std::pow(v, inv);
    return res;
}

}  // namespace

std::vector<int> default_radii(const GridSpec& spec) {
    std::vector<int> r;
    for (int v = 4; v <= spec.N() / 4; v *= 2) r.push_back(v);
    return r;
}

SampledField hl_maximal(const SampledField& f, const MaximalConfig& cfg) {
    const Setup s = validate(f.spec(), cfg);
    return scatter(f.spec(), s.region, evaluate(f, 0.0, cfg, {false, false, true}).hl);
}

SampledField hl_maximal(const SampledField& f, double p0) {
    MaximalConfig cfg;
    cfg.p0 = p0;
    return hl_maximal(f, cfg);
}

SampledField br_star(const SampledField& f, double delta, const MaximalConfig& cfg) {
    const Setup s = validate(f.spec(), cfg);
    return scatter(f.spec(), s.region, evaluate(f, delta, cfg, {true, false, false}).star);
}

SampledField br_starstar(const SampledField& f, double delta, const MaximalConfig& cfg) {
    const Setup s = validate(f.spec(), cfg);
    return scatter(f.spec(), s.region, evaluate(f, delta, cfg, {false, true, false}).starstar);
}

MaximalSum maximal_sum(const SampledField& f, double delta, const MaximalConfig& cfg) {
    const Setup s = validate(f.spec(), cfg);
    Result r = evaluate(f, delta, cfg, {true, true, true});
    return {scatter(f.spec(), s.region, r.star), scatter(f.spec(), s.region, r.starstar),
            scatter(f.spec(), s.region, r.hl)};
}

}  // namespace brlab
