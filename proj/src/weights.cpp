#include "brlab/weights.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>

#include "brlab/errors.hpp"
#include "brlab/multiplier.hpp"

namespace brlab {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

IndexBox cube_box(int n, const CubeFamily::Cube& c) {
    IndexBox b{n, {}, {}};
    for (int d = 0; d < n; ++d) {
        b.lo[d] = c.lo[d];
        b.hi[d] = c.lo[d] + c.side;
    }
    return b;
}

// Summed-area table over (N+1)^n corners, long double accumulation.
class SummedArea {
public:
    SummedArea(int n, int N, const std::vector<double>& v) : n_(n), M_(N + 1) {
        std::size_t total = 1;
        for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(M_);
        s_.assign(total, 0.0L);
        Lattice lat(n, N);
        for (std::size_t i = 0; i < v.size(); ++i) {
            Index p = lat.unflat(i);
            for (int d = 0; d < n; ++d) ++p[d];
            s_[flat(p)] = v[i];
        }
        for (int axis = 0; axis < n; ++axis) {
            std::size_t stride = 1;
            for (int d = n - 1; d > axis; --d) stride *= static_cast<std::size_t>(M_);
            for (std::size_t i = 0; i < total; ++i) {
                std::size_t coord = (i / stride) % static_cast<std::size_t>(M_);
                if (coord > 0) s_[i] += s_[i - stride];
            }
        }
    }

    long double sum(const IndexBox& b) const {
        long double acc = 0.0L;
        for (int mask = 0; mask < (1 << n_); ++mask) {
            Index p{};
            int flips = 0;
            for (int d = 0; d < n_; ++d) {
                if (mask & (1 << d)) {
                    p[d] = b.lo[d];
                    ++flips;
                } else {
                    p[d] = b.hi[d];
                }
            }
            acc += (flips % 2 ? -1.0L : 1.0L) * s_[flat(p)];
        }
        return acc;
    }

private:
    std::size_t flat(const Index& p) const {
        std::size_t f = 0;
        for (int d = 0; d < n_; ++d) f = f * M_ + static_cast<std::size_t>(p[d]);
        return f;
    }
    int n_;
    int M_;
    std::vector<long double> s_;
};

// Min and max over cubes of side 2^j at every anchor, for all j.
class CubeExtrema {
public:
    CubeExtrema(int n, int N, const std::vector<double>& v) : n_(n), N_(N), lat_(n, N) {
        int levels = std::countr_zero(static_cast<unsigned>(N)) + 1;
        lo_.resize(levels);
        hi_.resize(levels);
        lo_[0] = v;
        hi_[0] = v;
        for (int j = 1; j < levels; ++j) {
            int h = 1 << (j - 1);
            lo_[j].assign(v.size(), 0.0);
            hi_[j].assign(v.size(), 0.0);
            for (std::size_t i = 0; i < v.size(); ++i) {
                Index p = lat_.unflat(i);
                bool inside = true;
                for (int d = 0; d < n_; ++d)
                    if (p[d] + 2 * h > N_) inside = false;
                if (!inside) continue;
                double mn = kInfinity, mx = -kInfinity;
                for (int mask = 0; mask < (1 << n_); ++mask) {
                    Index q = p;
                    for (int d = 0; d < n_; ++d)
                        if (mask & (1 << d)) q[d] += h;
                    std::size_t f = lat_.flat(q);
                    mn = std::min(mn, lo_[j - 1][f]);
                    mx = std::max(mx, hi_[j - 1][f]);
                }
                lo_[j][i] = mn;
                hi_[j][i] = mx;
            }
        }
    }

    std::pair<double, double> query(const CubeFamily::Cube& c) const {
        int j = std::bit_width(static_cast<unsigned>(c.side)) - 1;
        int h = 1 << j;
        double mn = kInfinity, mx = -kInfinity;
        for (int mask = 0; mask < (1 << n_); ++mask) {
            Index q = c.lo;
            for (int d = 0; d < n_; ++d)
                if (mask & (1 << d)) q[d] += c.side - h;
            std::size_t f = lat_.flat(q);
            mn = std::min(mn, lo_[j][f]);
            mx = std::max(mx, hi_[j][f]);
        }
        return {mn, mx};
    }

private:
    int n_;
    int N_;
    Lattice lat_;
    std::vector<std::vector<double>> lo_;
    std::vector<std::vector<double>> hi_;
};

void validate_exponent(double p, const char* what) {
    if (!(p > 1.0) || !std::isfinite(p)) throw PreconditionError(std::string(what) + " must be a finite exponent > 1");
}

}  // namespace

std::shared_ptr<const CubeFamily> CubeFamily::standard(const GridSpec& spec, std::size_t random_cubes,
                                                       std::uint64_t seed) {
    const int n = spec.n();
    const int N = spec.N();
    std::vector<Cube> cubes;
    for (int side = N; side >= 1; side /= 2) {
        IndexBox anchors{n, {}, {}};
        for (int d = 0; d < n; ++d) anchors.hi[d] = N / side;
        for_each_index(anchors, [&](const Index& a) {
            Cube c;
            for (int d = 0; d < n; ++d) c.lo[d] = a[d] * side;
            c.side = side;
            cubes.push_back(c);
        });
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < random_cubes; ++i) {
        Cube c;
        c.side = uniform_int(rng, 1, N);
        for (int d = 0; d < n; ++d) c.lo[d] = uniform_int(rng, 0, N - c.side);
        cubes.push_back(c);
    }
    return std::shared_ptr<const CubeFamily>(new CubeFamily(spec, std::move(cubes)));
}

std::shared_ptr<const CubeFamily> CubeFamily::from_cubes(const GridSpec& spec, std::vector<Cube> cubes) {
    for (const auto& c : cubes) {
        if (c.side < 1) throw PreconditionError("cube side must be positive");
        for (int d = 0; d < spec.n(); ++d)
            if (c.lo[d] < 0 || c.lo[d] + c.side > spec.N()) throw PreconditionError("cube outside the domain");
    }
    return std::shared_ptr<const CubeFamily>(new CubeFamily(spec, std::move(cubes)));
}

struct Weight::Store {
    std::mutex mu;
    std::vector<double> base;
    std::map<double, std::shared_ptr<const std::vector<double>>> averages;  // keyed by exponent of b
    std::shared_ptr<const std::vector<double>> base_min, base_max;
    std::shared_ptr<const std::vector<char>> constant;
    std::map<double, std::shared_ptr<const std::vector<double>>> minima, maxima;  // keyed by e

    void ensure_extrema(const GridSpec& spec, const CubeFamily& family) {
        if (base_min) return;
        CubeExtrema ext(spec.n(), spec.N(), base);
        const auto& cubes = family.cubes();
        auto mn = std::make_shared<std::vector<double>>(cubes.size());
        auto mx = std::make_shared<std::vector<double>>(cubes.size());
        auto cst = std::make_shared<std::vector<char>>(cubes.size());
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < cubes.size(); ++i) {
            auto [a, b] = ext.query(cubes[i]);
            (*mn)[i] = a;
            (*mx)[i] = b;
            (*cst)[i] = a == b;
        }
        base_min = mn;
        base_max = mx;
        constant = cst;
    }
};

Weight::Weight(const SampledField& base, FamilyPtr family) : family_(std::move(family)) {
    if (!family_) throw PreconditionError("weight requires a cube family");
    if (!(family_->spec() == base.spec())) throw PreconditionError("cube family grid differs from weight grid");
    auto store = std::make_shared<Store>();
    store->base.resize(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        const cplx v = base[i];
        if (v.imag() != 0.0 || !(v.real() > 0.0) || !std::isfinite(v.real()))
            throw PreconditionError("weight must be finite, real and strictly positive");
        store->base[i] = v.real();
    }
    base_ = std::make_shared<const SampledField>(base);
    store_ = store;
}

Weight::Weight(std::shared_ptr<const SampledField> base, FamilyPtr family, double e, std::shared_ptr<Store> store)
    : base_(std::move(base)), family_(std::move(family)), e_(e), store_(std::move(store)) {}

Weight Weight::power(double s) const {
    if (!std::isfinite(s) || s == 0.0) throw PreconditionError("weight power must be finite and nonzero");
    return Weight(base_, family_, e_ * s, store_);
}

std::vector<double> Weight::values() const {
    std::vector<double> v(store_->base.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(store_->base[i], e_);
    return v;
}

SampledField Weight::field() const {
    std::vector<double> v = values();
    std::vector<cplx> c(v.begin(), v.end());
    return SampledField(spec(), std::move(c));
}

const std::vector<double>& Weight::averages(double a) const {
    const double x = e_ * a;
    std::lock_guard lock(store_->mu);
    auto it = store_->averages.find(x);
    if (it != store_->averages.end()) return *it->second;
    const GridSpec& sp = spec();
    std::vector<double> v(store_->base.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(store_->base[i], x);
    SummedArea sat(sp.n(), sp.N(), v);
    const auto& cubes = family_->cubes();
    auto out = std::make_shared<std::vector<double>>(cubes.size());
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < cubes.size(); ++i) {
        IndexBox b = cube_box(sp.n(), cubes[i]);
        (*out)[i] = static_cast<double>(sat.sum(b) / static_cast<long double>(b.count()));
    }
    store_->averages.emplace(x, out);
    return *out;
}

const std::vector<double>& Weight::minima() const {
    std::lock_guard lock(store_->mu);
    store_->ensure_extrema(spec(), *family_);
    auto it = store_->minima.find(e_);
    if (it != store_->minima.end()) return *it->second;
    const auto& src = e_ > 0 ? *store_->base_min : *store_->base_max;
    auto out = std::make_shared<std::vector<double>>(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) (*out)[i] = std::pow(src[i], e_);
    store_->minima.emplace(e_, out);
    return *out;
}

const std::vector<double>& Weight::maxima() const {
    std::lock_guard lock(store_->mu);
    store_->ensure_extrema(spec(), *family_);
    auto it = store_->maxima.find(e_);
    if (it != store_->maxima.end()) return *it->second;
    const auto& src = e_ > 0 ? *store_->base_max : *store_->base_min;
    auto out = std::make_shared<std::vector<double>>(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) (*out)[i] = std::pow(src[i], e_);
    store_->maxima.emplace(e_, out);
    return *out;
}

const std::vector<char>& Weight::constant_cubes() const {
    std::lock_guard lock(store_->mu);
    store_->ensure_extrema(spec(), *family_);
    return *store_->constant;
}

namespace {

template <class Fn>
double family_max(const Weight& w, Fn&& per_cube) {
    const auto& cst = w.constant_cubes();
    double m = 1.0;
#pragma omp parallel for reduction(max : m) schedule(static)
    for (std::size_t i = 0; i < cst.size(); ++i) {
        double v = cst[i] ? 1.0 : per_cube(i);
        m = std::max(m, v);
    }
    return m;
}

}  // namespace

double ap_characteristic(const Weight& w, double p) {
    if (!(p > 1.0)) throw PreconditionError("A_p characteristic needs p > 1 (use a1_characteristic)");
    validate_exponent(p, "p");
    const auto& a = w.averages(1.0);
    const auto& b = w.averages(-1.0 / (p - 1.0));
    return family_max(w, [&](std::size_t i) { return a[i] * std::pow(b[i], p - 1.0); });
}

double a1_characteristic(const Weight& w) {
    const auto& a = w.averages(1.0);
    const auto& mn = w.minima();
    return family_max(w, [&](std::size_t i) { return a[i] / mn[i]; });
}

double rh_inf_characteristic(const Weight& w) {
    const auto& a = w.averages(1.0);
    const auto& mx = w.maxima();
    return family_max(w, [&](std::size_t i) { return mx[i] / a[i]; });
}

double rh_characteristic(const Weight& w, double s) {
    validate_exponent(s, "s");
    const auto& a = w.averages(1.0);
    const auto& as = w.averages(s);
    return family_max(w, [&](std::size_t i) { return std::pow(as[i], 1.0 / s) / a[i]; });
}

ProductCheck check_ap_rh_product(const Weight& w, double q, double s) {
    if (!(q >= 1.0) || !std::isfinite(q)) throw PreconditionError("q must be a finite exponent >= 1");
    validate_exponent(s, "s");
    const auto& cst = w.constant_cubes();
    const auto& a = w.averages(1.0);
    const auto& as = w.averages(s);
    const std::vector<double>* dual = nullptr;
    const std::vector<double>* mn = nullptr;
    if (q > 1.0)
        dual = &w.averages(-1.0 / (q - 1.0));
    else
        mn = &w.minima();

    double max_x = 1.0, max_y = 1.0, max_xy = 1.0;
    for (std::size_t i = 0; i < cst.size(); ++i) {
        if (cst[i]) continue;
        double x = dual ? a[i] * std::pow((*dual)[i], q - 1.0) : a[i] / (*mn)[i];
        double y = std::pow(as[i], 1.0 / s) / a[i];
        max_x = std::max(max_x, x);
        max_y = std::max(max_y, y);
        max_xy = std::max(max_xy, x * y);
    }
    ProductCheck r;
    r.lhs = std::pow(max_xy, s);
    r.rhs = std::pow(max_x * max_y, s);
    Weight ws = w.power(s);
    r.direct = q > 1.0 ? ap_characteristic(ws, 1.0 + s * (q - 1.0)) : a1_characteristic(ws);
    r.holds = r.lhs <= r.rhs;
    return r;
}

PredictedBound predicted_bound(const Weight& w, const Rational& p, const Rational& p0, int n, Side side) {
    if (n != w.spec().n()) throw PreconditionError("dimension differs from the weight grid");
    PredictedBound r;
    r.alpha = alpha_exponent(p, p0, side);
    if (side == Side::below2) {
        r.ap = ap_characteristic(w, to_double(p / p0));
        r.rh = rh_characteristic(w, to_double(dual_exponent(Rational(2) / p)));
    } else {
        r.ap = ap_characteristic(w, to_double(p / 2));
        r.rh = rh_characteristic(w, to_double(dual_exponent(dual_exponent(p0) / 2)));
    }
    r.value = std::pow(r.ap * r.rh, to_double(r.alpha));
    return r;
}

double weighted_operator_ratio(const SampledField& f, const Weight& w, double p, double delta) {
    if (!(p >= 1.0)) throw PreconditionError("p must be >= 1");
    if (!(f.spec() == w.spec())) throw PreconditionError("field and weight grids differ");
    std::vector<double> wv = w.values();
    double den = lp_norm(f, p, wv);
    if (!(den > 0.0)) throw PreconditionError("zero denominator: f vanishes in L^p(w)");
    return lp_norm(apply_bochner_riesz(f, delta), p, wv) / den;
}

namespace {

double mixed_norm(const std::vector<SampledField>& hs, double p, double q) {
    const GridSpec& spec = hs.front().spec();
    std::vector<cplx> F(spec.size());
    for (std::size_t i = 0; i < F.size(); ++i) {
        double acc = 0.0;
        for (const auto& h : hs) acc += std::pow(std::abs(h[i]), q);
        F[i] = std::pow(acc, 1.0 / q);
    }
    return lp_norm(SampledField(spec, std::move(F)), p);
}

}  // namespace

VectorValuedReport vector_valued_norm(const std::vector<SampledField>& fs, const Rational& p, const Rational& q,
                                      double delta) {
    const Rational lo(6, 5), hi(6);
    if (p < lo || p > hi || q < lo || q > hi) throw PreconditionError("(p, q) must lie in [6/5, 6]^2");
    if (fs.empty()) throw PreconditionError("vector-valued norm needs at least one function");
    for (const auto& f : fs)
        if (!(f.spec() == fs.front().spec())) throw PreconditionError("functions live on different grids");
    std::vector<SampledField> out;
    out.reserve(fs.size());
    for (const auto& f : fs) out.push_back(apply_bochner_riesz(f, delta));
    VectorValuedReport r;
    const double pd = to_double(p), qd = to_double(q);
    r.input_norm = mixed_norm(fs, pd, qd);
    r.output_norm = mixed_norm(out, pd, qd);
    r.ratio = r.input_norm > 0.0 ? r.output_norm / r.input_norm : 0.0;
    r.admissible = admissible_vv(p, q);
    return r;
}

Weight constant_weight(const GridSpec& spec, double c, FamilyPtr family) {
    return Weight(constant_field(spec, c), std::move(family));
}

Weight power_weight(const GridSpec& spec, double a, FamilyPtr family) {
    SampledField f(spec);
    const Lattice& lat = spec.lattice();
    for (std::size_t i = 0; i < f.size(); ++i) {
        Index p = lat.unflat(i);
        double r2 = 0.0;
        for (int d = 0; d < spec.n(); ++d) r2 += spec.coordinate(p[d]) * spec.coordinate(p[d]);
        f[i] = std::pow(std::max(std::sqrt(r2), spec.dx()), a);
    }
    return Weight(f, std::move(family));
}

Weight checkerboard_weight(const GridSpec& spec, double lo, double hi, int cell, FamilyPtr family) {
    if (cell < 1) throw PreconditionError("checkerboard cell must be positive");
    SampledField f(spec);
    const Lattice& lat = spec.lattice();
    for (std::size_t i = 0; i < f.size(); ++i) {
        Index p = lat.unflat(i);
        int parity = 0;
        for (int d = 0; d < spec.n(); ++d) parity += p[d] / cell;
        f[i] = parity % 2 ? hi : lo;
    }
    return Weight(f, std::move(family));
}

Weight lognormal_weight(const GridSpec& spec, double amplitude, std::uint64_t seed, FamilyPtr family) {
    constexpr int kWaves = 8;
    std::mt19937_64 rng(seed);
    std::array<std::array<double, kMaxDim>, kWaves> xi{};
    std::array<double, kWaves> phase{};
    for (int m = 0; m < kWaves; ++m) {
        for (int d = 0; d < spec.n(); ++d) xi[m][d] = (2.0 * uniform01(rng) - 1.0) * 0.5;
        phase[m] = 2.0 * std::numbers::pi * uniform01(rng);
    }
    const Lattice& lat = spec.lattice();
    std::vector<double> g(spec.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        Index p = lat.unflat(i);
        double acc = 0.0;
        for (int m = 0; m < kWaves; ++m) {
            double t = phase[m];
            for (int d = 0; d < spec.n(); ++d) t += 2.0 * std::numbers::pi * xi[m][d] * spec.coordinate(p[d]);
            acc += std::cos(t);
        }
        g[i] = acc;
        peak = std::max(peak, std::abs(acc));
    }
    SampledField f(spec);
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::exp(amplitude * g[i] / peak);
    return Weight(f, std::move(family));
}

KLPreset kl_preset(const Weight& w) {
    KLPreset r;
    r.a2_w3 = ap_characteristic(w.power(3.0), 2.0);
    std::vector<double> v3 = w.power(3.0).values();
    SampledField mix(w.spec());
    for (std::size_t i = 0; i < v3.size(); ++i) mix[i] = v3[i] + 1.0 / v3[i];
    r.ainf_mix = ap_characteristic(Weight(mix, w.family()), 1024.0);
    r.value = std::pow(r.a2_w3, 1.0 / 6.0) * std::sqrt(r.ainf_mix);
    return r;
}

}  // namespace brlab
