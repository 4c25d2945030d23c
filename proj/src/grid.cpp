#include "brlab/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "brlab/errors.hpp"
#include "brlab/fft.hpp"
#include "brlab/kernels.hpp"

namespace brlab {

// ---------------------------------------------------------------- geometry

std::vector<Index> ball_offsets(int n, double radius) {
    const int R = static_cast<int>(std::floor(radius + 1e-9));
    const double r2 = radius * radius * (1.0 + 1e-12) + 1e-12;
    std::vector<Index> out;
    IndexBox cube{n, {}, {}};
    for (int d = 0; d < n; ++d) {
        cube.lo[d] = -R;
        cube.hi[d] = R + 1;
    }
    for_each_index(cube, [&](const Index& p) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) s += static_cast<double>(p[d]) * p[d];
        if (s <= r2) out.push_back(p);
    });
    return out;
}

std::vector<Index> thin_offsets(const std::vector<Index>& offsets, int n, std::size_t cap) {
    if (offsets.size() <= cap) return offsets;
    for (int t = 2;; ++t) {
        std::vector<Index> kept;
        for (const Index& p : offsets) {
            bool on = true;
            for (int d = 0; d < n; ++d) on = on && (p[d] % t == 0);
            if (on) kept.push_back(p);
        }
        if (kept.size() <= cap) return kept;
    }
}

// ---------------------------------------------------------------- GridSpec

GridSpec::GridSpec(int n, double L, int N) : n_(n), L_(L), N_(N), lattice_(n < 1 ? 1 : n, N < 1 ? 1 : N) {
    if (n < 1 || n > kMaxDim) throw PreconditionError("grid dimension must be 1, 2 or 3");
    if (N < 8 || !std::has_single_bit(static_cast<unsigned>(N)))
        throw PreconditionError("grid N must be a power of two >= 8");
    if (!(L > 0.0) || !std::isfinite(L)) throw PreconditionError("grid L must be positive");
    if (!(N / (2.0 * L) > 2.0))
        throw PreconditionError("Nyquist frequency N/(2L) must exceed 2 to resolve the unit ball");
}

double GridSpec::cell_volume() const { return std::pow(dx(), n_); }
double GridSpec::domain_volume() const { return std::pow(L_, n_); }

double GridSpec::frequency_norm2(std::size_t flat) const {
    Index j = lattice_.unflat(flat);
    double s = 0.0;
    for (int d = 0; d < n_; ++d) {
        double xi = frequency_index(j[d]) / L_;
        s += xi * xi;
    }
    return s;
}

// ---------------------------------------------------------------- fields

SampledField::SampledField(GridSpec spec) : spec_(spec), values_(spec.size()) {}

SampledField::SampledField(GridSpec spec, std::vector<cplx> values)
    : spec_(spec), values_(std::move(values)) {
    if (values_.size() != spec_.size()) throw PreconditionError("field size does not match grid");
}

IndexBox SampledField::support_or_bounds() const {
    if (support_) return *support_;
    const Lattice& lat = spec_.lattice();
    IndexBox b{spec_.n(), {}, {}};
    bool any = false;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] == cplx{}) continue;
        Index p = lat.unflat(i);
        if (!any) {
            for (int d = 0; d < spec_.n(); ++d) {
                b.lo[d] = p[d];
                b.hi[d] = p[d] + 1;
            }
            any = true;
        } else {
            for (int d = 0; d < spec_.n(); ++d) {
                b.lo[d] = std::min(b.lo[d], p[d]);
                b.hi[d] = std::max(b.hi[d], p[d] + 1);
            }
        }
    }
    return b;  // empty when the field is identically zero
}

bool SampledField::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](const cplx& v) { return v == cplx{}; });
}

bool SampledField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

SpectralField::SpectralField(GridSpec spec, std::vector<cplx> coefficients)
    : spec_(spec), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != spec_.size()) throw PreconditionError("spectrum size does not match grid");
}

namespace {

// (-1)^{sum m_d}; parity of the storage index equals parity of the signed frequency.
double checkerboard_sign(const Lattice& lat, std::size_t flat) {
    Index j = lat.unflat(flat);
    int s = 0;
    for (int d = 0; d < lat.n(); ++d) s += j[d];
    return (s & 1) ? -1.0 : 1.0;
}

}  // namespace

SpectralField forward_transform(const SampledField& f) {
    const GridSpec& spec = f.spec();
    auto F = fft::dft(f);
    const double scale = spec.cell_volume();
    for (std::size_t i = 0; i < F.size(); ++i) F[i] *= scale * checkerboard_sign(spec.lattice(), i);
    return SpectralField(spec, std::move(F));
}

SampledField inverse_transform(const SpectralField& fhat) {
    const GridSpec& spec = fhat.spec();
    std::vector<cplx> data(fhat.coefficients().begin(), fhat.coefficients().end());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= checkerboard_sign(spec.lattice(), i);
    fft::backward(data, spec.n(), spec.N());
    const double scale = 1.0 / spec.domain_volume();
    for (auto& v : data) v *= scale;
    return SampledField(spec, std::move(data));
}

// ---------------------------------------------------------------- boxes, averages, norms

double PhysicalBox::volume() const {
    double v = 1.0;
    for (int d = 0; d < n; ++d) v *= std::max(0.0, hi[d] - lo[d]);
    return v;
}

IndexBox to_index_box(const GridSpec& spec, const PhysicalBox& box) {
    IndexBox b{spec.n(), {}, {}};
    for (int d = 0; d < spec.n(); ++d) {
        const double tlo = (box.lo[d] / spec.L() + 0.5) * spec.N();
        const double thi = (box.hi[d] / spec.L() + 0.5) * spec.N();
        b.lo[d] = static_cast<int>(std::ceil(tlo - 1e-9));
        b.hi[d] = static_cast<int>(std::ceil(thi - 1e-9));
    }
    return b;
}

PhysicalBox to_physical_box(const GridSpec& spec, const IndexBox& box) {
    PhysicalBox p{spec.n(), {}, {}};
    const double h = spec.dx() / 2;
    for (int d = 0; d < spec.n(); ++d) {
        p.lo[d] = spec.coordinate(box.lo[d]) - h;
        p.hi[d] = spec.coordinate(box.hi[d]) - h;
    }
    return p;
}

namespace {

double sum_abs_pow(const SampledField& f, const IndexBox& inside, double p) {
    const Lattice& lat = f.spec().lattice();
    double s = 0.0;
    for_each_index(inside, [&](const Index& x) { s += std::pow(std::abs(f[lat.flat(x)]), p); });
    return s;
}

}  // namespace

double cube_average(const SampledField& f, const IndexBox& box, double p) {
    if (!(p >= 1.0)) throw PreconditionError("cube_average requires p >= 1");
    if (box.empty()) throw PreconditionError("cube_average requires a box of positive volume");
    IndexBox inside = box.intersect(f.spec().lattice().domain());
    if (inside.empty()) throw PreconditionError("empty intersection");
    const double s = sum_abs_pow(f, inside, p);
    return std::pow(s / static_cast<double>(box.count()), 1.0 / p);
}

double cube_average(const SampledField& f, const PhysicalBox& box, double p) {
    if (!(p >= 1.0)) throw PreconditionError("cube_average requires p >= 1");
    if (!(box.volume() > 0.0)) throw PreconditionError("cube_average requires a box of positive volume");
    IndexBox inside = to_index_box(f.spec(), box).intersect(f.spec().lattice().domain());
    if (inside.empty()) throw PreconditionError("empty intersection");
    const double s = sum_abs_pow(f, inside, p) * f.spec().cell_volume();
    return std::pow(s / box.volume(), 1.0 / p);
}

double ball_average(const SampledField& f, const Index& center, double radius_grid, double p) {
    if (!(p >= 1.0)) throw PreconditionError("ball_average requires p >= 1");
    const Lattice& lat = f.spec().lattice();
    const auto ball = ball_offsets(f.spec().n(), radius_grid);
    double s = 0.0;
    for (const Index& d : ball) {
        Index y{center[0] + d[0], center[1] + d[1], center[2] + d[2]};
        s += std::pow(std::abs(f[lat.flat_wrapped(y)]), p);
    }
    return std::pow(s / static_cast<double>(ball.size()), 1.0 / p);
}

double lp_norm(const SampledField& f, double p, std::span<const double> w) {
    if (!(p >= 1.0)) throw PreconditionError("lp_norm requires p >= 1");
    if (!w.empty() && w.size() != f.size()) throw PreconditionError("weight size does not match field");
    if (p == kInfinity) {
        double m = 0.0;
        for (const cplx& v : f.values()) m = std::max(m, std::abs(v));
        return m;
    }
    std::vector<double> terms(f.size());
    kernels::omp::abs_pow(f.values(), p, terms);
    if (!w.empty())
        for (std::size_t i = 0; i < terms.size(); ++i) terms[i] *= w[i];
    const double s = kernels::omp::blocked_sum(terms) * f.spec().cell_volume();
    return std::pow(s, 1.0 / p);
}

// ---------------------------------------------------------------- constructors

SampledField zero_field(const GridSpec& spec) {
    SampledField f(spec);
    f.set_support(IndexBox{spec.n(), {}, {}});
    return f;
}

SampledField constant_field(const GridSpec& spec, cplx c) {
    return SampledField(spec, std::vector<cplx>(spec.size(), c));
}

SampledField plane_wave(const GridSpec& spec, const Index& m) {
    SampledField f(spec);
    const Lattice& lat = spec.lattice();
    for (std::size_t i = 0; i < f.size(); ++i) {
        Index j = lat.unflat(i);
        // x.xi = sum (j/N - 1/2) m; reduce the integer part exactly first.
        double phase = 0.0;
        for (int d = 0; d < spec.n(); ++d) {
            long long jm = static_cast<long long>(j[d]) * m[d];
            long long r = jm % spec.N();
            phase += static_cast<double>(r) / spec.N() - 0.5 * (m[d] & 1 ? 1.0 : 0.0);
        }
        f[i] = std::polar(1.0, 2.0 * std::numbers::pi * phase);
    }
    return f;
}

SampledField indicator(const GridSpec& spec, const IndexBox& box) {
    SampledField f(spec);
    IndexBox inside = box.intersect(spec.lattice().domain());
    for_each_index(inside, [&](const Index& x) { f[spec.lattice().flat(x)] = 1.0; });
    f.set_support(inside);
    return f;
}

SampledField restricted(const SampledField& f, const IndexBox& box) {
    const GridSpec& spec = f.spec();
    IndexBox inside = box.intersect(spec.lattice().domain());
    SampledField out(spec);
    for_each_index(inside, [&](const Index& x) {
        auto i = spec.lattice().flat(x);
        out[i] = f[i];
    });
    if (f.support()) inside = inside.intersect(*f.support());
    out.set_support(inside);
    return out;
}

SampledField scaled(const SampledField& f, cplx c) {
    SampledField out = f;
    for (auto& v : out.values()) v *= c;
    return out;
}

// ---------------------------------------------------------------- test functions

namespace {

double mollifier(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// Smooth 1 -> 0 transition on [a, b].
double smooth_drop(double t, double a, double b) {
    if (t <= a) return 1.0;
    if (t >= b) return 0.0;
    const double u = (t - a) / (b - a);
    const double p = mollifier(1.0 - u);
    const double q = mollifier(u);
    return p / (p + q);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double standard_normal(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

SampledField make_test_function(const GridSpec& spec, TestKind kind, const TestFunctionParams& params,
                                std::uint64_t seed) {
    const int n = spec.n();
    const double r = params.radius;
    if (!(r > 0.0)) throw PreconditionError("test function radius must be positive");
    const double reach = kind == TestKind::gaussian ? 3.5 * r : r;
    for (int d = 0; d < n; ++d) {
        if (params.center[d] - reach < -spec.L() / 4 - 1e-12 || params.center[d] + reach > spec.L() / 4 + 1e-12) {
            std::ostringstream msg;
            msg << "requested support exceeds the central quarter [-" << spec.L() / 4 << ", " << spec.L() / 4 << "]";
            throw PreconditionError(msg.str());
        }
    }

    std::vector<std::array<double, kMaxDim>> freqs;
    std::vector<cplx> amps;
    if (kind == TestKind::random_trig) {
        std::mt19937_64 rng(seed);
        const int waves = std::max(1, params.waves);
        for (int w = 0; w < waves; ++w) {
            std::array<double, kMaxDim> xi{};
            for (;;) {
                double s = 0.0;
                for (int d = 0; d < n; ++d) {
                    xi[d] = (2.0 * uniform01(rng) - 1.0) * params.max_frequency;
                    s += xi[d] * xi[d];
                }
                if (s <= params.max_frequency * params.max_frequency) break;
            }
            freqs.push_back(xi);
            const double re = standard_normal(rng), im = standard_normal(rng);
            amps.emplace_back(re / std::sqrt(2.0 * waves), im / std::sqrt(2.0 * waves));
        }
    }

    SampledField f(spec);
    const Lattice& lat = spec.lattice();
    for (std::size_t i = 0; i < f.size(); ++i) {
        Index j = lat.unflat(i);
        std::array<double, kMaxDim> x{};
        double rr = 0.0;
        for (int d = 0; d < n; ++d) {
            x[d] = spec.coordinate(j[d]);
            const double u = x[d] - params.center[d];
            rr += u * u;
        }
        cplx v{};
        switch (kind) {
            case TestKind::gaussian:
                v = std::exp(-std::numbers::pi * rr / (r * r));
                break;
            case TestKind::bump: {
                const double s = rr / (r * r);
                v = s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0;
                break;
            }
            case TestKind::indicator_smooth: {
                const double tau = std::clamp(params.transition, 1e-6, r);
                double prod = 1.0;
                for (int d = 0; d < n; ++d) prod *= smooth_drop(std::abs(x[d] - params.center[d]), r - tau, r);
                v = prod;
                break;
            }
            case TestKind::random_trig: {
                const double s = rr / (r * r);
                if (s >= 1.0) break;
                const double window = std::exp(1.0 - 1.0 / (1.0 - s));
                cplx acc{};
                for (std::size_t w = 0; w < freqs.size(); ++w) {
                    double ph = 0.0;
                    for (int d = 0; d < n; ++d) ph += x[d] * freqs[w][d];
                    acc += amps[w] * std::polar(1.0, 2.0 * std::numbers::pi * ph);
                }
                v = window * acc;
                break;
            }
        }
        f[i] = v;
    }
    if (kind != TestKind::gaussian) {
        PhysicalBox pb{n, {}, {}};
        for (int d = 0; d < n; ++d) {
            pb.lo[d] = params.center[d] - r;
            pb.hi[d] = params.center[d] + r;
        }
        // Closed box: include a grid point sitting exactly on the upper face.
        IndexBox b = to_index_box(spec, pb);
        for (int d = 0; d < n; ++d) ++b.hi[d];
        b = b.intersect(lat.domain());
        f.set_support(b);
        // Zero anything the closed formulas left outside (round-off at the faces).
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!b.contains(lat.unflat(i))) f[i] = 0.0;
    }
    return f;
}

}  // namespace brlab
