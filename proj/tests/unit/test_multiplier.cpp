#include "doctest.h"

#include <cmath>
#include <random>

#include "brlab/errors.hpp"
#include "brlab/grid.hpp"
#include "brlab/multiplier.hpp"

using namespace brlab;

namespace {

double rel_err(const SampledField& a, const SampledField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / (den > 0 ? den : 1.0));
}

double max_abs(const SampledField& a) {
    double m = 0.0;
    for (const cplx& v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

SampledField random_field(const GridSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    SampledField f(spec);
    for (auto& v : f.values()) v = {g(rng), g(rng)};
    return f;
}

cplx inner(const SampledField& a, const SampledField& b) {
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
    return s * a.spec().cell_volume();
}

}  // namespace

TEST_CASE("cutoffs") {
    CHECK(smooth_step(0.5) == 1.0);
    CHECK(smooth_step(1.0) == 1.0);
    CHECK(smooth_step(1.02) == 0.0);
    const double h = smooth_step(1.005);
    CHECK(h > 0.0);
    CHECK(h < 1.0);
    double prev = 1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double v = smooth_step(0.999 + 0.012 * i / 1000);
        CHECK(v <= prev);
        prev = v;
    }
    CHECK(chi(0.75) == 1.0);
    CHECK(chi(0.3) == 0.0);
    CHECK(chi(0.51) == 1.0);
    CHECK(chi(1.0) == 1.0);
    CHECK(chi(0.5) == 0.0);
    CHECK(chi(1.011) == 0.0);
    CHECK(chi_tilde(0.0) == 1.0);
    CHECK(chi_tilde(1.0) == 1.0);
    CHECK(chi_tilde(-0.011) == 0.0);
    CHECK(chi_tilde(1.011) == 0.0);
}

TEST_CASE("partition of unity") {
    for (double x : {0.001, 0.3, 0.999}) {
        double s = 0.0;
        for (int k = -40; k <= 0; ++k) s += chi(std::ldexp(x, -k));
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double x = std::ldexp(1.0, -static_cast<int>(rng() % 40)) * (0.5 + 0.5 * ((rng() >> 11) * 0x1.0p-53));
        double s = 0.0;
        for (int k = -40; k <= 0; ++k) s += chi(std::ldexp(x, -k));
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
}

TEST_CASE("Bochner-Riesz on plane waves") {
    GridSpec spec(2, 16.0, 256);
    for (double delta : {0.0, 0.2, 1.0, 2.5}) {
        auto w = plane_wave(spec, {8, 0, 0});
        auto out = apply_bochner_riesz(w, delta);
        CHECK(rel_err(out, scaled(w, std::pow(0.75, delta))) < 1e-12);
        CHECK(max_abs(apply_bochner_riesz(plane_wave(spec, {16, 0, 0}), delta)) < 1e-12);
        CHECK(max_abs(apply_bochner_riesz(plane_wave(spec, {12, 13, 0}), delta)) < 1e-12);
        auto tr = apply_truncated(w, delta, 1.0 / 1.01);
        CHECK(rel_err(tr, out) < 1e-12);
        CHECK(max_abs(apply_truncated(plane_wave(spec, {16, 0, 0}), delta, 3.0)) < 1e-12);
    }
}

TEST_CASE("delta = 0 leaves band-limited fields unchanged") {
    GridSpec spec(2, 16.0, 128);
    SampledField f(spec);
    for (const Index& m : {Index{0, 0, 0}, Index{3, -5, 0}, Index{-10, 7, 0}, Index{15, 0, 0}}) {
        auto w = plane_wave(spec, m);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] += w[i] * cplx(m[0] + 0.5, m[1]);
    }
    CHECK(rel_err(apply_bochner_riesz(f, 0.0), f) < 1e-12);
}

TEST_CASE("truncated operator") {
    GridSpec spec(2, 16.0, 128);
    auto f = random_field(spec, 3);
    for (double eps : {0.1, 0.5, 1.0 / 1.01, 1.0})
        CHECK(rel_err(apply_truncated(f, 0.3, eps), apply_bochner_riesz(f, 0.3)) < 1e-12);
    double sup = 0.0;
    for (double v : *truncated_table(spec, 0.3, 2.0)) sup = std::max(sup, v);
    CHECK(sup <= 1.0);
    CHECK(lp_norm(apply_truncated(f, 0.3, 2.0), 2.0) <= lp_norm(f, 2.0));
    CHECK(rel_err(apply_truncated(f, 0.3, 2.0), apply_bochner_riesz(f, 0.3)) > 1e-3);
}

TEST_CASE("Littlewood-Paley pieces") {
    GridSpec spec(2, 32.0, 256);
    CHECK(min_resolvable_scale(spec) == -2);
    CHECK(min_resolvable_scale(GridSpec(2, 16.0, 256)) == -1);
    const double delta = 0.4;
    // 1 - |xi|^2 = (3/4) 2^k
    auto w = plane_wave(spec, {24, 16, 0});
    CHECK(rel_err(apply_Sk(w, -2, delta), scaled(w, std::pow(0.75, delta))) < 1e-12);
    auto w1 = plane_wave(spec, {24, 8, 0});  // 1 - 640/1024 = 3/8
    CHECK(rel_err(apply_Sk(w1, -1, delta), scaled(w1, std::pow(0.75, delta))) < 1e-12);
    // 1 - |xi|^2 = 2^{k+1}
    CHECK(max_abs(apply_Sk(plane_wave(spec, {16, 16, 0}), -2, delta)) < 1e-12);
    CHECK_THROWS_WITH_AS(apply_Sk(w, -3, delta), "scale below grid resolution", PreconditionError);
    CHECK_THROWS_AS(apply_Sk(w, 1, delta), PreconditionError);
    const double bound = std::pow(1.01, delta);
    for (double v : *piece_table(spec, -2, delta)) CHECK(v <= bound);
}

TEST_CASE("decomposition into pieces") {
    GridSpec spec(2, 32.0, 256);
    const int kmin = min_resolvable_scale(spec);
    const double delta = 0.3;
    auto F = random_field(spec, 9);
    // keep |xi| < 1 - 2^{kmin}
    auto Fh = forward_transform(F);
    const double cut = 1.0 - std::ldexp(1.0, kmin);
    for (std::size_t i = 0; i < spec.size(); ++i)
        if (spec.frequency_norm2(i) >= cut * cut) Fh.coefficients()[i] = 0.0;
    auto f = inverse_transform(Fh);
    auto Bf = apply_bochner_riesz(f, delta);
    SampledField sum(spec);
    for (int k = kmin; k <= 0; ++k) {
        auto s = apply_Sk(f, k, delta);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += std::exp2(k * delta) * s[i];
    }
    SampledField diff(spec);
    for (std::size_t i = 0; i < sum.size(); ++i) diff[i] = sum[i] - Bf[i];
    CHECK(lp_norm(diff, 2.0) / lp_norm(f, 2.0) <= std::exp2(kmin * delta));
}

TEST_CASE("self-adjoint contraction") {
    GridSpec spec(2, 16.0, 128);
    for (int t = 0; t < 5; ++t) {
        auto f = random_field(spec, 20 + t), g = random_field(spec, 40 + t);
        const cplx a = inner(apply_bochner_riesz(f, 0.2), g);
        const cplx b = inner(f, apply_bochner_riesz(g, 0.2));
        CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
        CHECK(lp_norm(apply_bochner_riesz(f, 0.2), 2.0) <= lp_norm(f, 2.0));
    }
}

TEST_CASE("kernel profile") {
    GridSpec spec(2, 64.0, 512);
    const int k = -3;
    auto near = kernel_profile(spec, k, 0.2, {1e-3});
    // integral of s_k over the annulus, by the symbol table quadrature
    double mass = 0.0;
    for (double v : *piece_table(spec, k, 0.2)) mass += v;
    mass /= spec.domain_volume();
    CHECK(near[0] == doctest::Approx(mass).epsilon(1e-5));
    CHECK(near[0] > std::ldexp(1.0, k) / 10);
    CHECK(near[0] < std::ldexp(1.0, k) * 10);
    CHECK_THROWS_AS(kernel_profile(spec, k, 0.2, {40.0}), PreconditionError);
    auto env = kernel_envelope(spec, k, 0.2, {2.0, 4.0});
    auto raw = kernel_profile(spec, k, 0.2, {2.0, 4.0});
    CHECK(env[0] >= raw[0]);
    CHECK(env[1] >= raw[1]);
}

TEST_CASE("kernel profile matches the grid kernel on the axis") {
    GridSpec spec(2, 32.0, 256);
    const int k = -2;
    SampledField delta(spec);
    const std::size_t origin = spec.lattice().flat({128, 128, 0});
    delta[origin] = 1.0 / spec.cell_volume();
    auto K = apply_Sk(delta, k, 0.5);
    std::vector<double> radii;
    for (int j = 1; j < 18; ++j) radii.push_back(j * spec.dx() * 7);
    auto prof = kernel_profile(spec, k, 0.5, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const int j = static_cast<int>(std::lround(radii[i] / spec.dx()));
        const double ax = std::abs(K[spec.lattice().flat({128 + j, 128, 0})]);
        CHECK(prof[i] >= ax * (1 - 1e-9) - 1e-12);
    }
}

TEST_CASE("local application matches the full multiplier") {
    GridSpec spec(2, 16.0, 256);
    TestFunctionParams prm;
    prm.radius = 2.0;
    prm.center = {0.5, -0.5, 0};
    auto f = make_test_function(spec, TestKind::random_trig, prm, 5);
    const IndexBox src{2, {120, 110, 0}, {140, 134, 0}};
    const IndexBox dst{2, {128, 100, 0}, {136, 108, 0}};
    for (double eps : {0.0, 2.0}) {
        SampledField g = restricted(f, src);
        auto full = eps == 0.0 ? apply_bochner_riesz(g, 0.3) : apply_truncated(g, 0.3, eps);
        auto local = apply_local(f, src, dst, spec, 0.3, eps);
        std::size_t t = 0;
        double err = 0.0, scale = 0.0;
        for_each_index(dst, [&](const Index& z) {
            err = std::max(err, std::abs(local[t++] - full[spec.lattice().flat(z)]));
            scale = std::max(scale, std::abs(full[spec.lattice().flat(z)]));
        });
        CHECK(err <= 1e-12 * scale);
    }
    // boxes too wide for a window fall back to the full grid
    const IndexBox wide{2, {0, 0, 0}, {200, 20, 0}};
    auto local = apply_local(f, src, wide, spec, 0.3, 0.0);
    auto full = apply_bochner_riesz(restricted(f, src), 0.3);
    CHECK(std::abs(local[5 * 20 + 3] - full[spec.lattice().flat({5, 3, 0})]) < 1e-14);
}
