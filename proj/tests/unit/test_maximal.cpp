#include "doctest.h"

#include <cmath>

#include "brlab/errors.hpp"
#include "brlab/maximal.hpp"
#include "brlab/multiplier.hpp"

using namespace brlab;

namespace {

// Exhaustive inner sup at x: every radius, every y in B(x, r), exact mask.
double star_oracle(const SampledField& f, double delta, const std::vector<int>& radii, const Index& x,
                   double q0, bool masked) {
    const GridSpec& spec = f.spec();
    const int n = spec.n(), N = spec.N();
    double best = 0.0;
    for (int r : radii) {
        SampledField fm = f;
        if (masked) {
            for (std::size_t i = 0; i < fm.size(); ++i) {
                const Index p = spec.lattice().unflat(i);
                double s = 0.0;
                for (int d = 0; d < n; ++d) {
                    const double a = periodic_delta(p[d], x[d], N);
                    s += a * a;
                }
                if (s <= 9.0 * r * r) fm[i] = 0.0;
            }
        }
        auto B = apply_truncated(fm, delta, r * spec.dx());
        for (const Index& d : ball_offsets(n, r)) {
            const Index y{x[0] + d[0], x[1] + d[1], x[2] + d[2]};
            best = std::max(best, ball_average(B, y, r, q0));
        }
    }
    return best;
}

SampledField modulated_bump(const GridSpec& spec, std::array<double, 3> c, double radius, Index m) {
    TestFunctionParams prm;
    prm.center = c;
    prm.radius = radius;
    auto b = make_test_function(spec, TestKind::bump, prm, 0);
    auto w = plane_wave(spec, m);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] *= w[i];
    return b;
}

}  // namespace

TEST_CASE("default radii") {
    auto r = default_radii(GridSpec(2, 16.0, 512));
    CHECK(r == std::vector<int>{4, 8, 16, 32, 64, 128});
}

TEST_CASE("Hardy-Littlewood maximal function") {
    GridSpec spec(2, 16.0, 128);
    auto one = constant_field(spec, 1.0);
    auto M1 = hl_maximal(one, 1.2);
    for (const cplx& v : M1.values()) CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-12));

    const int r = 6;
    SampledField ind(spec);
    for (const Index& d : ball_offsets(2, r)) ind[spec.lattice().flat({64 + d[0], 64 + d[1], 0})] = 1.0;
    ind.set_support(IndexBox{2, {64 - r, 64 - r, 0}, {64 + r + 1, 64 + r + 1, 0}});
    MaximalConfig cfg;
    cfg.p0 = 1.5;
    cfg.region = IndexBox{2, {50, 60, 0}, {80, 70, 0}};
    auto M = hl_maximal(ind, cfg);
    for (const Index& x : {Index{64 + 2 * r, 64, 0}, Index{64, 64 + 2 * r - 6, 0}, Index{70, 61, 0}}) {
        if (!cfg.region->contains(x)) continue;
        double brute = 0.0;
        for (int rr : default_radii(spec)) brute = std::max(brute, ball_average(ind, x, rr, 1.5));
        const double got = M[spec.lattice().flat(x)].real();
        CHECK(got == doctest::Approx(brute).epsilon(1e-12));
        CHECK(got > 0.0);
        CHECK(got <= 1.0 + 1e-12);
    }
    // outside the region the output is zero
    CHECK(M[spec.lattice().flat({10, 10, 0})] == cplx{});
}

TEST_CASE("maximal function pruning keeps the exact sup") {
    GridSpec spec(2, 16.0, 128);
    TestFunctionParams prm;
    prm.radius = 0.4;
    auto f = make_test_function(spec, TestKind::bump, prm, 0);
    MaximalConfig cfg;
    cfg.p0 = 1.2;
    auto M = hl_maximal(f, cfg);
    for (const Index& x : {Index{64, 64, 0}, Index{0, 0, 0}, Index{100, 30, 0}}) {
        double brute = 0.0;
        for (int rr : default_radii(spec)) brute = std::max(brute, ball_average(f, x, rr, 1.2));
        CHECK(M[spec.lattice().flat(x)].real() == doctest::Approx(brute).epsilon(1e-11));
    }
}

TEST_CASE("B* vanishes where the mask swallows the support") {
    GridSpec spec(2, 16.0, 128);
    TestFunctionParams prm;
    prm.radius = 0.3;  // 2.4 grid points
    auto f = make_test_function(spec, TestKind::bump, prm, 0);
    MaximalConfig cfg;
    cfg.region = IndexBox{2, {62, 62, 0}, {67, 67, 0}};
    auto s = br_star(f, 0.3, cfg);
    for_each_index(*cfg.region, [&](const Index& x) { CHECK(s[spec.lattice().flat(x)] == cplx{}); });
    CHECK(br_starstar(zero_field(spec), 0.3, cfg).is_zero());
    CHECK(br_star(zero_field(spec), 0.3, cfg).is_zero());
}

TEST_CASE("B* and B** against exhaustive enumeration in 2D") {
    GridSpec spec(2, 8.0, 64);
    auto f = modulated_bump(spec, {0.5, -0.25, 0}, 1.0, {3, 2, 0});
    MaximalConfig cfg;
    cfg.radii = {2, 4, 8};
    cfg.full_enumeration = true;
    cfg.region = IndexBox{2, {20, 24, 0}, {23, 27, 0}};
    for (double delta : {0.0, 0.4}) {
        auto s = br_star(f, delta, cfg);
        auto ss = br_starstar(f, delta, cfg);
        for_each_index(*cfg.region, [&](const Index& x) {
            const double so = star_oracle(f, delta, cfg.radii, x, 2.0, true);
            const double sso = star_oracle(f, delta, cfg.radii, x, 2.0, false);
            CHECK(s[spec.lattice().flat(x)].real() == doctest::Approx(so).epsilon(1e-9));
            CHECK(ss[spec.lattice().flat(x)].real() == doctest::Approx(sso).epsilon(1e-9));
        });
    }
}

TEST_CASE("B* against exhaustive enumeration on a 64^3 grid") {
    GridSpec spec(3, 8.0, 64);
    auto f = modulated_bump(spec, {0.75, 0.0, -0.5}, 1.0, {2, 0, 3});
    MaximalConfig cfg;
    cfg.radii = {2, 4};
    cfg.full_enumeration = true;
    cfg.q0 = 2.0;
    cfg.region = IndexBox{3, {30, 31, 32}, {32, 32, 33}};
    auto s = br_star(f, 0.3, cfg);
    for_each_index(*cfg.region, [&](const Index& x) {
        const double so = star_oracle(f, 0.3, cfg.radii, x, 2.0, true);
        CHECK(s[spec.lattice().flat(x)].real() == doctest::Approx(so).epsilon(1e-9));
    });
}

TEST_CASE("snapped B* is exact at cell representatives") {
    GridSpec spec(2, 16.0, 128);
    auto f = modulated_bump(spec, {0.5, 0.25, 0}, 1.5, {5, -4, 0});
    MaximalConfig cfg;
    cfg.radii = {8};
    cfg.y_cap = 1 << 20;
    cfg.region = IndexBox{2, {60, 60, 0}, {68, 68, 0}};
    auto s = br_star(f, 0.2, cfg);
    // h = 4: representative of the cell holding 60..63 is 62
    const Index c{62, 66, 0};
    const double so = star_oracle(f, 0.2, {8}, c, 2.0, true);
    CHECK(s[spec.lattice().flat({61, 65, 0})].real() == doctest::Approx(so).epsilon(1e-9));
    CHECK(s[spec.lattice().flat(c)].real() == doctest::Approx(so).epsilon(1e-9));
}

TEST_CASE("homogeneity and refinement") {
    GridSpec spec(2, 16.0, 128);
    auto f = modulated_bump(spec, {0.0, 0.5, 0}, 1.2, {4, 1, 0});
    f.set_support(f.support());
    MaximalConfig cfg;
    cfg.region = IndexBox{2, {56, 60, 0}, {72, 76, 0}};
    cfg.radii = {4, 16};
    auto a = maximal_sum(f, 0.25, cfg);
    auto f2 = scaled(f, 2.0);
    f2.set_support(f.support());
    auto b = maximal_sum(f2, 0.25, cfg);
    auto f3 = scaled(f, cplx(0.0, -3.0));
    f3.set_support(f.support());
    auto c = maximal_sum(f3, 0.25, cfg);
    MaximalConfig finer = cfg;
    finer.radii = {4, 8, 16, 32};
    auto d = maximal_sum(f, 0.25, finer);
    double top = 0.0;
    for (std::size_t i = 0; i < a.star.size(); ++i) top = std::max(top, std::abs(a.star[i]));
    for (std::size_t i = 0; i < a.star.size(); ++i) {
        CHECK(b.star[i] == 2.0 * a.star[i]);
        CHECK(b.starstar[i] == 2.0 * a.starstar[i]);
        CHECK(std::abs(c.star[i] - 3.0 * a.star[i]) <= 1e-12 * top);
        CHECK(d.star[i].real() >= a.star[i].real());
        CHECK(d.starstar[i].real() >= a.starstar[i].real());
        CHECK(d.hl[i].real() >= a.hl[i].real());
    }
}

TEST_CASE("B** dominates B up to small-ball slack") {
    GridSpec spec(2, 16.0, 128);
    auto f = modulated_bump(spec, {0.0, 0.0, 0}, 1.5, {6, 3, 0});
    MaximalConfig cfg;
    cfg.region = IndexBox{2, {40, 40, 0}, {90, 90, 0}};
    auto ss = br_starstar(f, 0.3, cfg);
    auto B = apply_bochner_riesz(f, 0.3);
    const int rmin = default_radii(spec).front();
    const auto ball = ball_offsets(2, rmin);
    for_each_index(*cfg.region, [&](const Index& x) {
        double lo = INFINITY;
        for (const Index& d : ball)
            lo = std::min(lo, std::abs(B[spec.lattice().flat_wrapped({x[0] + d[0], x[1] + d[1], 0})]));
        const double here = std::abs(B[spec.lattice().flat(x)]);
        CHECK(here <= ss[spec.lattice().flat(x)].real() + (here - lo) + 1e-12);
    });
}

TEST_CASE("maximal config validation") {
    GridSpec spec(2, 16.0, 128);
    auto f = constant_field(spec, 1.0);
    MaximalConfig cfg;
    cfg.q0 = 7.0;
    CHECK_THROWS_AS(br_starstar(f, 0.2, cfg), PreconditionError);
    cfg.q0 = 2.0;
    cfg.radii = {8, 4};
    CHECK_THROWS_AS(hl_maximal(f, cfg), PreconditionError);
    cfg.radii = {};
    cfg.region = IndexBox{2, {-1, 0, 0}, {4, 4, 0}};
    CHECK_THROWS_AS(hl_maximal(f, cfg), PreconditionError);
}
