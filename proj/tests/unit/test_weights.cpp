#include "doctest.h"

#include <cmath>
#include <numbers>

#include "brlab/errors.hpp"
#include "brlab/multiplier.hpp"
#include "brlab/weights.hpp"

using namespace brlab;

namespace {

const GridSpec kSmall(2, 4.0, 32);

FamilyPtr small_family() { return CubeFamily::standard(kSmall, 300, 11); }

std::vector<double> brute_values(const Weight& w, const CubeFamily::Cube& c) {
    std::vector<double> all = w.values();
    std::vector<double> out;
    for (int i = c.lo[0]; i < c.lo[0] + c.side; ++i)
        for (int j = c.lo[1]; j < c.lo[1] + c.side; ++j) out.push_back(all[static_cast<std::size_t>(i) * 32 + j]);
    return out;
}

double mean_pow(const std::vector<double>& v, double a) {
    double s = 0.0;
    for (double x : v) s += std::pow(x, a);
    return s / static_cast<double>(v.size());
}

double brute_ap(const Weight& w, double p) {
    double m = 1.0;
    for (const auto& c : w.family()->cubes()) {
        auto v = brute_values(w, c);
        m = std::max(m, mean_pow(v, 1.0) * std::pow(mean_pow(v, -1.0 / (p - 1.0)), p - 1.0));
    }
    return m;
}

double brute_a1(const Weight& w) {
    double m = 1.0;
    for (const auto& c : w.family()->cubes()) {
        auto v = brute_values(w, c);
        m = std::max(m, mean_pow(v, 1.0) / *std::min_element(v.begin(), v.end()));
    }
    return m;
}

double brute_rh(const Weight& w, double s) {
    double m = 1.0;
    for (const auto& c : w.family()->cubes()) {
        auto v = brute_values(w, c);
        m = std::max(m, std::pow(mean_pow(v, s), 1.0 / s) / mean_pow(v, 1.0));
    }
    return m;
}

}  // namespace

TEST_CASE("cube family holds every dyadic cube plus the random sample") {
    auto fam = small_family();
    std::size_t dyadic = 0;
    for (int side = 32; side >= 1; side /= 2) dyadic += static_cast<std::size_t>(32 / side) * (32 / side);
    CHECK(fam->cubes().size() == dyadic + 300);
    for (const auto& c : fam->cubes())
        for (int d = 0; d < 2; ++d) {
            CHECK(c.lo[d] >= 0);
            CHECK(c.lo[d] + c.side <= 32);
        }
    auto again = CubeFamily::standard(kSmall, 300, 11);
    CHECK(again->cubes().back().lo == fam->cubes().back().lo);
}

TEST_CASE("weight rejects nonpositive or complex values") {
    auto fam = small_family();
    CHECK_THROWS_AS(Weight(constant_field(kSmall, 0.0), fam), PreconditionError);
    CHECK_THROWS_AS(Weight(constant_field(kSmall, cplx(1.0, 1e-3)), fam), PreconditionError);
    CHECK_THROWS_AS(Weight(constant_field(GridSpec(2, 4.0, 16), 1.0), fam), PreconditionError);
}

TEST_CASE("constant weights have unit characteristics exactly") {
    auto fam = small_family();
    for (double c : {1.0, 0.3, 7.25}) {
        Weight w = constant_weight(kSmall, c, fam);
        CHECK(ap_characteristic(w, 2.0) == 1.0);
        CHECK(ap_characteristic(w, 1.3) == 1.0);
        CHECK(a1_characteristic(w) == 1.0);
        CHECK(rh_inf_characteristic(w) == 1.0);
        CHECK(rh_characteristic(w, 3.0) == 1.0);
        auto r = check_ap_rh_product(w, 2.0, 2.0);
        CHECK(r.lhs == 1.0);
        CHECK(r.rhs == 1.0);
        CHECK(r.holds);
    }
    CHECK_THROWS_AS(ap_characteristic(constant_weight(kSmall, 1.0, fam), 1.0), PreconditionError);
}

TEST_CASE("power weight A_2 matches brute force over the family") {
    Weight w = power_weight(kSmall, 1.0, small_family());
    double v = ap_characteristic(w, 2.0);
    CHECK(v >= 1.0);
    CHECK(v == doctest::Approx(brute_ap(w, 2.0)).epsilon(1e-12));
    CHECK(ap_characteristic(w, 1.5) == doctest::Approx(brute_ap(w, 1.5)).epsilon(1e-12));
}

TEST_CASE("checkerboard A_1 and RH_2 match brute force") {
    Weight w = checkerboard_weight(kSmall, 1.0, 2.0, 3, small_family());
    CHECK(a1_characteristic(w) == doctest::Approx(brute_a1(w)).epsilon(1e-12));
    CHECK(rh_characteristic(w, 2.0) == doctest::Approx(brute_rh(w, 2.0)).epsilon(1e-12));
    CHECK(rh_characteristic(w, 2.0) >= 1.0);
    CHECK(a1_characteristic(w) <= 2.0);
}

TEST_CASE("reverse Hoelder characteristic grows with s") {
    Weight w = power_weight(kSmall, -0.7, small_family());
    double prev = 1.0;
    for (double s : {1.1, 1.5, 2.0, 4.0, 8.0}) {
        double v = rh_characteristic(w, s);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(rh_inf_characteristic(w) >= prev);
}

TEST_CASE("A_p characteristic is nonincreasing in p") {
    Weight w = power_weight(kSmall, 1.0, small_family());
    double prev = kInfinity;
    for (double p : {1.2, 1.5, 2.0, 3.0, 6.0}) {
        double v = ap_characteristic(w, p);
        CHECK(v <= prev * (1 + 1e-14));
        prev = v;
    }
    CHECK(a1_characteristic(w) >= ap_characteristic(w, 1.2));
}

TEST_CASE("A_2 duality is exact on the shared family") {
    for (double a : {0.5, -1.0, 1.3}) {
        Weight w = power_weight(kSmall, a, small_family());
        CHECK(ap_characteristic(w, 2.0) == ap_characteristic(w.reciprocal(), 2.0));
    }
    Weight c = checkerboard_weight(kSmall, 1.0, 5.0, 2, small_family());
    CHECK(ap_characteristic(c, 2.0) == ap_characteristic(c.reciprocal(), 2.0));
}

TEST_CASE("RH_inf of w is bounded by A_1 of 1/w") {
    for (double a : {0.5, -1.0}) {
        Weight w = power_weight(kSmall, a, small_family());
        double rh = rh_inf_characteristic(w);
        double a1 = a1_characteristic(w.reciprocal());
        CHECK(rh <= a1 * (1 + 1e-14));
        double brute = 1.0;
        for (const auto& c : w.family()->cubes()) {
            auto v = brute_values(w, c);
            brute = std::max(brute, *std::max_element(v.begin(), v.end()) / mean_pow(v, 1.0));
        }
        CHECK(rh == doctest::Approx(brute).epsilon(1e-12));
    }
    Weight c = constant_weight(kSmall, 2.0, small_family());
    CHECK(rh_inf_characteristic(c) == a1_characteristic(c.reciprocal()));
}

TEST_CASE("product inequality holds per cube") {
    auto fam = small_family();
    Weight cb = checkerboard_weight(kSmall, 1.0, 2.0, 4, fam);
    auto r = check_ap_rh_product(cb, 2.0, 2.0);
    CHECK(r.holds);
    CHECK(r.lhs >= 1.0);
    CHECK(r.lhs == doctest::Approx(r.direct).epsilon(1e-12));

    Weight pw = power_weight(kSmall, 0.5, fam);
    auto q = check_ap_rh_product(pw, 2.0, 1.5);
    CHECK(q.holds);
    CHECK(q.lhs == doctest::Approx(q.direct).epsilon(1e-12));

    auto one = check_ap_rh_product(pw, 1.0, 3.0);
    CHECK(one.holds);
    CHECK(one.lhs == doctest::Approx(one.direct).epsilon(1e-12));
}

TEST_CASE("predicted bound") {
    auto fam = small_family();
    Weight one = constant_weight(kSmall, 1.0, fam);
    auto b = predicted_bound(one, Rational(8, 5), Rational(6, 5), 2, Side::below2);
    CHECK(b.alpha == Rational(5, 2));
    CHECK(b.value == 1.0);
    CHECK_THROWS_AS(predicted_bound(one, Rational(1, 1), Rational(6, 5), 2, Side::below2), PreconditionError);
    CHECK_THROWS_AS(predicted_bound(one, Rational(8, 5), Rational(6, 5), 3, Side::below2), PreconditionError);

    Weight w = power_weight(kSmall, 0.3, fam);
    Rational prev(0);
    for (int k : {1, 2, 5, 10, 20, 50}) {
        Rational p = Rational(6, 5) + Rational(1, 5 * k);
        auto v = predicted_bound(w, p, Rational(6, 5), 2, Side::below2);
        CHECK(v.alpha > prev);
        CHECK(std::isfinite(v.value));
        prev = v.alpha;
    }
    auto hi = predicted_bound(w, Rational(3), Rational(6, 5), 2, Side::above2);
    CHECK(hi.alpha == alpha_exponent(Rational(3), Rational(6, 5), Side::above2));
    CHECK(hi.value >= 1.0);
}

TEST_CASE("weighted operator ratio") {
    const GridSpec spec(2, 8.0, 64);
    auto fam = CubeFamily::standard(spec, 100, 3);
    SampledField f = plane_wave(spec, {4, 0, 0});
    Weight one = constant_weight(spec, 1.0, fam);
    const double delta = 0.3;
    CHECK(weighted_operator_ratio(f, one, 2.0, delta) == doctest::Approx(std::pow(0.75, delta)).epsilon(1e-12));

    TestFunctionParams prm;
    prm.radius = 1.0;
    SampledField g = make_test_function(spec, TestKind::random_trig, prm, 5);
    Weight w = power_weight(spec, 0.4, fam);
    Weight cw(scaled(w.field(), 3.5), fam);
    CHECK(weighted_operator_ratio(g, w, 1.6, delta) ==
          doctest::Approx(weighted_operator_ratio(g, cw, 1.6, delta)).epsilon(1e-12));
    CHECK_THROWS_AS(weighted_operator_ratio(zero_field(spec), w, 2.0, delta), PreconditionError);
}

TEST_CASE("vector-valued norm") {
    const GridSpec spec(2, 8.0, 64);
    TestFunctionParams prm;
    prm.radius = 1.0;
    std::vector<SampledField> fs;
    for (int i = 0; i < 3; ++i) {
        prm.center = {-1.0 + i, 0.5, 0.0};
        fs.push_back(make_test_function(spec, TestKind::random_trig, prm, 40 + i));
    }
    const double delta = 0.2;

    auto single = vector_valued_norm({fs[0]}, Rational(8, 5), Rational(5, 2), delta);
    CHECK(single.ratio == doctest::Approx(lp_norm(apply_bochner_riesz(fs[0], delta), 1.6) / lp_norm(fs[0], 1.6))
                              .epsilon(1e-12));
    CHECK(single.admissible);

    auto same = vector_valued_norm(fs, Rational(2), Rational(2), delta);
    double acc = 0.0;
    for (const auto& f : fs) acc += std::pow(lp_norm(f, 2.0), 2.0);
    CHECK(same.input_norm == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));

    CHECK_FALSE(vector_valued_norm(fs, Rational(6, 5), Rational(6), delta).admissible);
    CHECK_THROWS_AS(vector_valued_norm(fs, Rational(1), Rational(2), delta), PreconditionError);
}

TEST_CASE("KL preset is finite and at least one") {
    Weight w = power_weight(kSmall, 0.2, small_family());
    auto r = kl_preset(w);
    CHECK(std::isfinite(r.value));
    CHECK(r.a2_w3 >= 1.0);
    CHECK(r.ainf_mix >= 1.0);
    CHECK(r.value == doctest::Approx(std::pow(r.a2_w3, 1.0 / 6.0) * std::sqrt(r.ainf_mix)));
}
