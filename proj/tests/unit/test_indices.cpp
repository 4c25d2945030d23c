#include "doctest.h"

#include "brlab/errors.hpp"
#include "brlab/indices.hpp"

using namespace brlab;

namespace {
Rational R(std::int64_t a, std::int64_t b = 1) { return Rational(a, b); }
}  // namespace

TEST_CASE("parsing") {
    CHECK(parse_rational("6/5") == R(6, 5));
    CHECK(parse_rational("0.2") == R(1, 5));
    CHECK(parse_rational("2") == R(2));
    CHECK(parse_rational(" -3/4 ") == R(-3, 4));
    CHECK_THROWS_AS(parse_rational("x"), PreconditionError);
    CHECK_THROWS_AS(parse_rational("1/0"), PreconditionError);
    CHECK(to_string(R(4, 3)) == "4/3");
    CHECK(to_string(R(6, 3)) == "2");
}

TEST_CASE("regression table") {
    CHECK(delta_critical(R(6, 5), 2) == R(1, 6));
    CHECK(delta_critical(R(2), 3) == R(0));
    CHECK(delta_critical(R(6), 2) == R(1, 6));
    CHECK(p1_of(R(6, 5)) == R(4, 3));
    CHECK(p1_of(R(3, 2)) == R(5, 3));
    CHECK(p1_of(R(2)) == R(2));
    CHECK(rho_n(R(6, 5), 2) == R(1, 6));
    CHECK(rho_n(R(2), 2) == R(0));
    CHECK(rho_n(R(1), 2) == R(1, 2));
    CHECK(theta_of(R(4, 3)) == R(1, 3));
    CHECK(delta_bar_2(R(6, 5)) == R(1, 6));
    CHECK(delta_bar_2(R(2)) == R(0));
    CHECK(delta_bar_2(R(1)) == R(3, 4));
    CHECK(alpha_exponent(R(8, 5), R(6, 5), Side::below2) == R(5, 2));
    CHECK(admissible_pair(R(6, 5), R(2)));
    CHECK(!admissible_pair(R(6, 5), R(3)));
    CHECK(admissible_vv(R(2), R(2)));
    CHECK(admissible_vv(R(8, 5), R(5, 2)));
    CHECK(!admissible_vv(R(6, 5), R(6)));
}

TEST_CASE("delta bar chain") {
    auto d = delta_bar(R(6, 5), 2, DeltaTildeProvider::dim2_solved);
    CHECK(d.p1 == R(4, 3));
    CHECK(d.theta == R(1, 3));
    CHECK(d.delta_tilde == R(0));
    CHECK(d.value == R(1, 6));
    CHECK(!d.conjectural);
    CHECK_THROWS_AS(delta_bar(R(6, 5), 3, DeltaTildeProvider::dim2_solved), PreconditionError);
    CHECK(delta_bar(R(6, 5), 3, DeltaTildeProvider::assume_conjecture).conjectural);
    CHECK(delta_bar(R(199, 100), 2, DeltaTildeProvider::dim2_solved).value < R(1, 100));
}

TEST_CASE("identities on a rational grid") {
    for (int num = 100; num <= 200; ++num) {
        const Rational p0(num, 100);
        CHECK(rho_n(p0, 2) == rho_n_piecewise(p0, 2));
        CHECK(rho_n(p0, 3) == rho_n_piecewise(p0, 3));
        for (int n = 2; n <= 3; ++n)
            CHECK(delta_bar(p0, n, DeltaTildeProvider::assume_conjecture).value >= rho_n(p0, n));
        // the two formulas for the n = 2 threshold coincide on all of [1, 2]
        CHECK(delta_bar(p0, 2, DeltaTildeProvider::dim2_solved).value == delta_bar_2(p0));
        if (p0 >= R(6, 5)) CHECK(delta_bar_2(p0) == nu_2(p0));
    }
    // continuity at 6/5
    CHECK(delta_bar_2(R(6, 5) - R(1, 1000000)) - delta_bar_2(R(6, 5)) < R(1, 100000));
}

TEST_CASE("monotonicity and blow-up") {
    Rational prev = delta_critical(R(101, 100), 2);
    for (int num = 102; num <= 200; ++num) {
        const Rational cur = delta_critical(R(num, 100), 2);
        CHECK(cur <= prev);
        prev = cur;
    }
    Rational last = alpha_exponent(R(16, 10), R(6, 5), Side::below2);
    for (int num = 159; num >= 121; --num) {
        const Rational a = alpha_exponent(R(num, 100), R(6, 5), Side::below2);
        if (R(num, 100) < R(8, 5)) CHECK(a >= last);
        last = a;
    }
    CHECK_THROWS_AS(alpha_exponent(R(5, 2), R(6, 5), Side::below2), PreconditionError);
    CHECK(alpha_exponent(R(3), R(6, 5), Side::above2) == R(4, 3));
    CHECK_THROWS_AS(alpha_exponent(R(7), R(6, 5), Side::above2), PreconditionError);
}

TEST_CASE("exponent record") {
    auto r = make_record(2, R(6, 5), R(2), R(8, 5), R(5, 2), DeltaTildeProvider::dim2_solved);
    CHECK(r.delta_bar2 == R(1, 6));
    CHECK(r.alpha_below == R(5, 2));
    CHECK(!r.alpha_above);
    CHECK(r.pair_admissible);
    CHECK(r.vv_admissible);
    CHECK(format_record_csv(r).find("5/2") != std::string::npos);
    CHECK(record_csv_header().rfind("n,p0,q0", 0) == 0);
}
