#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <boost/rational.hpp>

namespace brlab {

using Rational = boost::rational<std::int64_t>;

// Accepts "a/b", integers and finite decimals ("0.2" -> 1/5).
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);

// max{n |1/p - 1/2| - 1/2, 0}, p in (1, inf).
Rational delta_critical(const Rational& p, int n);
// 2 (3/2 - 1/p0).
Rational p1_of(const Rational& p0);
// max{n (1/p0 - 1/2) - 1/2, (n-1)/2 (1/p0 - 1/2)}.
Rational rho_n(const Rational& p0, int n);
// Same value via the Tomas-Stein split at 2(n+1)/(n+3).
Rational rho_n_piecewise(const Rational& p0, int n);
// 1 - p1/2.
Rational theta_of(const Rational& p1);

enum class DeltaTildeProvider { dim2_solved, assume_conjecture };

struct DeltaBar {
    Rational p1;
    Rational theta;
    Rational delta_tilde;   // delta-tilde(p1)
    Rational value;         // delta-tilde(p1) + (n-1)/2 (1/p0 - 1/2)
    Rational max_form;      // max{n(1/p0-1/2)-1/2, (n-1)/2(1/p0-1/2) + delta-tilde(p1)}
    bool conjectural = false;
};

DeltaBar delta_bar(const Rational& p0, int n, DeltaTildeProvider provider);

// (1/p0 - 1/2) / 2.
Rational nu_2(const Rational& p0);
// Piecewise closed form on [1, 2]; branches meet at 6/5.
Rational delta_bar_2(const Rational& p0);

// p0, q0 in [6/5, 6] and 1/p0 - 1/q0 <= 1/3.
bool admissible_pair(const Rational& p0, const Rational& q0);
// |1/p - 1/q| < 1/3.
bool admissible_vv(const Rational& p, const Rational& q);

enum class Side { below2, above2 };

Rational dual_exponent(const Rational& p);
// below2: max{1/(p-p0), 1/(2-p)} on p0 < p < 2.
// above2: max{1/(p-2), (p0'-2)/(p0'-p)} on 2 < p < p0'.
Rational alpha_exponent(const Rational& p, const Rational& p0, Side side);

struct ExponentRecord {
    int n = 2;
    Rational p0, q0, p, q;
    Rational delta_p;
    Rational p1;
    Rational theta;
    Rational rho;
    Rational delta_bar;
    Rational nu2;
    std::optional<Rational> delta_bar2;  // n = 2 only
    std::optional<Rational> alpha_below;
    std::optional<Rational> alpha_above;
    bool pair_admissible = false;
    bool vv_admissible = false;
    bool conjectural = false;
};

ExponentRecord make_record(int n, const Rational& p0, const Rational& q0, const Rational& p,
                           const Rational& q, DeltaTildeProvider provider);

std::string format_record_text(const ExponentRecord& r);
std::string record_csv_header();
std::string format_record_csv(const ExponentRecord& r);

}  // namespace brlab
