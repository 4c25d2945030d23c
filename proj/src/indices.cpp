#include "brlab/indices.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>
#include <vector>

#include "brlab/errors.hpp"

namespace brlab {

namespace {

Rational abs_r(const Rational& r) { return r < 0 ? -r : r; }
Rational max_r(const Rational& a, const Rational& b) { return a < b ? b : a; }

const Rational kHalf(1, 2);
const Rational kSixFifths(6, 5);

void require_p0_range(const Rational& p0) {
    if (p0 < 1 || p0 > 2) throw PreconditionError("p0 must lie in [1, 2], got " + to_string(p0));
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw PreconditionError("empty exponent");
    try {
        if (auto slash = s.find('/'); slash != std::string::npos) {
            std::size_t used = 0;
            const long long a = std::stoll(s.substr(0, slash), &used);
            if (used != slash) throw PreconditionError("bad numerator");
            const std::string den = s.substr(slash + 1);
            const long long b = std::stoll(den, &used);
            if (used != den.size() || b == 0) throw PreconditionError("bad denominator");
            return Rational(a, b);
        }
        bool neg = false;
        std::size_t i = 0;
        if (s[0] == '-' || s[0] == '+') {
            neg = s[0] == '-';
            i = 1;
        }
        std::int64_t num = 0, den = 1;
        bool dot = false, digits = false;
        for (; i < s.size(); ++i) {
            if (s[i] == '.' && !dot) {
                dot = true;
                continue;
            }
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw PreconditionError("bad digit");
            if (num > (INT64_MAX / 10) - 10 || (dot && den > INT64_MAX / 10))
                throw PreconditionError("too many digits");
            num = num * 10 + (s[i] - '0');
            if (dot) den *= 10;
            digits = true;
        }
        if (!digits) throw PreconditionError("no digits");
        return Rational(neg ? -num : num, den);
    } catch (const std::logic_error&) {
        throw PreconditionError("cannot parse exponent '" + text + "'");
    }
}

std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << '/' << r.denominator();
    return os.str();
}

double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

Rational delta_critical(const Rational& p, int n) {
    if (p <= 1) throw PreconditionError("delta(p) requires p > 1");
    return max_r(n * abs_r(1 / p - kHalf) - kHalf, Rational(0));
}

Rational p1_of(const Rational& p0) {
    require_p0_range(p0);
    return 2 * (Rational(3, 2) - 1 / p0);
}

Rational rho_n(const Rational& p0, int n) {
    require_p0_range(p0);
    const Rational u = 1 / p0 - kHalf;
    return max_r(n * u - kHalf, Rational(n - 1, 2) * u);
}

Rational rho_n_piecewise(const Rational& p0, int n) {
    require_p0_range(p0);
    const Rational u = 1 / p0 - kHalf;
    const Rational tomas_stein(2 * (n + 1), n + 3);
    if (p0 >= tomas_stein) return Rational(n - 1, 2) * u;
    return n * u - kHalf;
}

Rational theta_of(const Rational& p1) {
    if (p1 < 1 || p1 > 2) throw PreconditionError("p1 must lie in [1, 2]");
    return 1 - p1 / 2;
}

DeltaBar delta_bar(const Rational& p0, int n, DeltaTildeProvider provider) {
    if (provider == DeltaTildeProvider::dim2_solved && n != 2)
        throw PreconditionError("provider dim2_solved is only valid for n = 2");
    DeltaBar d;
    d.p1 = p1_of(p0);
    d.theta = theta_of(d.p1);
    d.delta_tilde = d.p1 > 1 ? delta_critical(d.p1, n) : Rational(n - 1, 2);
    const Rational u = 1 / p0 - kHalf;
    d.value = d.delta_tilde + Rational(n - 1, 2) * u;
    d.max_form = max_r(n * u - kHalf, Rational(n - 1, 2) * u + d.delta_tilde);
    d.conjectural = provider == DeltaTildeProvider::assume_conjecture && n >= 3;
    if (d.value < rho_n(p0, n)) throw std::logic_error("delta_bar below rho_n");
    return d;
}

Rational nu_2(const Rational& p0) {
    require_p0_range(p0);
    return (1 / p0 - kHalf) / 2;
}

Rational delta_bar_2(const Rational& p0) {
    const Rational nu = nu_2(p0);
    if (p0 >= kSixFifths) return nu;
    return nu + 1 / (1 - 2 * nu) - Rational(3, 2);
}

bool admissible_pair(const Rational& p0, const Rational& q0) {
    const Rational hi(6);
    if (p0 < kSixFifths || p0 > hi || q0 < kSixFifths || q0 > hi) return false;
    return 1 / p0 - 1 / q0 <= Rational(1, 3);
}

bool admissible_vv(const Rational& p, const Rational& q) {
    if (p <= 0 || q <= 0) throw PreconditionError("exponents must be positive");
    return abs_r(1 / p - 1 / q) < Rational(1, 3);
}

Rational dual_exponent(const Rational& p) {
    if (p <= 1) throw PreconditionError("dual exponent requires p > 1");
    return p / (p - 1);
}

Rational alpha_exponent(const Rational& p, const Rational& p0, Side side) {
    if (side == Side::below2) {
        if (!(p0 < p && p < 2))
            throw PreconditionError("below2 requires p in (" + to_string(p0) + ", 2), got " + to_string(p));
        return max_r(1 / (p - p0), 1 / (2 - p));
    }
    const Rational p0d = dual_exponent(p0);
    if (!(2 < p && p < p0d))
        throw PreconditionError("above2 requires p in (2, " + to_string(p0d) + "), got " + to_string(p));
    return max_r(1 / (p - 2), (p0d - 2) / (p0d - p));
}

ExponentRecord make_record(int n, const Rational& p0, const Rational& q0, const Rational& p,
                           const Rational& q, DeltaTildeProvider provider) {
    ExponentRecord r;
    r.n = n;
    r.p0 = p0;
    r.q0 = q0;
    r.p = p;
    r.q = q;
    r.delta_p = delta_critical(p, n);
    const DeltaBar db = delta_bar(p0, n, provider);
    r.p1 = db.p1;
    r.theta = db.theta;
    r.rho = rho_n(p0, n);
    r.delta_bar = db.value;
    r.conjectural = db.conjectural;
    r.nu2 = nu_2(p0);
    if (n == 2) r.delta_bar2 = delta_bar_2(p0);
    if (p0 < p && p < 2) r.alpha_below = alpha_exponent(p, p0, Side::below2);
    if (p0 > 1 && 2 < p && p < dual_exponent(p0)) r.alpha_above = alpha_exponent(p, p0, Side::above2);
    r.pair_admissible = admissible_pair(p0, q0);
    r.vv_admissible = admissible_vv(p, q);
    return r;
}

namespace {

std::string opt(const std::optional<Rational>& r) { return r ? to_string(*r) : "-"; }

std::vector<std::pair<std::string, std::string>> record_fields(const ExponentRecord& r) {
    return {
        {"n", std::to_string(r.n)},
        {"p0", to_string(r.p0)},
        {"q0", to_string(r.q0)},
        {"p", to_string(r.p)},
        {"q", to_string(r.q)},
        {"delta_p", to_string(r.delta_p)},
        {"p1", to_string(r.p1)},
        {"theta", to_string(r.theta)},
        {"rho", to_string(r.rho)},
        {"delta_bar", to_string(r.delta_bar)},
        {"nu2", to_string(r.nu2)},
        {"delta_bar2", opt(r.delta_bar2)},
        {"alpha_below", opt(r.alpha_below)},
        {"alpha_above", opt(r.alpha_above)},
        {"pair_admissible", r.pair_admissible ? "true" : "false"},
        {"vv_admissible", r.vv_admissible ? "true" : "false"},
        {"conjectural", r.conjectural ? "true" : "false"},
    };
}

}  // namespace

std::string format_record_text(const ExponentRecord& r) {
    std::ostringstream os;
    for (const auto& [k, v] : record_fields(r)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-16s %s\n", k.c_str(), v.c_str());
        os << buf;
    }
    return os.str();
}

std::string record_csv_header() {
    std::string out;
    for (const auto& [k, v] : record_fields(ExponentRecord{})) {
        (void)v;
        out += out.empty() ? k : "," + k;
    }
    return out;
}

std::string format_record_csv(const ExponentRecord& r) {
    std::string out;
    bool first = true;
    for (const auto& [k, v] : record_fields(r)) {
        (void)k;
        out += first ? v : "," + v;
        first = false;
    }
    return out;
}

}  // namespace brlab
