#include "brlab/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "brlab/errors.hpp"

namespace brlab {

void write_field(std::ostream& os, const SampledField& f) {
    const GridSpec& s = f.spec();
    char buf[96];
    std::snprintf(buf, sizeof buf, "field n=%d N=%d L=%.17g\n", s.n(), s.N(), s.L());
    os << buf;
    for (const cplx& v : f.values()) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v.real(), v.imag());
        os << buf;
    }
}

SampledField read_field(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw PreconditionError("field file: missing header");
    int n = 0, N = 0;
    double L = 0.0;
    if (std::sscanf(line.c_str(), "field n=%d N=%d L=%lf", &n, &N, &L) != 3)
        throw PreconditionError("field file: malformed header '" + line + "'");
    GridSpec spec(n, L, N);
    std::vector<cplx> values;
    values.reserve(spec.size());
    while (values.size() < spec.size() && std::getline(is, line)) {
        if (line.empty()) continue;
        double re = 0.0, im = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &re, &im) != 2)
            throw PreconditionError("field file: malformed sample '" + line + "'");
        values.emplace_back(re, im);
    }
    if (values.size() != spec.size()) throw PreconditionError("field file: truncated sample list");
    SampledField f(spec, std::move(values));
    if (!f.all_finite()) throw PreconditionError("field file: non-finite sample");
    return f;
}

void save_field(const std::string& path, const SampledField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw PreconditionError("cannot open " + path + " for writing");
    write_field(os, f);
}

SampledField load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw PreconditionError("cannot open " + path);
    return read_field(is);
}

}  // namespace brlab
