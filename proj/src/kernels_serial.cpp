#include <cmath>
#include <vector>

#include "brlab/kernels.hpp"

namespace brlab::kernels::serial {

void multiply(std::span<cplx> data, std::span<const double> symbol, double scale) {
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= scale * symbol[i];
}

void abs_pow(std::span<const cplx> in, double p, std::span<double> out) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::pow(std::abs(in[i]), p);
}

void ball_mean(std::span<const double> src, const Lattice& lattice, std::span<const Index> ball,
               const IndexBox& targets, std::span<double> out) {
    const double inv = 1.0 / static_cast<double>(ball.size());
    std::size_t t = 0;
    for_each_index(targets, [&](const Index& x) {
        double s = 0.0;
        for (const Index& d : ball) {
            Index y{x[0] + d[0], x[1] + d[1], x[2] + d[2]};
            s += src[lattice.flat_wrapped(y)];
        }
        out[t++] = s * inv;
    });
}

void offset_max(std::span<const double> src, const IndexBox& src_box, std::span<const Index> offsets,
                const IndexBox& targets, std::span<double> out) {
    std::size_t t = 0;
    for_each_index(targets, [&](const Index& x) {
        double m = 0.0;
        for (const Index& d : offsets) {
            Index y{x[0] + d[0], x[1] + d[1], x[2] + d[2]};
            double v = src[local_offset(src_box, y)];
            if (v > m) m = v;
        }
        out[t++] = m;
    });
}

double blocked_sum(std::span<const double> v) {
    double total = 0.0;
    for (std::size_t b = 0; b < v.size(); b += kSumBlock) {
        double s = 0.0;
        std::size_t e = b + kSumBlock < v.size() ? b + kSumBlock : v.size();
        for (std::size_t i = b; i < e; ++i) s += v[i];
        total += s;
    }
    return total;
}

}  // namespace brlab::kernels::serial
