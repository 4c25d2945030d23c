#include <omp.h>

#include <cmath>
#include <vector>

#include "brlab/kernels.hpp"

namespace brlab::kernels::omp {

void multiply(std::span<cplx> data, std::span<const double> symbol, double scale) {
    const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) data[i] *= scale * symbol[i];
}

void abs_pow(std::span<const cplx> in, double p, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = std::pow(std::abs(in[i]), p);
}

namespace {

// Row-major position -> Index inside the box.
inline Index box_point(const IndexBox& box, std::size_t t) {
    Index p{};
    for (int d = box.n - 1; d >= 0; --d) {
        const auto extent = static_cast<std::size_t>(box.hi[d] - box.lo[d]);
        p[d] = box.lo[d] + static_cast<int>(t % extent);
        t /= extent;
    }
    return p;
}

}  // namespace

void ball_mean(std::span<const double> src, const Lattice& lattice, std::span<const Index> ball,
               const IndexBox& targets, std::span<double> out) {
    const double inv = 1.0 / static_cast<double>(ball.size());
    const auto count = static_cast<std::ptrdiff_t>(targets.count());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < count; ++t) {
        const Index x = box_point(targets, static_cast<std::size_t>(t));
        double s = 0.0;
        for (const Index& d : ball) {
            Index y{x[0] + d[0], x[1] + d[1], x[2] + d[2]};
            s += src[lattice.flat_wrapped(y)];
        }
        out[t] = s * inv;
    }
}

void offset_max(std::span<const double> src, const IndexBox& src_box, std::span<const Index> offsets,
                const IndexBox& targets, std::span<double> out) {
    const auto count = static_cast<std::ptrdiff_t>(targets.count());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < count; ++t) {
        const Index x = box_point(targets, static_cast<std::size_t>(t));
        double m = 0.0;
        for (const Index& d : offsets) {
            Index y{x[0] + d[0], x[1] + d[1], x[2] + d[2]};
            double v = src[local_offset(src_box, y)];
            if (v > m) m = v;
        }
        out[t] = m;
    }
}

double blocked_sum(std::span<const double> v) {
    const std::size_t blocks = (v.size() + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(blocks, 0.0);
    const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kSumBlock;
        const std::size_t hi = lo + kSumBlock < v.size() ? lo + kSumBlock : v.size();
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        partial[b] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

}  // namespace brlab::kernels::omp
