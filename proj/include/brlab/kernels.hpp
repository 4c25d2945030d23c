#pragma once

// Data-parallel inner loops. `serial` is the reference implementation kept
// for testing; `omp` is what the library calls. Both produce bit-identical
// results: every output element is computed by the same expression, and
// reductions use a fixed block decomposition independent of thread count.

#include <complex>
#include <span>

#include "brlab/geometry.hpp"

namespace brlab::kernels {

using cplx = std::complex<double>;

inline constexpr std::size_t kSumBlock = 4096;

#define BRLAB_KERNEL_DECLS                                                                  \
    /* data[i] *= scale * symbol[i] */                                                      \
    void multiply(std::span<cplx> data, std::span<const double> symbol, double scale);      \
    /* out[i] = |in[i]|^p */                                                                \
    void abs_pow(std::span<const cplx> in, double p, std::span<double> out);                \
    /* out[t] = mean of src over t + ball (periodic wrap), t over targets (row-major) */    \
    void ball_mean(std::span<const double> src, const Lattice& lattice,                     \
                   std::span<const Index> ball, const IndexBox& targets,                    \
                   std::span<double> out);                                                  \
    /* out[t] = max over d of src[t + d]; src is a local array over src_box */              \
    void offset_max(std::span<const double> src, const IndexBox& src_box,                   \
                    std::span<const Index> offsets, const IndexBox& targets,                \
                    std::span<double> out);                                                 \
    /* sum in fixed blocks of kSumBlock, blocks combined in order */                        \
    double blocked_sum(std::span<const double> v);

namespace serial {
BRLAB_KERNEL_DECLS
}
namespace omp {
BRLAB_KERNEL_DECLS
}

#undef BRLAB_KERNEL_DECLS

}  // namespace brlab::kernels
