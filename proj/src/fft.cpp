#include "brlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "brlab/kernels.hpp"

namespace brlab::fft {
namespace {

class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int n, int N, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_tuple(n, N, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::size_t total = 1;
        int dims[kMaxDim];
        for (int d = 0; d < n; ++d) {
            dims[d] = N;
            total *= static_cast<std::size_t>(N);
        }
        // ESTIMATE keeps plan choice (and therefore rounding) identical across runs.
        fftw_complex* scratch = fftw_alloc_complex(total);
        fftw_plan plan = fftw_plan_dft(n, dims, scratch, scratch, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void run(std::span<cplx> data, int n, int N, int sign) {
    fftw_plan plan = PlanCache::instance().get(n, N, sign);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
}

}  // namespace

void forward(std::span<cplx> data, int n, int N) { run(data, n, N, FFTW_FORWARD); }
void backward(std::span<cplx> data, int n, int N) { run(data, n, N, FFTW_BACKWARD); }

std::vector<cplx> dft(const SampledField& f) {
    std::vector<cplx> F(f.values().begin(), f.values().end());
    forward(F, f.spec().n(), f.spec().N());
    return F;
}

SampledField apply_table(const GridSpec& spec, std::span<const cplx> F,
                         std::span<const double> table) {
    std::vector<cplx> out(F.begin(), F.end());
    kernels::omp::multiply(out, table, 1.0 / static_cast<double>(spec.size()));
    backward(out, spec.n(), spec.N());
    return SampledField(spec, std::move(out));
}

SampledField apply_table(const SampledField& f, std::span<const double> table) {
    auto F = dft(f);
    return apply_table(f.spec(), F, table);
}

}  // namespace brlab::fft
