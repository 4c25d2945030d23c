#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "brlab/geometry.hpp"

namespace brlab {

using cplx = std::complex<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Periodic square grid standing in for R^n: side L, N samples per axis,
// grid point j sits at x = L (j/N - 1/2). Frequencies live on (1/L) Z^n.
class GridSpec {
public:
    GridSpec(int n = 2, double L = 16.0, int N = 512);

    int n() const { return n_; }
    double L() const { return L_; }
    int N() const { return N_; }
    double dx() const { return L_ / N_; }
    std::size_t size() const { return lattice_.size(); }
    double cell_volume() const;
    double domain_volume() const;
    const Lattice& lattice() const { return lattice_; }

    double coordinate(int j) const { return L_ * (static_cast<double>(j) / N_ - 0.5); }
    // Signed frequency index in [-N/2, N/2) for storage slot j.
    int frequency_index(int j) const { return j < N_ / 2 ? j : j - N_; }
    // Squared frequency |xi|^2 for a flat storage slot.
    double frequency_norm2(std::size_t flat) const;

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.n_ == b.n_ && a.N_ == b.N_ && a.L_ == b.L_;
    }

private:
    int n_;
    double L_;
    int N_;
    Lattice lattice_;
};

// Complex samples on the grid, row-major. May carry a declared support box:
// values are exactly zero outside it.
class SampledField {
public:
    explicit SampledField(GridSpec spec);
    SampledField(GridSpec spec, std::vector<cplx> values);

    const GridSpec& spec() const { return spec_; }
    std::span<const cplx> values() const { return values_; }
    std::span<cplx> values() { return values_; }
    std::vector<cplx>& data() { return values_; }
    const cplx& operator[](std::size_t i) const { return values_[i]; }
    cplx& operator[](std::size_t i) { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    const std::optional<IndexBox>& support() const { return support_; }
    void set_support(std::optional<IndexBox> box) { support_ = box; }
    // Declared support if present, otherwise the bounding box of nonzero samples.
    IndexBox support_or_bounds() const;
    bool is_zero() const;
    bool all_finite() const;

private:
    GridSpec spec_;
    std::vector<cplx> values_;
    std::optional<IndexBox> support_;
};

// Samples of f-hat on the frequency lattice, stored in FFT order.
class SpectralField {
public:
    SpectralField(GridSpec spec, std::vector<cplx> coefficients);
    const GridSpec& spec() const { return spec_; }
    std::span<const cplx> coefficients() const { return coefficients_; }
    std::span<cplx> coefficients() { return coefficients_; }

private:
    GridSpec spec_;
    std::vector<cplx> coefficients_;
};

// f-hat(xi) ~ integral f(x) e^{-2 pi i x.xi} dx. Satisfies
// sum |f-hat|^2 L^{-n} = sum |f|^2 dx^n.
SpectralField forward_transform(const SampledField& f);
SampledField inverse_transform(const SpectralField& fhat);

// Axis-aligned box in domain coordinates, [lo, hi) per axis.
struct PhysicalBox {
    int n = 2;
    std::array<double, kMaxDim> lo{};
    std::array<double, kMaxDim> hi{};
    double volume() const;
};

// Index box of the grid points whose coordinates fall in the physical box.
IndexBox to_index_box(const GridSpec& spec, const PhysicalBox& box);
PhysicalBox to_physical_box(const GridSpec& spec, const IndexBox& box);

// (|R|^{-1} sum_{R cap domain} |f|^p dx^n)^{1/p}. |R| is the full measure of R,
// points outside the sampled domain count as zero.
double cube_average(const SampledField& f, const IndexBox& box, double p);
double cube_average(const SampledField& f, const PhysicalBox& box, double p);

// Mean of |f|^p over the closed discrete ball (periodic), to the power 1/p.
double ball_average(const SampledField& f, const Index& center, double radius_grid, double p);

// (sum |f|^p w dx^n)^{1/p}; p = kInfinity gives max |f|. Empty w means w = 1.
double lp_norm(const SampledField& f, double p, std::span<const double> w = {});

// Field constructors used throughout tests and experiments.
SampledField zero_field(const GridSpec& spec);
SampledField constant_field(const GridSpec& spec, cplx c);
// e^{2 pi i x.xi0} with xi0 = m / L.
SampledField plane_wave(const GridSpec& spec, const Index& m);
SampledField indicator(const GridSpec& spec, const IndexBox& box);
// f * 1_box (box clipped to the domain, no wrap).
SampledField restricted(const SampledField& f, const IndexBox& box);
SampledField scaled(const SampledField& f, cplx c);

enum class TestKind { gaussian, bump, random_trig, indicator_smooth };

struct TestFunctionParams {
    std::array<double, kMaxDim> center{};
    double radius = 1.0;          // bump / window radius, gaussian width, box half-side
    double transition = 0.25;     // edge width for indicator_smooth
    int waves = 8;                // random_trig: number of plane waves
    double max_frequency = 1.5;   // random_trig: |xi| bound
};

// Deterministic given seed. bump, indicator_smooth and random_trig declare a
// support box and vanish exactly outside it. The effective support must sit
// inside the central quarter [-L/4, L/4]^n.
SampledField make_test_function(const GridSpec& spec, TestKind kind,
                                const TestFunctionParams& params, std::uint64_t seed);

}  // namespace brlab
