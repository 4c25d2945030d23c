#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "brlab/grid.hpp"
#include "brlab/indices.hpp"

namespace brlab {

// Cubes over which characteristic suprema are taken: every dyadic cube of
// the domain at every level, plus seeded random cubes inside the domain.
class CubeFamily {
public:
    struct Cube {
        Index lo{};
        int side = 1;
    };

    static std::shared_ptr<const CubeFamily> standard(const GridSpec& spec, std::size_t random_cubes = 10000,
                                                      std::uint64_t seed = 0x5eed);
    static std::shared_ptr<const CubeFamily> from_cubes(const GridSpec& spec, std::vector<Cube> cubes);

    const std::vector<Cube>& cubes() const { return cubes_; }
    const GridSpec& spec() const { return spec_; }

private:
    CubeFamily(GridSpec spec, std::vector<Cube> cubes) : spec_(spec), cubes_(std::move(cubes)) {}
    GridSpec spec_;
    std::vector<Cube> cubes_;
};

using FamilyPtr = std::shared_ptr<const CubeFamily>;

// Strictly positive weight b^e with base field b. Powers and reciprocals
// change only e, so w, w^s and 1/w share cube statistics exactly.
class Weight {
public:
    Weight(const SampledField& base, FamilyPtr family);

    Weight power(double s) const;
    Weight reciprocal() const { return power(-1.0); }

    const GridSpec& spec() const { return base_->spec(); }
    const FamilyPtr& family() const { return family_; }
    double exponent() const { return e_; }
    std::vector<double> values() const;
    SampledField field() const;

    // Per-cube statistics of w^a (a relative to this weight).
    const std::vector<double>& averages(double a) const;  // mean of w^a per family cube
    const std::vector<double>& minima() const;            // min of w per cube
    const std::vector<double>& maxima() const;            // max of w per cube
    const std::vector<char>& constant_cubes() const;      // min == max

private:
    struct Store;
    Weight(std::shared_ptr<const SampledField> base, FamilyPtr family, double e, std::shared_ptr<Store> store);
    std::shared_ptr<const SampledField> base_;
    FamilyPtr family_;
    double e_ = 1.0;
    std::shared_ptr<Store> store_;
};

// sup_B (avg w)(avg w^{1-p'})^{p-1}; p > 1.
double ap_characteristic(const Weight& w, double p);
// sup_B (avg w)(min_B w)^{-1}.
double a1_characteristic(const Weight& w);
// sup_B (max_B w) / (avg w).
double rh_inf_characteristic(const Weight& w);
// sup_B (avg w^s)^{1/s} / (avg w); s > 1.
double rh_characteristic(const Weight& w, double s);

struct ProductCheck {
    double lhs = 0.0;     // [w^s]_{A_{1+s(q-1)}}
    double rhs = 0.0;     // [w]_{A_q}^s [w]_{RH_s}^s
    double direct = 0.0;  // lhs recomputed through ap_characteristic on w^s
    bool holds = false;
};

ProductCheck check_ap_rh_product(const Weight& w, double q, double s);

struct PredictedBound {
    double ap = 0.0;      // [w]_{A_{p/p0}} or [w]_{A_{p/2}}
    double rh = 0.0;      // [w]_{RH_{(2/p)'}} or [w]_{RH_{(p0'/2)'}}
    Rational alpha;
    double value = 0.0;   // (ap * rh)^alpha, constant factor 1
};

PredictedBound predicted_bound(const Weight& w, const Rational& p, const Rational& p0, int n, Side side);

// ||B^delta f||_{L^p(w)} / ||f||_{L^p(w)}.
double weighted_operator_ratio(const SampledField& f, const Weight& w, double p, double delta);

struct VectorValuedReport {
    double input_norm = 0.0;
    double output_norm = 0.0;
    double ratio = 0.0;
    bool admissible = false;
};

// ||(sum |h_i|^q)^{1/q}||_p for h = f and h = B^delta f.
VectorValuedReport vector_valued_norm(const std::vector<SampledField>& fs, const Rational& p, const Rational& q,
                                      double delta);

// Presets.
Weight constant_weight(const GridSpec& spec, double c, FamilyPtr family);
// max(|x|, dx)^a.
Weight power_weight(const GridSpec& spec, double a, FamilyPtr family);
// Values lo / hi alternating on cells of `cell` grid points per side.
Weight checkerboard_weight(const GridSpec& spec, double lo, double hi, int cell, FamilyPtr family);
// exp(amplitude * smooth random field), deterministic in seed.
Weight lognormal_weight(const GridSpec& spec, double amplitude, std::uint64_t seed, FamilyPtr family);

struct KLPreset {
    double a2_w3 = 0.0;        // [w^3]_{A_2}
    double ainf_mix = 0.0;     // [w^3 + w^{-3}]_{A_p}, p = 2^10, standing in for A_inf
    double value = 0.0;        // a2_w3^{1/6} ainf_mix^{1/2}
};

KLPreset kl_preset(const Weight& w);

}  // namespace brlab
