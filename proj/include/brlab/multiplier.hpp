#pragma once

#include <memory>
#include <vector>

#include "brlab/grid.hpp"

namespace brlab {

// Cutoffs. H is 1 on (-inf, 1], 0 on [1.01, inf), built from exp(-1/t).
double smooth_step(double x);
// H(x) - H(2x): supported in [1/2, 1.01], equal to 1 on [0.51, 1].
double chi(double x);
// 1 on [0, 1], supported in [-0.01, 1.01].
double chi_tilde(double t);

// Symbols as functions of t = 1 - |xi|^2.
double bochner_riesz_symbol(double t, double delta);
double truncated_symbol(double t, double delta, double epsilon);
double piece_symbol(double t, int k, double delta);

// Smallest resolvable Littlewood-Paley scale: ceil(log2(8 / L)).
int min_resolvable_scale(const GridSpec& spec);

using SymbolTable = std::shared_ptr<const std::vector<double>>;

// Cached symbol samples on the frequency lattice (FFT order).
SymbolTable bochner_riesz_table(const GridSpec& spec, double delta);
SymbolTable truncated_table(const GridSpec& spec, double delta, double epsilon);
SymbolTable piece_table(const GridSpec& spec, int k, double delta);
void clear_symbol_cache();

using KernelTable = std::shared_ptr<const std::vector<cplx>>;

// Periodic convolution kernel of B^delta_eps on the grid, IDFT(symbol) / N^n,
// indexed by wrapped offset. epsilon = 0 gives B^delta.
KernelTable truncated_kernel(const GridSpec& spec, double delta, double epsilon);

// sum over w in src of f(w) K(z - w), for z in dst (row-major over dst).
// Uses a windowed FFT when both boxes fit a window smaller than the grid.
std::vector<cplx> apply_local(const SampledField& f, const IndexBox& src, const IndexBox& dst,
                              const GridSpec& spec, double delta, double epsilon);

SampledField apply_bochner_riesz(const SampledField& f, double delta);
SampledField apply_truncated(const SampledField& f, double delta, double epsilon);
SampledField apply_Sk(const SampledField& f, int k, double delta);

// |kernel of S_k| at each radius, max over the axis and diagonal directions.
// Evaluated exactly as the trigonometric polynomial L^{-n} sum s_k(xi) e^{2 pi i x.xi}
// over the frequency lattice of spec (only L enters; N is irrelevant). n = 2 only.
std::vector<double> kernel_profile(const GridSpec& spec, int k, double delta,
                                   const std::vector<double>& radii);

// Local envelope: max of kernel_profile over [r - halfwidth, r + halfwidth]
// sampled with `samples` points per radius.
std::vector<double> kernel_envelope(const GridSpec& spec, int k, double delta,
                                    const std::vector<double>& radii, double halfwidth = 0.5,
                                    int samples = 17);

}  // namespace brlab
