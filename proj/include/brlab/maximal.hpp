#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "brlab/grid.hpp"

namespace brlab {

struct MaximalConfig {
    double p0 = 1.2;
    double q0 = 2.0;
    // Ball radii in grid units, increasing. Empty means default_radii(spec).
    std::vector<int> radii;
    // Per-ball cap on the number of centers y (deterministic sub-lattice).
    std::size_t y_cap = 64;
    // No y thinning and no snapping of mask centers; for oracle tests.
    bool full_enumeration = false;
    // Evaluate only at grid points of this box (inside the domain); zero elsewhere.
    std::optional<IndexBox> region;
};

// 2^m for m = 2 .. log2(N/4).
std::vector<int> default_radii(const GridSpec& spec);

// max over radii of (mean over the closed periodic ball B(x, r) of |f|^p0)^{1/p0}.
SampledField hl_maximal(const SampledField& f, const MaximalConfig& cfg);
SampledField hl_maximal(const SampledField& f, double p0);

// sup over radii r and centers y in B(x, r) of the q0-mean over B(y, r) of
// |B_eps(f 1_{B(x, 3r)^c})| with eps = r dx. f must carry a support box.
// Mask centers are shared by cells of side max(1, r/2); the value is exact
// at each cell's representative point.
SampledField br_star(const SampledField& f, double delta, const MaximalConfig& cfg);

// Same without the mask.
SampledField br_starstar(const SampledField& f, double delta, const MaximalConfig& cfg);

// B* + B** + M_{p0}, sharing the per-radius work. Values are zero outside cfg.region.
struct MaximalSum {
    SampledField star;
    SampledField starstar;
    SampledField hl;
};
MaximalSum maximal_sum(const SampledField& f, double delta, const MaximalConfig& cfg);

}  // namespace brlab
