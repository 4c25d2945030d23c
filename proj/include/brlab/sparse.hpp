#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "brlab/grid.hpp"
#include "brlab/maximal.hpp"

namespace brlab {

// Cube of the dyadic mesh D(Q0). Q0 is a grid-aligned cube with a
// power-of-two side (in grid points); level l splits it into 2^{ln} cubes.
struct DyadicCube {
    int n = 2;
    Index origin{};      // lower corner of Q0
    int root_side = 0;   // side of Q0 in grid points
    int level = 0;
    Index index{};       // in {0 .. 2^level - 1}^n

    int side() const { return root_side >> level; }
    IndexBox box() const;
    // Concentric 6-fold dilate, [lo - 5s/2, hi + 5s/2).
    IndexBox dilate6() const;
    std::int64_t cells() const;
    DyadicCube parent() const;
    std::vector<DyadicCube> children() const;
    bool contains(const DyadicCube& other) const;
    friend bool operator==(const DyadicCube& a, const DyadicCube& b) {
        return a.level == b.level && a.index == b.index && a.origin == b.origin && a.root_side == b.root_side;
    }
    // Address order: level, then index lexicographic.
    friend bool operator<(const DyadicCube& a, const DyadicCube& b) {
        if (a.level != b.level) return a.level < b.level;
        return a.index < b.index;
    }
};

// Smallest centered cube Q0 (power-of-two side >= 4) with the supports of
// f and g inside 6Q0 and 6Q0 inside the domain.
DyadicCube root_cube(const SampledField& f, const SampledField& g);

struct SparseConfig {
    MaximalConfig maximal;
    double C_init = 8.0;
    double C_max = 1048576.0;  // 2^20
    int min_side = 4;          // cubes with fewer than min_side^n samples are never selected
    bool record_off_diagonal = true;
};

struct ExceptionalSet {
    double C = 0.0;
    double threshold = 0.0;          // C * (avg_{6Q} |f|^{p0})^{1/p0}
    std::int64_t E_cells = 0;        // grid points of Q with value > threshold
    std::int64_t Q_cells = 0;
    std::int64_t floored_cells = 0;  // points of E not covered by selected cubes
    std::vector<DyadicCube> cubes;   // maximal dyadic cubes inside E
    std::vector<char> in_E;          // membership over Q's box, row-major
};

// Stopping-time step at one node. f is taken as given (callers restrict it to 6Q).
ExceptionalSet exceptional_set(const SampledField& f, const DyadicCube& Q, double delta,
                               const SparseConfig& cfg);

struct SparseNode {
    DyadicCube cube;
    int parent = -1;
    std::vector<int> children;       // indices into SparseCollection::nodes
    std::int64_t child_cells = 0;    // sum of |Q| over children, in grid cells
    double C = 0.0;
    double threshold = 0.0;
    std::int64_t E_cells = 0;
    std::int64_t floored_cells = 0;
    bool leaf_by_floor = false;      // too small to have selectable children
    std::vector<double> off_diagonal;  // per child, |int_{Q_j} B(f 1_{(6Q_j)^c}) conj(g)|
};

struct SparseCollection {
    std::vector<SparseNode> nodes;  // breadth-first, address order within a level

    // Exact check of sum_{children} |Q| <= |P| / 2 at every node.
    bool certificate_holds() const;
    double certificate_ratio(std::size_t i) const;
    int depth() const;
};

SparseCollection build_sparse(const SampledField& f, const SampledField& g, double delta, double p0,
                              double q0, const SparseConfig& cfg = {});

// sum_{Q in S} avg_{6Q}(f, p0) avg_{6Q}(g, q0_dual) |Q|.
double sparse_form(const SparseCollection& S, const SampledField& f, const SampledField& g, double p0,
                   double q0_dual);

// int B^delta(f) conj(g) dx.
cplx bilinear_pairing(const SampledField& f, const SampledField& g, double delta);

struct OffDiagonalReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    std::size_t cubes = 0;
};

OffDiagonalReport off_diagonal_check(const SampledField& f, const SampledField& g, const DyadicCube& Q0,
                                     double delta, double p0, const SparseConfig& cfg = {});

// CSV rows "level,ix,iy[,iz],side,certificate_ratio"; side in domain units.
void write_sparse_csv(std::ostream& os, const SparseCollection& S, const GridSpec& spec);
std::string trace_json(const SparseCollection& S, const GridSpec& spec);

}  // namespace brlab
