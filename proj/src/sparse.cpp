#include "brlab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

#include "brlab/errors.hpp"
#include "brlab/multiplier.hpp"

namespace brlab {

// ---------------------------------------------------------------- cubes

IndexBox DyadicCube::box() const {
    IndexBox b{n, {}, {}};
    const int s = side();
    for (int d = 0; d < n; ++d) {
        b.lo[d] = origin[d] + index[d] * s;
        b.hi[d] = b.lo[d] + s;
    }
    return b;
}

IndexBox DyadicCube::dilate6() const { return box().expanded(5 * side() / 2); }

std::int64_t DyadicCube::cells() const { return box().count(); }

DyadicCube DyadicCube::parent() const {
    if (level == 0) throw PreconditionError("the root cube has no parent");
    DyadicCube p = *this;
    p.level = level - 1;
    for (int d = 0; d < n; ++d) p.index[d] = index[d] / 2;
    return p;
}

std::vector<DyadicCube> DyadicCube::children() const {
    if (side() < 2) throw PreconditionError("cube too small to split");
    std::vector<DyadicCube> out;
    for (int bits = 0; bits < (1 << n); ++bits) {
        DyadicCube c = *this;
        c.level = level + 1;
        for (int d = 0; d < n; ++d) c.index[d] = 2 * index[d] + ((bits >> (n - 1 - d)) & 1);
        out.push_back(c);
    }
    return out;
}

bool DyadicCube::contains(const DyadicCube& other) const { return box().contains(other.box()); }

DyadicCube root_cube(const SampledField& f, const SampledField& g) {
    const GridSpec& spec = f.spec();
    if (!(g.spec() == spec)) throw PreconditionError("f and g live on different grids");
    const IndexBox hull = f.support_or_bounds().hull(g.support_or_bounds());
    const int n = spec.n(), N = spec.N();
    for (int s = 4; 6 * s <= N; s *= 2) {
        DyadicCube q;
        q.n = n;
        q.root_side = s;
        for (int d = 0; d < n; ++d) q.origin[d] = N / 2 - s / 2;
        if (q.dilate6().contains(hull)) return q;
    }
    throw PreconditionError("supports too large for domain");
}

// ---------------------------------------------------------------- exceptional set

namespace {

void select_maximal(const DyadicCube& cube, const std::vector<char>& inE, const IndexBox& Qbox, int min_side,
                    std::vector<DyadicCube>& out) {
    const IndexBox b = cube.box();
    std::int64_t hits = 0;
    for_each_index(b, [&](const Index& x) { hits += inE[local_offset(Qbox, x)]; });
    if (hits == 0) return;
    if (hits == b.count()) {
        out.push_back(cube);
        return;
    }
    if (cube.side() / 2 < min_side) return;
    for (const DyadicCube& c : cube.children()) select_maximal(c, inE, Qbox, min_side, out);
}

}  // namespace

ExceptionalSet exceptional_set(const SampledField& f, const DyadicCube& Q, double delta, const SparseConfig& cfg) {
    const GridSpec& spec = f.spec();
    const double p0 = cfg.maximal.p0;
    const IndexBox Qbox = Q.box();
    ExceptionalSet es;
    es.C = cfg.C_init;
    es.Q_cells = Qbox.count();
    if (f.is_zero()) {
        es.in_E.assign(static_cast<std::size_t>(es.Q_cells), 0);
        return es;
    }
    const double avg = cube_average(f, Q.dilate6(), p0);
    if (avg == 0.0) {
        es.in_E.assign(static_cast<std::size_t>(es.Q_cells), 0);
        return es;
    }

    MaximalConfig mcfg = cfg.maximal;
    mcfg.region = Qbox;
    const MaximalSum m = maximal_sum(f, delta, mcfg);
    std::vector<double> total;
    total.reserve(static_cast<std::size_t>(es.Q_cells));
    for_each_index(Qbox, [&](const Index& x) {
        const std::size_t i = spec.lattice().flat(x);
        total.push_back(m.star[i].real() + m.starstar[i].real() + m.hl[i].real());
    });

    for (;;) {
        es.threshold = es.C * avg;
        es.E_cells = std::count_if(total.begin(), total.end(), [&](double v) { return v > es.threshold; });
        if (2 * es.E_cells <= es.Q_cells) break;
        es.C *= 2.0;
        if (es.C > cfg.C_max) throw ThresholdFailure("threshold failure");
    }

    es.in_E.resize(total.size());
    for (std::size_t i = 0; i < total.size(); ++i) es.in_E[i] = total[i] > es.threshold;
    if (Q.side() / 2 >= cfg.min_side)
        for (const DyadicCube& c : Q.children()) select_maximal(c, es.in_E, Qbox, cfg.min_side, es.cubes);
    std::sort(es.cubes.begin(), es.cubes.end());
    std::int64_t covered = 0;
    for (const DyadicCube& c : es.cubes) covered += c.cells();
    es.floored_cells = es.E_cells - covered;
    return es;
}

// ---------------------------------------------------------------- collection

bool SparseCollection::certificate_holds() const {
    for (const SparseNode& s : nodes)
        if (2 * s.child_cells > s.cube.cells()) return false;
    return true;
}

double SparseCollection::certificate_ratio(std::size_t i) const {
    return static_cast<double>(nodes[i].child_cells) / static_cast<double>(nodes[i].cube.cells());
}

int SparseCollection::depth() const {
    int d = 0;
    for (const SparseNode& s : nodes) d = std::max(d, s.cube.level + 1);
    return d;
}

namespace {

double integrate_over(std::span<const cplx> values, const SampledField& g, const IndexBox& box, double cell) {
    cplx s{};
    std::size_t t = 0;
    for_each_index(box, [&](const Index& x) { s += values[t++] * std::conj(g[g.spec().lattice().flat(x)]); });
    return std::abs(s * cell);
}

// |int_{Q_j} B(f 1_{(6Q_j)^c}) conj(g)| for each cube, with Bf = B(f) on the grid.
std::vector<double> off_diagonal_terms(const SampledField& f, const SampledField& Bf, const SampledField& g,
                                       const std::vector<DyadicCube>& cubes, double delta) {
    const GridSpec& spec = f.spec();
    std::vector<double> out;
    for (const DyadicCube& q : cubes) {
        const IndexBox qb = q.box();
        const IndexBox six = q.dilate6().intersect(spec.lattice().domain());
        const auto near = apply_local(f, six, qb, spec, delta, 0.0);
        std::vector<cplx> diff(near.size());
        std::size_t t = 0;
        for_each_index(qb, [&](const Index& x) {
            diff[t] = Bf[spec.lattice().flat(x)] - near[t];
            ++t;
        });
        out.push_back(integrate_over(diff, g, qb, spec.cell_volume()));
    }
    return out;
}

}  // namespace

SparseCollection build_sparse(const SampledField& f, const SampledField& g, double delta, double p0, double q0,
                              const SparseConfig& cfg_in) {
    SparseConfig cfg = cfg_in;
    cfg.maximal.p0 = p0;
    cfg.maximal.q0 = q0;
    const DyadicCube Q0 = root_cube(f, g);
    SparseCollection S;
    S.nodes.push_back(SparseNode{Q0});
    std::vector<int> frontier{0};
    while (!frontier.empty()) {
        struct Pending {
            DyadicCube cube;
            int parent;
        };
        std::vector<Pending> next;
        for (int i : frontier) {
            SparseNode& node = S.nodes[i];
            const DyadicCube cube = node.cube;
            node.C = cfg.C_init;
            if (cube.side() / 2 < cfg.min_side) {
                node.leaf_by_floor = true;
                continue;
            }
            const SampledField fn = restricted(f, cube.dilate6());
            const ExceptionalSet es = exceptional_set(fn, cube, delta, cfg);
            node.C = es.C;
            node.threshold = es.threshold;
            node.E_cells = es.E_cells;
            node.floored_cells = es.floored_cells;
            for (const DyadicCube& c : es.cubes) {
                node.child_cells += c.cells();
                next.push_back({c, i});
            }
            if (cfg.record_off_diagonal && !es.cubes.empty())
                node.off_diagonal = off_diagonal_terms(fn, apply_bochner_riesz(fn, delta), g, es.cubes, delta);
        }
        std::stable_sort(next.begin(), next.end(), [](const Pending& a, const Pending& b) { return a.cube < b.cube; });
        frontier.clear();
        for (const Pending& p : next) {
            const int id = static_cast<int>(S.nodes.size());
            SparseNode child;
            child.cube = p.cube;
            child.parent = p.parent;
            S.nodes.push_back(child);
            S.nodes[p.parent].children.push_back(id);
            frontier.push_back(id);
        }
    }
    return S;
}

double sparse_form(const SparseCollection& S, const SampledField& f, const SampledField& g, double p0,
                   double q0_dual) {
    if (!(p0 >= 1.0 && q0_dual >= 1.0)) throw PreconditionError("sparse form exponents must be >= 1");
    const double cell = f.spec().cell_volume();
    double total = 0.0;
    for (const SparseNode& node : S.nodes) {
        const IndexBox six = node.cube.dilate6();
        const double a = cube_average(f, six, p0);
        if (a == 0.0) continue;
        total += a * cube_average(g, six, q0_dual) * static_cast<double>(node.cube.cells()) * cell;
    }
    return total;
}

cplx bilinear_pairing(const SampledField& f, const SampledField& g, double delta) {
    if (!(f.spec() == g.spec())) throw PreconditionError("f and g live on different grids");
    const SampledField B = apply_bochner_riesz(f, delta);
    cplx s{};
    for (std::size_t i = 0; i < B.size(); ++i) s += B[i] * std::conj(g[i]);
    return s * f.spec().cell_volume();
}

OffDiagonalReport off_diagonal_check(const SampledField& f, const SampledField& g, const DyadicCube& Q0,
                                     double delta, double p0, const SparseConfig& cfg_in) {
    SparseConfig cfg = cfg_in;
    cfg.maximal.p0 = p0;
    const SampledField fn = restricted(f, Q0.dilate6());
    const ExceptionalSet es = exceptional_set(fn, Q0, delta, cfg);
    OffDiagonalReport r;
    r.cubes = es.cubes.size();
    if (!es.cubes.empty()) {
        const auto terms = off_diagonal_terms(fn, apply_bochner_riesz(fn, delta), g, es.cubes, delta);
        for (double t : terms) r.lhs += t;
    }
    const double q0d = cfg.maximal.q0 / (cfg.maximal.q0 - 1.0);
    r.rhs = cube_average(fn, Q0.dilate6(), p0) * cube_average(g, Q0.dilate6(), q0d) *
            static_cast<double>(Q0.cells()) * f.spec().cell_volume();
    r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
    return r;
}

// ---------------------------------------------------------------- serialization

void write_sparse_csv(std::ostream& os, const SparseCollection& S, const GridSpec& spec) {
    const int n = spec.n();
    os << (n == 3 ? "level,ix,iy,iz,side,certificate_ratio\n" : "level,ix,iy,side,certificate_ratio\n");
    char buf[160];
    for (std::size_t i = 0; i < S.nodes.size(); ++i) {
        const DyadicCube& c = S.nodes[i].cube;
        const double side = c.side() * spec.dx();
        if (n == 3)
            std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.17g,%.17g\n", c.level, c.index[0], c.index[1], c.index[2],
                          side, S.certificate_ratio(i));
        else
            std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g\n", c.level, c.index[0], n > 1 ? c.index[1] : 0,
                          side, S.certificate_ratio(i));
        os << buf;
    }
}

std::string trace_json(const SparseCollection& S, const GridSpec& spec) {
    using nlohmann::json;
    json nodes = json::array();
    for (std::size_t i = 0; i < S.nodes.size(); ++i) {
        const SparseNode& s = S.nodes[i];
        json children = json::array();
        for (std::size_t j = 0; j < s.children.size(); ++j) {
            const DyadicCube& c = S.nodes[s.children[j]].cube;
            json cj = {{"level", c.level},
                       {"index", std::vector<int>(c.index.begin(), c.index.begin() + spec.n())}};
            if (j < s.off_diagonal.size()) cj["off_diagonal"] = s.off_diagonal[j];
            children.push_back(cj);
        }
        nodes.push_back({{"level", s.cube.level},
                         {"index", std::vector<int>(s.cube.index.begin(), s.cube.index.begin() + spec.n())},
                         {"side", s.cube.side() * spec.dx()},
                         {"C", s.C},
                         {"threshold", s.threshold},
                         {"E_cells", s.E_cells},
                         {"Q_cells", s.cube.cells()},
                         {"E_fraction", static_cast<double>(s.E_cells) / static_cast<double>(s.cube.cells())},
                         {"floored_cells", s.floored_cells},
                         {"leaf_by_floor", s.leaf_by_floor},
                         {"certificate", {{"children_cells", s.child_cells}, {"cells", s.cube.cells()}}},
                         {"children", children}});
    }
    const DyadicCube& root = S.nodes.front().cube;
    json out = {{"root", {{"origin", std::vector<int>(root.origin.begin(), root.origin.begin() + spec.n())},
                          {"side_cells", root.root_side},
                          {"side", root.root_side * spec.dx()}}},
                {"depth", S.depth()},
                {"certificate_holds", S.certificate_holds()},
                {"nodes", nodes}};
    return out.dump(2);
}

}  // namespace brlab
