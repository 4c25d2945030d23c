#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace brlab {

inline constexpr int kMaxDim = 3;

// Integer multi-index on the sampling lattice. Unused trailing entries are 0.
using Index = std::array<int, kMaxDim>;

// Half-open box [lo, hi) of lattice indices. Coordinates may lie outside
// [0, N); callers decide whether to wrap (torus) or clip (zero extension).
struct IndexBox {
    int n = 2;
    Index lo{};
    Index hi{};

    bool empty() const {
        for (int d = 0; d < n; ++d)
            if (hi[d] <= lo[d]) return true;
        return false;
    }
    std::int64_t count() const {
        if (empty()) return 0;
        std::int64_t c = 1;
        for (int d = 0; d < n; ++d) c *= hi[d] - lo[d];
        return c;
    }
    bool contains(const Index& p) const {
        for (int d = 0; d < n; ++d)
            if (p[d] < lo[d] || p[d] >= hi[d]) return false;
        return true;
    }
    bool contains(const IndexBox& b) const {
        if (b.empty()) return true;
        for (int d = 0; d < n; ++d)
            if (b.lo[d] < lo[d] || b.hi[d] > hi[d]) return false;
        return true;
    }
    IndexBox intersect(const IndexBox& b) const {
        IndexBox r{n, {}, {}};
        for (int d = 0; d < n; ++d) {
            r.lo[d] = lo[d] > b.lo[d] ? lo[d] : b.lo[d];
            r.hi[d] = hi[d] < b.hi[d] ? hi[d] : b.hi[d];
        }
        return r;
    }
    // Smallest box containing both (an empty operand is ignored).
    IndexBox hull(const IndexBox& b) const {
        if (empty()) return b;
        if (b.empty()) return *this;
        IndexBox r{n, {}, {}};
        for (int d = 0; d < n; ++d) {
            r.lo[d] = lo[d] < b.lo[d] ? lo[d] : b.lo[d];
            r.hi[d] = hi[d] > b.hi[d] ? hi[d] : b.hi[d];
        }
        return r;
    }
    IndexBox expanded(int by) const {
        IndexBox r = *this;
        for (int d = 0; d < n; ++d) {
            r.lo[d] -= by;
            r.hi[d] += by;
        }
        return r;
    }
    friend bool operator==(const IndexBox&, const IndexBox&) = default;
};

// Row-major lattice of N^n points with periodic wrap. N is a power of two,
// so wrapping is a bit mask.
class Lattice {
public:
    Lattice(int n, int N) : n_(n), N_(N), mask_(N - 1) {
        size_ = 1;
        for (int d = 0; d < n; ++d) size_ *= static_cast<std::size_t>(N);
    }
    int n() const { return n_; }
    int N() const { return N_; }
    std::size_t size() const { return size_; }

    int wrap(int i) const { return i & mask_; }

    std::size_t flat(const Index& p) const {
        std::size_t f = 0;
        for (int d = 0; d < n_; ++d) f = f * N_ + static_cast<std::size_t>(p[d]);
        return f;
    }
    std::size_t flat_wrapped(const Index& p) const {
        std::size_t f = 0;
        for (int d = 0; d < n_; ++d) f = f * N_ + static_cast<std::size_t>(p[d] & mask_);
        return f;
    }
    Index unflat(std::size_t f) const {
        Index p{};
        for (int d = n_ - 1; d >= 0; --d) {
            p[d] = static_cast<int>(f % N_);
            f /= N_;
        }
        return p;
    }
    IndexBox domain() const {
        IndexBox b{n_, {}, {}};
        for (int d = 0; d < n_; ++d) b.hi[d] = N_;
        return b;
    }

private:
    int n_;
    int N_;
    int mask_;
    std::size_t size_;
};

// Calls fn(Index) for every point of the box in row-major order.
template <class Fn>
void for_each_index(const IndexBox& box, Fn&& fn) {
    if (box.empty()) return;
    Index p = box.lo;
    for (;;) {
        fn(static_cast<const Index&>(p));
        int d = box.n - 1;
        while (d >= 0) {
            if (++p[d] < box.hi[d]) break;
            p[d] = box.lo[d];
            --d;
        }
        if (d < 0) return;
    }
}

// Position of p inside box (row-major), p assumed contained.
inline std::size_t local_offset(const IndexBox& box, const Index& p) {
    std::size_t f = 0;
    for (int d = 0; d < box.n; ++d)
        f = f * static_cast<std::size_t>(box.hi[d] - box.lo[d]) + static_cast<std::size_t>(p[d] - box.lo[d]);
    return f;
}

// Lattice offsets d with |d|^2 <= radius^2 (radius in grid units, ties included).
std::vector<Index> ball_offsets(int n, double radius);

// Keeps a deterministic sub-lattice of offsets (stride t in every axis, the
// smallest t giving at most cap points). The zero offset is always kept.
std::vector<Index> thin_offsets(const std::vector<Index>& offsets, int n, std::size_t cap);

// Minimal-image signed distance on a cycle of length N.
inline int periodic_delta(int a, int b, int N) {
    int d = (a - b) % N;
    if (d < 0) d += N;
    if (d > N / 2) d -= N;
    return d;
}

}  // namespace brlab
