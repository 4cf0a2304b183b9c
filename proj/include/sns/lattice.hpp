/// Wave-index lattice for the 2D torus: the nonzero integer lattice Z^2_0,
/// its half Z^2_+ used for Hermitian storage, and mode enumeration up to a
/// truncation radius.
#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace sns {

struct WaveIndex {
    int k1 = 0;
    int k2 = 0;

    friend bool operator==(const WaveIndex&, const WaveIndex&) = default;
};

constexpr bool is_zero(WaveIndex k) { return k.k1 == 0 && k.k2 == 0; }

/// k_perp = (-k2, k1)
constexpr WaveIndex perp(WaveIndex k) { return {-k.k2, k.k1}; }

constexpr WaveIndex operator-(WaveIndex a, WaveIndex b) { return {a.k1 - b.k1, a.k2 - b.k2}; }
constexpr WaveIndex operator-(WaveIndex a) { return {-a.k1, -a.k2}; }

constexpr long sqnorm(WaveIndex k) {
    return static_cast<long>(k.k1) * k.k1 + static_cast<long>(k.k2) * k.k2;
}

inline double abs(WaveIndex k) { return std::sqrt(static_cast<double>(sqnorm(k))); }

constexpr double dot(WaveIndex a, WaveIndex b) {
    return static_cast<double>(a.k1) * b.k1 + static_cast<double>(a.k2) * b.k2;
}

/// Z^2_+ membership: k1 > 0 or (k1 = 0 and k2 > 0).
constexpr bool in_half_lattice(WaveIndex k) {
    return k.k1 > 0 || (k.k1 == 0 && k.k2 > 0);
}

/// Enumeration of the half-lattice modes with 1 <= |k| <= N, sorted
/// lexicographically by (k1, k2), plus O(1) index lookup. Immutable after
/// construction, safe to share between threads.
class HalfLattice {
  public:
    explicit HalfLattice(int N) : N_(N) {
        if (N < 1) throw std::invalid_argument("HalfLattice: N must be >= 1");
        lookup_.assign(static_cast<size_t>(2 * N + 1) * (2 * N + 1), -1);
        const long N2 = static_cast<long>(N) * N;
        for (int k1 = 0; k1 <= N; ++k1) {
            for (int k2 = -N; k2 <= N; ++k2) {
                WaveIndex k{k1, k2};
                if (!in_half_lattice(k) || sqnorm(k) > N2) continue;
                lookup_[dense(k)] = static_cast<int>(modes_.size());
                modes_.push_back(k);
            }
        }
    }

    int truncation() const { return N_; }
    int size() const { return static_cast<int>(modes_.size()); }
    const std::vector<WaveIndex>& modes() const { return modes_; }
    WaveIndex mode(int i) const { return modes_[static_cast<size_t>(i)]; }

    /// Index of k in the enumeration, or -1 if k is not a stored mode.
    int index(WaveIndex k) const {
        if (k.k1 < -N_ || k.k1 > N_ || k.k2 < -N_ || k.k2 > N_) return -1;
        return lookup_[dense(k)];
    }

    /// Shared cached instance per truncation radius.
    static std::shared_ptr<const HalfLattice> get(int N);

  private:
    size_t dense(WaveIndex k) const {
        return static_cast<size_t>(k.k1 + N_) * (2 * N_ + 1) + (k.k2 + N_);
    }

    int N_;
    std::vector<WaveIndex> modes_;
    std::vector<int> lookup_;
};

/// Dense full-lattice index map over [-N, N]^2 (the origin slot is unused).
struct FullGrid {
    int N;
    int side() const { return 2 * N + 1; }
    size_t size() const { return static_cast<size_t>(side()) * side(); }
    size_t at(WaveIndex k) const {
        return static_cast<size_t>(k.k1 + N) * side() + (k.k2 + N);
    }
    bool contains(WaveIndex k) const {
        return k.k1 >= -N && k.k1 <= N && k.k2 >= -N && k.k2 <= N;
    }
};

}  // namespace sns
