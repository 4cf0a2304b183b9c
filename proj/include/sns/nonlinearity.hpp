/// The truncated bilinear operator B^N of the Navier-Stokes nonlinearity in
/// the divergence-free spectral basis: its coefficient table, conservation
/// identities, the analytic second moment under mu_nu, and the lattice
/// convolution series behind its summability.
///
/// Coefficient convention: with the basis phased so that the reality
/// condition reads u_{-k} = conj(u_k), the plane-wave expansion of the
/// projected advection term Pi[(u.grad)v] gives the real coefficient
///   d_{h,k} = -(h_perp . k) ((k-h) . k) / (2 pi |h| |k-h| |k|)
/// of u_h v_{k-h} in the k-th component. The symmetrized coefficient
/// c_{h,k} = (d_{h,k} + d_{k-h,k})/2 satisfies c_{h,k} = c_{k-h,k}; the
/// identities checked downstream (symmetry, modulus bound, enstrophy
/// conservation, reality, mu_nu second moments) are invariant under the
/// overall basis phase.
#pragma once

#include <cstdint>
#include <vector>

#include "sns/field.hpp"
#include "sns/stats.hpp"

namespace sns {

/// d_{h,k}: coefficient of u_h v_{k-h}. Rejects h = 0, k = 0, h = k.
Complex bilinear_coefficient(WaveIndex h, WaveIndex k);

/// Symmetrized c_{h,k} = (d_{h,k} + d_{k-h,k}) / 2.
Complex symmetrized_coefficient(WaveIndex h, WaveIndex k);

/// Precomputed interaction table for B^N: for each k in Z^2_+ with |k| <= N,
/// all admissible h with h, k-h in Z^2_0 and |h|, |k-h| <= N. Immutable after
/// construction and shared read-only across workers.
class CoefficientTable {
  public:
    struct Entry {
        int h = 0;    // dense full-lattice index of h
        int kmh = 0;  // dense full-lattice index of k-h
        double w = 0.0;  // d_{h,k}; real in this basis phase
    };

    explicit CoefficientTable(int N);

    int truncation() const { return N_; }
    /// Entries for the i-th half-lattice mode.
    const Entry* begin(int i) const { return entries_.data() + offsets_[static_cast<size_t>(i)]; }
    const Entry* end(int i) const { return entries_.data() + offsets_[static_cast<size_t>(i) + 1]; }

  private:
    int N_;
    std::vector<size_t> offsets_;
    std::vector<Entry> entries_;
};

struct GalerkinSystem {
    double nu;
    int N;
    CoefficientTable table;

    GalerkinSystem(double nu_, int N_) : nu(nu_), N(N_), table(N_) {}
};

/// B^N(u): B_k = sum_h d_{h,k} u_h u_{k-h}, truncated at N. The output
/// satisfies conj(B_k) = B_{-k}, enforced by computing only k in Z^2_+.
SpectralField nonlinear_term(const SpectralField& u, const CoefficientTable& table);

/// B^N(u, v): k-th component sum_h d_{h,k} u_h v_{k-h}. Requires a common
/// truncation; bilinear_term(u, u) coincides with nonlinear_term(u).
SpectralField bilinear_term(const SpectralField& u, const SpectralField& v,
                            const CoefficientTable& table);

/// sum_{0 < |k| <= N} B_k^N(u) |k|^2 conj(u_k) over the full lattice
/// (Hermitian completion), with compensated summation. Identically zero for
/// the exact coefficients: enstrophy conservation.
Complex enstrophy_flux(const SpectralField& u, const CoefficientTable& table);

/// Exact value of E_{mu_nu} ||B^N(u)||^2_{H^{-r-1}}:
///   sum_k |k|^{-2r-2} sum_h (|c_{h,k}|^2 + Re(c_{h,k} conj(c_{k-h,k})))
///                          / (4 nu^2 |h|^2 |k-h|^2),
/// both sums truncated to |h|, |k-h|, |k| <= N.
double bnorm_second_moment_analytic(double nu, double r, int N);

/// Shape of the majorant of the second moment: sum_{2 <= |k| <= N}
/// log|k| / |k|^{2+2r} (constant-free).
double bnorm_majorant(double r, int N);

struct SeriesResult {
    double sum = 0.0;         // partial sum over 0 < |h| <= R, h != k
    double tail_bound = 0.0;  // rigorous bound on the discarded |h| > R part
};

/// S(k) = sum_{h in Z^2_0, h != k} 1/(|h|^2 |k-h|^2), summed in fixed
/// lexicographic order up to radius R (R >= 4|k|), with an integral-comparison
/// tail bound reported separately.
SeriesResult convolution_series(WaveIndex k, int R);

}  // namespace sns
