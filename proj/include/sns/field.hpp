/// Spectral representation of divergence-free velocity fields on the torus
/// and all the norms built on it (Sobolev, Lp, dyadic-block Besov), plus the
/// Stokes operator and the heat semigroup.
///
/// Coefficients are stored on the half-lattice only; the full field is
/// reconstructed through u_{-k} = conj(u_k), which enforces reality of the
/// velocity by construction.
#pragma once

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "sns/lattice.hpp"

namespace sns {

using Complex = std::complex<double>;

class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(int N)
        : layout_(HalfLattice::get(N)), coeff_(layout_->size(), Complex{}) {}

    int truncation() const { return layout_ ? layout_->truncation() : 0; }
    const HalfLattice& layout() const { return *layout_; }
    int size() const { return static_cast<int>(coeff_.size()); }

    Complex& operator[](int i) { return coeff_[static_cast<size_t>(i)]; }
    const Complex& operator[](int i) const { return coeff_[static_cast<size_t>(i)]; }

    /// Coefficient at k for any k in Z^2_0 with |k| <= N (Hermitian completion).
    Complex at(WaveIndex k) const;
    /// Set the half-lattice coefficient at k; k must be in Z^2_+ with |k| <= N.
    void set(WaveIndex k, Complex v);

    bool finite() const;
    double max_abs() const;

    friend SpectralField operator+(const SpectralField& a, const SpectralField& b);
    friend SpectralField operator-(const SpectralField& a, const SpectralField& b);
    friend SpectralField operator*(Complex s, const SpectralField& a);

  private:
    std::shared_ptr<const HalfLattice> layout_;
    std::vector<Complex> coeff_;
};

/// Scalar spectral coefficients (vorticity, stream function) on the same
/// half-lattice layout, expanded against the orthonormal scalar basis
/// e^{ik.xi}/(2 pi).
struct ScalarField {
    std::shared_ptr<const HalfLattice> layout;
    std::vector<Complex> coeff;

    explicit ScalarField(int N)
        : layout(HalfLattice::get(N)), coeff(layout->size(), Complex{}) {}
};

/// Velocity sampled on the uniform M x M grid xi_ij = 2 pi (i, j) / M.
struct GridField {
    int M = 0;
    std::vector<double> vx, vy;  // row-major, size M*M

    double& x(int i, int j) { return vx[static_cast<size_t>(i) * M + j]; }
    double& y(int i, int j) { return vy[static_cast<size_t>(i) * M + j]; }
    double x(int i, int j) const { return vx[static_cast<size_t>(i) * M + j]; }
    double y(int i, int j) const { return vy[static_cast<size_t>(i) * M + j]; }
};

/// e_k(xi) = (k_perp / (2 pi |k|)) e^{i k.xi}. Rejects k = 0.
std::array<Complex, 2> basis_eval(WaveIndex k, double xi1, double xi2);

/// Evaluate the truncated Fourier series on an M x M grid (M >= 4N+1).
/// The imaginary residue of the Hermitian-completed sum must stay below
/// 1e-12 of the field magnitude; it is checked and discarded.
GridField synthesize(const SpectralField& field, int M);

/// Scalar counterpart for ScalarField coefficients.
std::vector<double> synthesize_scalar(const ScalarField& field, int M);

/// sqrt( sum_{k in Z^2_0, |k|<=N} |u_k|^2 |k|^{2s} ), half-lattice entries
/// counted twice.
double sobolev_norm(const SpectralField& field, double s);

/// Trapezoidal quadrature norm ( (2pi/M)^2 sum |v_ij|^p )^{1/p}; p >= 1.
double lp_norm(const GridField& grid, double p);

/// Dyadic-block Besov norm: blocks keep exactly the modes 2^j <= |k| < 2^{j+1},
/// each block is synthesized at M = 8N+1 and measured in Lp.
double besov_norm(const SpectralField& field, double s, double p, double q);

/// S(u) = 2 sum_{k in Z^2_+, |k|<=N} |k|^2 |u_k|^2.
double enstrophy(const SpectralField& field);

/// (vorticity, stream) coefficients: omega_k = i |k| u_k, psi_k = -i u_k / |k|,
/// so that omega = curl u and u = grad_perp psi hold mode by mode.
std::pair<ScalarField, ScalarField> vorticity_and_stream(const SpectralField& field);

/// Stokes operator: coefficientwise multiplication by |k|^2.
SpectralField stokes_apply(const SpectralField& field);

/// Heat semigroup e^{-nu t A}: coefficientwise multiplication by e^{-nu t |k|^2}.
/// Rejects t < 0.
SpectralField heat_semigroup(const SpectralField& field, double t, double nu);

/// Hermitian completion onto the dense full-lattice array over [-N, N]^2.
std::vector<Complex> full_coefficients(const SpectralField& field);

// Snapshot CSV: header "# nu=<decimal> N=<int>", then rows "k1,k2,re,im" for
// the half-lattice modes in lexicographic (k1,k2) order, 17 significant digits.
void write_snapshot(const SpectralField& field, double nu, const std::string& path);
std::pair<SpectralField, double> read_snapshot(const std::string& path);

}  // namespace sns
