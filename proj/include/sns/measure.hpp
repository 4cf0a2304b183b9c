/// The centered Gaussian measure mu_nu on spectral coefficients, with
/// per-mode variance E|u_k|^2 = 1/(2 nu |k|^2), its exact sampler, and the
/// closed-form moment identities used as statistical targets.
#pragma once

#include <cstdint>
#include <map>

#include "sns/field.hpp"
#include "sns/stats.hpp"

namespace sns {

struct MeasureParams {
    double nu = 1.0;
    int N = 8;
    uint64_t seed = 0;
};

/// E_{mu_nu} |u_k|^2 = 1/(2 nu |k|^2).
double mode_covariance(double nu, WaveIndex k);

/// Exact sampler: u_k = sigma (g1 + i g2), sigma^2 = 1/(4 nu |k|^2), modes
/// independent across Z^2_+. Counter-based per-mode streams keyed by
/// (seed, k1, k2), so the N=4 sample is a prefix of the N=8 sample.
SpectralField sample_mu_nu(const MeasureParams& params);

/// (2n)! / (2^n n!), the 2n-th moment coefficient of a standard real Gaussian.
unsigned long long moment_coefficient(int n);

/// Ordered map keyed by (k1, k2) for reproducible iteration.
using GammaProfile = std::map<std::pair<int, int>, Complex>;

/// Monte-Carlo check of the Gaussian moment identity for the real linear
/// statistic X = sqrt(2) Re sum_{k in Z^2_+} gamma_k u_k:
///   E X^{2n} = (2n)!/(2^n n!) [ sum_k |gamma_k|^2 E|u_k|^2 ]^n.
/// (X is the Hermitian-symmetric full-lattice pairing of gamma with u,
/// normalized so the bracket runs over the stored half-lattice.)
ExperimentReport moment_test(const MeasureParams& params, const GammaProfile& gamma, int n,
                             long samples);

/// Truncated closed form of the moment chain for E ||u||^{2n}_{H^{-s}_{2n}}:
///   coeff(n) * 4 pi^2 * [ sum_{k in Z^2_0, |k|<=N} |k|^{-2s} (1/4pi^2)
///                         * mode_covariance(nu, k) ]^n,
/// using |e_k(xi)| = 1/(2 pi).
double hnorm_expectation_analytic(double nu, double s, int n, int N);

}  // namespace sns
