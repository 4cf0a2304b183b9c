/// Experiment drivers shared by the CLI and the acceptance suite. Each
/// driver returns a self-auditing report; drivers that produce plot-ready
/// data also write CSV artifacts when given a directory.
#pragma once

#include <string>

#include "sns/config.hpp"
#include "sns/dynamics.hpp"
#include "sns/stats.hpp"
#include "sns/uniqueness.hpp"

namespace sns {

/// Coefficient identities at truncation cfg.N: max symmetry error
/// |c_{h,k} - c_{k-h,k}| and max excess of 4 pi^2 |c|^2 / |k|^2 over 1.
ExperimentReport run_check_coefficients(const ExperimentConfig& cfg);

/// Max relative enstrophy flux over cfg.M mu_nu samples at cfg.N
/// (|flux| divided by the sum of the absolute flux terms).
ExperimentReport run_check_conservation(const ExperimentConfig& cfg);

/// Gaussian moment identity at orders n = 1..cfg.n on three gamma profiles
/// (single mode, two weighted modes, an 8-mode spread), cfg.M samples each.
ExperimentReport run_moment_test(const ExperimentConfig& cfg);

/// Monte-Carlo E||B^N||^2_{H^{-r-1}} vs the analytic value (cfg.N, cfg.M
/// samples), plus the variation of analytic * nu^2 / majorant over
/// N in {4, 8, 16, 24}.
ExperimentReport run_bnorm_test(const ExperimentConfig& cfg);

/// E||B^{2N} - B^N||^2_{H^{-r-1}} over N = 4, 8, 16 at cfg.M samples;
/// gates on monotone decrease.
ExperimentReport run_galerkin_convergence(const ExperimentConfig& cfg);

/// Convolution series table for |k| = 2..cfg.kmax at radius cfg.radius;
/// gates the shape S(k)|k|^2/log|k| against 10x its value at |k| = 4 and the
/// relative tail bound. Writes `|k|,S,shape,tail_bound` rows to table_csv if
/// nonempty.
ExperimentReport run_series_bound(const ExperimentConfig& cfg,
                                  const std::string& table_csv = "");

/// Stationarity of mu_nu under the (linear or full) dynamics; wraps
/// invariance_test with cfg's parameters. time_average_T > 0 adds the
/// time-averaged B-norm row (full mode only).
ExperimentReport run_invariance(const ExperimentConfig& cfg, DynamicsMode mode,
                                double time_average_T = 0.0);

/// Contraction machinery at cfg's Besov block: parameter validation, the
/// closed-form T* arithmetic check, measured C1/C2/T*, contraction factor
/// < 1 at the measured horizon, and geometric decay of mild_map iteration.
ExperimentReport run_contraction(const ExperimentConfig& cfg);

/// Shared-noise Galerkin divergence for the pairs (n1, n2), (n2, 2 n2),
/// (3 n1, 3 n2) over 5 seeds; gates on a nonincreasing time-max distance
/// across the sequence for at least 4 of 5 seeds. Writes per-seed `t,distance`
/// curves under curve_dir if nonempty.
ExperimentReport run_divergence(const ExperimentConfig& cfg,
                                const std::string& curve_dir = "");

}  // namespace sns
