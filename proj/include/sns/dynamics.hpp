/// Time integration of the truncated stochastic Navier-Stokes system
///   du_k + [nu |k|^2 u_k + B_k^N(u)] dt = dbeta_k
/// by an exponential Euler scheme (exact Ornstein-Uhlenbeck part, explicit
/// nonlinearity), plus the statistical invariance checks for mu_nu.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sns/measure.hpp"
#include "sns/nonlinearity.hpp"

namespace sns {

/// Seeded generator of mode-wise complex Brownian increments with
/// E|dbeta_k|^2 = dt, independent across k in Z^2_+ and across steps;
/// dbeta_{-k} = conj(dbeta_k) by construction. Each increment is a pure
/// function of (seed, step, k), so the stream at truncation N is a
/// restriction of the stream at any larger truncation.
struct NoiseStream {
    uint64_t seed = 0;
    double dt = 1e-3;

    Complex increment(long step, WaveIndex k) const;
};

enum class DynamicsMode { full, linear_only };

/// One exponential Euler step:
///   u_k <- e^{-nu|k|^2 dt} u_k - phi(nu|k|^2 dt) dt B_k^N(u) + eta_k,
/// phi(z) = (1 - e^{-z})/z, eta_k complex Gaussian with variance
/// (1 - e^{-2 nu |k|^2 dt})/(2 nu |k|^2) built from the stream increment.
/// `increments` holds dbeta_k per half-lattice mode index. Throws on
/// non-finite state.
SpectralField step(const SpectralField& u, const GalerkinSystem& sys, double dt,
                   const std::vector<Complex>& increments, DynamicsMode mode = DynamicsMode::full);

struct ObservableRecord {
    double t = 0.0;
    double enstrophy = 0.0;
    double h_norm_msq = 0.0;  // ||u||^2_{H^{-s_obs}}
    double bnorm_msq = 0.0;   // ||B^N(u)||^2_{H^{-r_obs-1}} (0 in linear-only mode)
    double abs_u_sq = 0.0;    // |u_k|^2 of the tracked mode
};

struct Trajectory {
    std::vector<double> times;                 // observable times, times[0] = 0
    std::vector<ObservableRecord> observables;
    std::vector<SpectralField> snapshots;      // states at the observable times
    WaveIndex tracked{1, 0};
};

struct SimulateOptions {
    DynamicsMode mode = DynamicsMode::full;
    int stride = 10;          // record every `stride` steps
    bool keep_snapshots = true;
    double s_obs = 1.0 / 6.0;
    double r_obs = 0.5;
    WaveIndex tracked{1, 0};
    double blowup_factor = 1e6;  // abort when enstrophy exceeds this x initial
};

/// Repeated step application from x0 over [0, T]; deterministic given seed.
Trajectory simulate(const SpectralField& x0, const GalerkinSystem& sys, double T, double dt,
                    uint64_t seed, const SimulateOptions& opts = {});

/// Observable CSV: `t,enstrophy,h_norm_msq,bnorm_msq,mode_k1,mode_k2,abs_u_sq`.
void write_trajectory_csv(const Trajectory& traj, const std::string& path,
                          uint64_t config_hash = 0);

struct InvarianceOptions {
    DynamicsMode mode = DynamicsMode::full;
    double s_obs = 1.0 / 6.0;
    double r_obs = 0.5;
    /// Length of the single long stationary run used for the time-averaged
    /// B-norm comparison (full mode only; 0 disables it).
    double time_average_T = 0.0;
};

/// Statistical check of the invariance of mu_nu: draws M initial fields from
/// mu_nu, runs the dynamics to time T, and compares ensemble statistics at
/// t = T against their exact mu_nu targets (per-mode |u_k|^2, enstrophy,
/// ||u||^2_{H^{-s}}, and the time-averaged ||B^N||^2_{H^{-r-1}} along a long
/// stationary run). Gates at 3 SE; the time-discretization bias is whatever
/// |estimate - target| the report shows.
ExperimentReport invariance_test(const GalerkinSystem& sys, double T, double dt, int M,
                                 uint64_t seed, const InvarianceOptions& opts = {});

}  // namespace sns
