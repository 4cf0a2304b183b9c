#include "sns/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "sns/rng.hpp"

namespace sns {

Complex NoiseStream::increment(long step, WaveIndex k) const {
    if (!in_half_lattice(k))
        throw std::invalid_argument("NoiseStream: wave index outside Z^2_+");
    // gauss_pair has E|.|^2 = 2; scale so E|dbeta|^2 = dt.
    return std::sqrt(0.5 * dt) *
           rng::gauss_pair({seed, rng::kNoiseTag, static_cast<uint64_t>(step),
                            rng::signed_word(k.k1), rng::signed_word(k.k2)});
}

namespace {

SpectralField exp_euler_update(const SpectralField& u, const GalerkinSystem& sys, double dt,
                               const SpectralField* B, const std::vector<Complex>& increments) {
    if (dt <= 0.0) throw std::invalid_argument("step: dt must be positive");
    if (static_cast<int>(increments.size()) != u.size())
        throw std::invalid_argument("step: increment count does not match mode count");
    SpectralField next(u.truncation());
    const auto& lat = u.layout();
    for (int i = 0; i < lat.size(); ++i) {
        const double lambda = sys.nu * static_cast<double>(sqnorm(lat.mode(i)));
        const double z = lambda * dt;
        const double decay = std::exp(-z);
        const double phi = -std::expm1(-z) / z;  // (1 - e^{-z})/z
        const double eta_var = -std::expm1(-2.0 * z) / (2.0 * lambda);
        Complex v = decay * u[i] + std::sqrt(eta_var / dt) * increments[static_cast<size_t>(i)];
        if (B) v -= (phi * dt) * (*B)[i];
        next[i] = v;
    }
    if (!next.finite()) throw std::runtime_error("step: non-finite state after update");
    return next;
}

}  // namespace

SpectralField step(const SpectralField& u, const GalerkinSystem& sys, double dt,
                   const std::vector<Complex>& increments, DynamicsMode mode) {
    if (mode == DynamicsMode::full) {
        const SpectralField B = nonlinear_term(u, sys.table);
        return exp_euler_update(u, sys, dt, &B, increments);
    }
    return exp_euler_update(u, sys, dt, nullptr, increments);
}

Trajectory simulate(const SpectralField& x0, const GalerkinSystem& sys, double T, double dt,
                    uint64_t seed, const SimulateOptions& opts) {
    if (T <= 0.0 || dt <= 0.0 || dt > T)
        throw std::invalid_argument("simulate: need 0 < dt <= T");
    const long nsteps = std::lround(T / dt);
    const NoiseStream noise{seed, dt};
    const auto& lat = x0.layout();
    const int tracked_idx = lat.index(opts.tracked);

    Trajectory traj;
    traj.tracked = opts.tracked;
    const double s0 = enstrophy(x0);
    const double guard = opts.blowup_factor * std::max(s0, 1e-12);

    SpectralField u = x0;
    std::vector<Complex> incr(static_cast<size_t>(x0.size()));
    auto record = [&](long step_no, const SpectralField& state, const SpectralField* B) {
        ObservableRecord rec;
        rec.t = static_cast<double>(step_no) * dt;
        rec.enstrophy = enstrophy(state);
        rec.h_norm_msq = std::pow(sobolev_norm(state, -opts.s_obs), 2);
        if (opts.mode == DynamicsMode::full) {
            SpectralField local_b;
            if (!B) {
                local_b = nonlinear_term(state, sys.table);
                B = &local_b;
            }
            rec.bnorm_msq = std::pow(sobolev_norm(*B, -opts.r_obs - 1.0), 2);
        }
        if (tracked_idx >= 0) rec.abs_u_sq = std::norm(state[tracked_idx]);
        traj.times.push_back(rec.t);
        traj.observables.push_back(rec);
        if (opts.keep_snapshots) traj.snapshots.push_back(state);
    };

    record(0, u, nullptr);
    for (long n = 0; n < nsteps; ++n) {
        for (int i = 0; i < lat.size(); ++i)
            incr[static_cast<size_t>(i)] = noise.increment(n, lat.mode(i));
        SpectralField B;
        const SpectralField* bp = nullptr;
        if (opts.mode == DynamicsMode::full) {
            B = nonlinear_term(u, sys.table);
            bp = &B;
        }
        u = exp_euler_update(u, sys, dt, bp, incr);
        const double s = enstrophy(u);
        if (!std::isfinite(s) || s > guard) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "simulate: blow-up guard tripped at t=%.6g (enstrophy %.3e, initial %.3e)",
                          (n + 1) * dt, s, s0);
            throw std::runtime_error(msg);
        }
        if ((n + 1) % opts.stride == 0 || n + 1 == nsteps) record(n + 1, u, bp ? &B : nullptr);
    }
    return traj;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path, uint64_t config_hash) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_trajectory_csv: cannot open " + path);
    char buf[256];
    std::snprintf(buf, sizeof buf, "# units: t [time], norms squared; config_hash=%016llx\n",
                  static_cast<unsigned long long>(config_hash));
    os << buf << "t,enstrophy,h_norm_msq,bnorm_msq,mode_k1,mode_k2,abs_u_sq\n";
    for (const auto& r : traj.observables) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g\n", r.t, r.enstrophy,
                      r.h_norm_msq, r.bnorm_msq, traj.tracked.k1, traj.tracked.k2, r.abs_u_sq);
        os << buf;
    }
}

ExperimentReport invariance_test(const GalerkinSystem& sys, double T, double dt, int M,
                                 uint64_t seed, const InvarianceOptions& opts) {
    if (M < 100) throw std::invalid_argument("invariance_test: need M >= 100");

    const auto lat = HalfLattice::get(sys.N);
    std::vector<RunningStat> mode_stats(static_cast<size_t>(lat->size()));
    RunningStat ens_stat, hnorm_stat;

    SimulateOptions sim;
    sim.mode = opts.mode;
    sim.keep_snapshots = true;
    sim.stride = 1 << 30;  // record the final state only
    sim.s_obs = opts.s_obs;
    sim.r_obs = opts.r_obs;

    for (int m = 0; m < M; ++m) {
        MeasureParams mp{sys.nu, sys.N, rng::hash_key({seed, 0x696e69ULL, static_cast<uint64_t>(m)})};
        const SpectralField x0 = sample_mu_nu(mp);
        const uint64_t noise_seed = rng::hash_key({seed, 0x77ULL, static_cast<uint64_t>(m)});
        // T = 0 is the degenerate identity check: statistics of mu_nu itself.
        const Trajectory traj =
            T > 0.0 ? simulate(x0, sys, T, dt, noise_seed, sim) : Trajectory{};
        const SpectralField& uT = T > 0.0 ? traj.snapshots.back() : x0;
        for (int i = 0; i < lat->size(); ++i)
            mode_stats[static_cast<size_t>(i)].add(std::norm(uT[i]));
        ens_stat.add(enstrophy(uT));
        hnorm_stat.add(std::pow(sobolev_norm(uT, -opts.s_obs), 2));
    }

    ExperimentReport rep;
    rep.experiment = opts.mode == DynamicsMode::full ? "invariance_test" : "invariance_test_linear";
    rep.seed = seed;
    rep.version = kVersion;

    char name[64];
    for (int i = 0; i < lat->size(); ++i) {
        const WaveIndex k = lat->mode(i);
        std::snprintf(name, sizeof name, "abs_u_sq(%d,%d)", k.k1, k.k2);
        rep.rows.push_back(make_row(name, mode_stats[static_cast<size_t>(i)].mean(),
                                    mode_covariance(sys.nu, k),
                                    mode_stats[static_cast<size_t>(i)].se()));
    }
    const double ens_target = static_cast<double>(lat->size()) / sys.nu;  // = #full modes/(2 nu)
    rep.rows.push_back(make_row("enstrophy", ens_stat.mean(), ens_target, ens_stat.se()));
    double hnorm_target = 0.0;
    for (int i = 0; i < lat->size(); ++i) {
        const WaveIndex k = lat->mode(i);
        hnorm_target += 2.0 * std::pow(static_cast<double>(sqnorm(k)), -opts.s_obs) *
                        mode_covariance(sys.nu, k);
    }
    rep.rows.push_back(make_row("h_norm_msq", hnorm_stat.mean(), hnorm_target, hnorm_stat.se()));

    if (opts.mode == DynamicsMode::full && opts.time_average_T > 0.0) {
        MeasureParams mp{sys.nu, sys.N, rng::hash_key({seed, 0x6c6f6e67ULL})};
        SimulateOptions avg = sim;
        avg.keep_snapshots = false;
        avg.stride = 1;
        const Trajectory run = simulate(sample_mu_nu(mp), sys, opts.time_average_T, dt,
                                        rng::hash_key({seed, 0x6c6eULL}), avg);
        // batch means over the stationary run
        const int nbatch = 25;
        const size_t per = run.observables.size() / nbatch;
        RunningStat batches;
        for (int b = 0; b < nbatch; ++b) {
            double acc = 0.0;
            for (size_t i = 0; i < per; ++i) acc += run.observables[b * per + i].bnorm_msq;
            batches.add(acc / static_cast<double>(per));
        }
        const double target = bnorm_second_moment_analytic(sys.nu, opts.r_obs, sys.N);
        rep.rows.push_back(make_row("bnorm_msq_time_avg", batches.mean(), target, batches.se()));
    }
    return rep;
}

}  // namespace sns
