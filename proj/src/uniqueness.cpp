#include "sns/uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sns/rng.hpp"

namespace sns {

std::vector<std::string> validate_params(const BesovParams& bp) {
    if (bp.alpha <= Rational(1))
        throw std::invalid_argument("validate_params: alpha <= 1 (exponent alpha/(alpha-1) undefined)");
    if (bp.p < Rational(1) || bp.q < Rational(1))
        throw std::invalid_argument("validate_params: need p, q >= 1");

    std::vector<std::string> violated;
    const Rational two_over_p = Rational(2) / bp.p;
    if (!(Rational(0) < bp.s)) violated.push_back("0 < s");
    if (!(bp.s < bp.a)) violated.push_back("s < a");
    if (!(bp.a < two_over_p)) violated.push_back("a < 2/p");
    if (!((bp.s + two_over_p + Rational(1)) / Rational(2) < Rational(1)))
        violated.push_back("(s + 2/p + 1)/2 < 1");
    const Rational young = (-bp.a + two_over_p + Rational(1)) / Rational(2) *
                           (bp.alpha / (bp.alpha - Rational(1)));
    if (!(young < Rational(1)))
        violated.push_back("((-a + 2/p + 1)/2)(alpha/(alpha-1)) < 1");
    return violated;
}

Path constant_path(const SpectralField& x, int n_steps, double dt) {
    Path p;
    p.dt = dt;
    p.states.assign(static_cast<size_t>(n_steps) + 1, x);
    return p;
}

VtNorm vt_norm(const Path& v, const BesovParams& bp) {
    const double s = bp.s.value(), a = bp.a.value();
    const double p = bp.p.value(), q = bp.q.value(), alpha = bp.alpha.value();
    VtNorm n;
    double acc = 0.0;
    for (size_t i = 0; i < v.states.size(); ++i) {
        n.cnorm = std::max(n.cnorm, besov_norm(v.states[i], -s, p, q));
        if (i >= 1) acc += v.dt * std::pow(besov_norm(v.states[i], a, p, q), alpha);
    }
    n.lalpha = std::pow(acc, 1.0 / alpha);
    return n;
}

Path mild_map(const Path& v, const Path& u, const Path& u_tilde, const GalerkinSystem& sys) {
    const size_t n = v.states.size();
    if (u.states.size() != n || u_tilde.states.size() != n || u.dt != v.dt || u_tilde.dt != v.dt)
        throw std::invalid_argument("mild_map: time-grid mismatch");
    if (n < 2) throw std::invalid_argument("mild_map: need at least one step");
    const int N = sys.N;
    for (const auto& f : v.states)
        if (f.truncation() != N) throw std::invalid_argument("mild_map: truncation mismatch");

    const auto lat = HalfLattice::get(N);
    const int modes = lat->size();
    std::vector<double> decay(static_cast<size_t>(modes)), kernel(static_cast<size_t>(modes));
    for (int i = 0; i < modes; ++i) {
        const double lambda = sys.nu * static_cast<double>(sqnorm(lat->mode(i)));
        const double z = lambda * v.dt;
        decay[static_cast<size_t>(i)] = std::exp(-z);
        // int_{t_j}^{t_{j+1}} e^{-lambda (t_{j+1} - tau)} dtau = (1 - e^{-z})/lambda
        kernel[static_cast<size_t>(i)] = -std::expm1(-z) / lambda;
    }

    Path out;
    out.dt = v.dt;
    out.states.reserve(n);
    out.states.emplace_back(N);  // v(0) = 0

    std::vector<Complex> accum(static_cast<size_t>(modes), Complex{});
    for (size_t i = 1; i < n; ++i) {
        const SpectralField F = bilinear_term(u.states[i - 1], v.states[i - 1], sys.table) +
                                bilinear_term(v.states[i - 1], u_tilde.states[i - 1], sys.table);
        SpectralField w(N);
        for (int m = 0; m < modes; ++m) {
            accum[static_cast<size_t>(m)] =
                decay[static_cast<size_t>(m)] * accum[static_cast<size_t>(m)] + F[m];
            w[m] = -kernel[static_cast<size_t>(m)] * accum[static_cast<size_t>(m)];
        }
        out.states.push_back(std::move(w));
    }
    return out;
}

double bilinear_estimate_probe(const SpectralField& u, const SpectralField& v,
                               const BesovParams& bp, const CoefficientTable& table) {
    const double s = bp.s.value(), a = bp.a.value();
    const double p = bp.p.value(), q = bp.q.value();
    const double target_order = (-bp.s + bp.a - Rational(2) / bp.p - Rational(1)).value();
    const double den = besov_norm(u, -s, p, q) * besov_norm(v, a, p, q);
    if (den == 0.0) throw std::invalid_argument("bilinear_estimate_probe: zero denominator");
    return besov_norm(bilinear_term(u, v, table), target_order, p, q) / den;
}

double t_star(double C1, double C2, double N_T, const BesovParams& bp) {
    const double e1 = bp.exp_lalpha().value();
    const double e2 = bp.exp_cnorm().value();
    if (e1 <= 0.0 || e2 <= 0.0)
        throw std::invalid_argument("t_star: nonpositive exponent (parameters inadmissible)");
    const double b1 = std::pow(1.0 / (2.0 * C1 * N_T), 1.0 / e1);
    const double b2 = std::pow(1.0 / (2.0 * C2 * N_T), 1.0 / e2);
    return std::min(b1, b2);
}

std::vector<Path> make_probe_paths(int N, int n_steps, double dt, int count, uint64_t seed) {
    std::vector<Path> probes;
    const auto lat = HalfLattice::get(N);
    int jmax = 0;
    while ((1 << (jmax + 1)) <= N) ++jmax;
    for (int pidx = 0; pidx < count; ++pidx) {
        SpectralField base(N);
        if (pidx % 2 == 0) {
            // concentrated on one dyadic block, stressing one end of the scale
            const int j = static_cast<int>(rng::hash_key({seed, rng::kProbeTag,
                                                          static_cast<uint64_t>(pidx)}) %
                                           static_cast<uint64_t>(jmax + 1));
            const long lo = 1L << (2 * j), hi = 1L << (2 * j + 2);
            for (int i = 0; i < lat->size(); ++i) {
                const long k2 = sqnorm(lat->mode(i));
                if (k2 < lo || k2 >= hi) continue;
                base[i] = rng::gauss_pair({seed, rng::kProbeTag, static_cast<uint64_t>(pidx),
                                           static_cast<uint64_t>(i)}) /
                          std::sqrt(static_cast<double>(k2));
            }
        } else {
            base = sample_mu_nu({1.0, N, rng::hash_key({seed, rng::kProbeTag,
                                                        static_cast<uint64_t>(pidx)})});
        }
        Path path;
        path.dt = dt;
        path.states.reserve(static_cast<size_t>(n_steps) + 1);
        for (int i = 0; i <= n_steps; ++i) {
            // ramp modulation keeps v(0) = 0
            const double m = static_cast<double>(i) / n_steps;
            path.states.push_back(Complex{m, 0.0} * base);
        }
        probes.push_back(std::move(path));
    }
    return probes;
}

namespace {

Path truncate_path(const Path& p, int n_steps) {
    Path out;
    out.dt = p.dt;
    out.states.assign(p.states.begin(), p.states.begin() + n_steps + 1);
    return out;
}

/// Resample a path onto a finer/coarser uniform grid by left-nearest lookup.
Path resample_path(const Path& p, int n_steps, double dt) {
    Path out;
    out.dt = dt;
    out.states.reserve(static_cast<size_t>(n_steps) + 1);
    const int last = static_cast<int>(p.states.size()) - 1;
    for (int i = 0; i <= n_steps; ++i) {
        int j = static_cast<int>(std::floor(i * dt / p.dt));
        out.states.push_back(p.states[static_cast<size_t>(std::clamp(j, 0, last))]);
    }
    return out;
}

}  // namespace

ContractionReport contraction_factor(const Path& u, const Path& u_tilde, const BesovParams& bp,
                                     const GalerkinSystem& sys, double T, double dt, int probes,
                                     uint64_t seed) {
    if (probes < 10) throw std::invalid_argument("contraction_factor: need probes >= 10");
    if (!validate_params(bp).empty())
        throw std::invalid_argument("contraction_factor: inadmissible Besov parameters");
    const int n_total = static_cast<int>(std::lround(T / dt));
    if (n_total < 16) throw std::invalid_argument("contraction_factor: need T/dt >= 16");

    const double s = bp.s.value(), p = bp.p.value(), q = bp.q.value();
    double nu_norm = 0.0, nut_norm = 0.0;
    for (const auto& f : u.states) nu_norm = std::max(nu_norm, besov_norm(f, -s, p, q));
    for (const auto& f : u_tilde.states) nut_norm = std::max(nut_norm, besov_norm(f, -s, p, q));
    const double N_T = nu_norm + nut_norm;

    auto probe_paths = make_probe_paths(sys.N, n_total, dt, probes, seed);
    bool any_nonzero = false;
    for (const auto& v : probe_paths)
        if (vt_norm(v, bp).total() > 0.0) any_nonzero = true;
    if (!any_nonzero) throw std::invalid_argument("contraction_factor: degenerate probes");

    const double e1 = bp.exp_lalpha().value();
    const double e2 = bp.exp_cnorm().value();

    // T-sweep: halve the horizon, measure the output norms, fit C T^e through
    // the origin; keep the sup envelope so T* stays conservative.
    double sxy1 = 0.0, sxx1 = 0.0, sxy2 = 0.0, sxx2 = 0.0, env1 = 0.0, env2 = 0.0;
    for (int m = 0; m < 4; ++m) {
        const int n_m = n_total >> m;
        if (n_m < 4) break;
        const double T_m = n_m * dt;
        const Path u_m = truncate_path(u, n_m), ut_m = truncate_path(u_tilde, n_m);
        double y1 = 0.0, y2 = 0.0;
        for (const auto& vfull : probe_paths) {
            const Path v = truncate_path(vfull, n_m);
            const VtNorm vn = vt_norm(v, bp);
            if (vn.lalpha == 0.0) continue;
            const VtNorm wn = vt_norm(mild_map(v, u_m, ut_m, sys), bp);
            y1 = std::max(y1, wn.lalpha / (N_T * vn.lalpha));
            y2 = std::max(y2, wn.cnorm / (N_T * vn.lalpha));
        }
        const double x1 = std::pow(T_m, e1), x2 = std::pow(T_m, e2);
        sxy1 += x1 * y1;
        sxx1 += x1 * x1;
        sxy2 += x2 * y2;
        sxx2 += x2 * x2;
        env1 = std::max(env1, y1 / x1);
        env2 = std::max(env2, y2 / x2);
    }

    ContractionReport rep;
    rep.probes = probes;
    rep.N_T = N_T;
    rep.C1 = std::max(sxy1 / sxx1, env1);
    rep.C2 = std::max(sxy2 / sxx2, env2);
    rep.T_star = t_star(rep.C1, rep.C2, rep.N_T, bp);

    // Contraction factor at a horizon inside [0, T*], on its own fine grid.
    const int n_eval = 64;
    rep.factor_horizon = std::min(T, rep.T_star);
    const double dt_eval = rep.factor_horizon / n_eval;
    const Path u_eval = resample_path(u, n_eval, dt_eval);
    const Path ut_eval = resample_path(u_tilde, n_eval, dt_eval);
    const auto eval_probes = make_probe_paths(sys.N, n_eval, dt_eval, probes, seed + 1);
    double factor = 0.0;
    for (const auto& v : eval_probes) {
        const VtNorm vn = vt_norm(v, bp);
        if (vn.total() == 0.0) continue;
        const VtNorm wn = vt_norm(mild_map(v, u_eval, ut_eval, sys), bp);
        factor = std::max(factor, wn.total() / vn.total());
    }
    rep.measured_factor = factor;
    return rep;
}

double DistanceCurve::max_dist() const {
    double m = 0.0;
    for (double d : dist) m = std::max(m, d);
    return m;
}

DistanceCurve shared_noise_divergence(int N1, int N2, double nu, double T, double dt,
                                      uint64_t seed, const BesovParams& bp, int stride) {
    if (N1 > N2) throw std::invalid_argument("shared_noise_divergence: need N1 <= N2");
    const double s = bp.s.value(), p = bp.p.value(), q = bp.q.value();

    GalerkinSystem sys1(nu, N1), sys2(nu, N2);
    // Prefix property of the counter-based sampler: the N1 field is the
    // restriction of the N2 field at the same seed.
    const SpectralField x2 = sample_mu_nu({nu, N2, seed});
    const SpectralField x1 = sample_mu_nu({nu, N1, seed});

    SimulateOptions opts;
    opts.stride = stride;
    const uint64_t noise_seed = rng::hash_key({seed, rng::kNoiseTag});
    const Trajectory t1 = simulate(x1, sys1, T, dt, noise_seed, opts);
    const Trajectory t2 = simulate(x2, sys2, T, dt, noise_seed, opts);

    DistanceCurve curve;
    const size_t n = std::min(t1.snapshots.size(), t2.snapshots.size());
    const auto lat1 = HalfLattice::get(N1);
    for (size_t i = 0; i < n; ++i) {
        SpectralField diff = t2.snapshots[i];
        for (int m = 0; m < lat1->size(); ++m) {
            const WaveIndex k = lat1->mode(m);
            diff.set(k, diff.at(k) - t1.snapshots[i][m]);
        }
        curve.t.push_back(t1.times[i]);
        curve.dist.push_back(besov_norm(diff, -s, p, q));
    }
    return curve;
}

}  // namespace sns
