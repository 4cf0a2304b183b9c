// Tests of the contraction machinery: exact rational parameter validation,
// the V_T norm, the mild convolution map against a direct-sum oracle, probe
// estimates, and the shared-noise divergence harness.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "sns/rng.hpp"
#include "sns/uniqueness.hpp"

using namespace sns;

namespace {

SpectralField random_field(int N, uint64_t seed) {
    SpectralField u(N);
    for (int i = 0; i < u.size(); ++i)
        u[i] = rng::gauss_pair({seed, 0x756eULL, static_cast<uint64_t>(i)});
    return u;
}

// O(n^2) per-mode evaluation of the mild convolution:
//   w_i = -kernel * sum_{j=0}^{i-1} decay^{i-1-j} F_j,  F_j = B(u_j,v_j) + B(v_j,u~_j)
Path mild_map_oracle(const Path& v, const Path& u, const Path& ut, const GalerkinSystem& sys) {
    const auto lat = HalfLattice::get(sys.N);
    const int n = v.steps();
    Path out;
    out.dt = v.dt;
    out.states.assign(static_cast<size_t>(n) + 1, SpectralField(sys.N));
    std::vector<SpectralField> F;
    for (int j = 0; j < n; ++j)
        F.push_back(bilinear_term(u.states[static_cast<size_t>(j)],
                                  v.states[static_cast<size_t>(j)], sys.table) +
                    bilinear_term(v.states[static_cast<size_t>(j)],
                                  ut.states[static_cast<size_t>(j)], sys.table));
    for (int i = 1; i <= n; ++i) {
        for (int m = 0; m < lat->size(); ++m) {
            const double lambda = sys.nu * static_cast<double>(sqnorm(lat->mode(m)));
            const double decay = std::exp(-lambda * v.dt);
            const double kernel = -std::expm1(-lambda * v.dt) / lambda;
            Complex acc{};
            for (int j = 0; j < i; ++j)
                acc += std::pow(decay, i - 1 - j) * F[static_cast<size_t>(j)][m];
            out.states[static_cast<size_t>(i)][m] = -kernel * acc;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("parameter validation: exact rational clauses") {
    const BesovParams good;  // s=1/6, a=1/2, p=q=alpha=3
    CHECK(validate_params(good).empty());

    BesovParams bad = good;
    bad.s = Rational(0);
    auto v = validate_params(bad);
    CHECK(std::find(v.begin(), v.end(), "0 < s") != v.end());

    bad = good;
    bad.a = Rational(1, 12);  // below s
    v = validate_params(bad);
    CHECK(std::find(v.begin(), v.end(), "s < a") != v.end());

    bad = good;
    bad.p = Rational(5);  // a = 1/2 >= 2/5
    v = validate_params(bad);
    CHECK(std::find(v.begin(), v.end(), "a < 2/p") != v.end());

    bad = good;
    bad.alpha = Rational(1);
    CHECK_THROWS_AS(validate_params(bad), std::invalid_argument);
    bad.alpha = Rational(3);
    bad.p = Rational(1, 2);
    CHECK_THROWS_AS(validate_params(bad), std::invalid_argument);
}

TEST_CASE("admissibility forces p > 2") {
    // scan a rational grid; every accepted parameter set must have p > 2,
    // since 0 < s, a < 2/p and (s + 2/p + 1)/2 < 1 give 2/p < 1
    int accepted = 0;
    for (long sn = 1; sn <= 4; ++sn)
        for (long an = 1; an <= 6; ++an)
            for (long pn = 2; pn <= 10; ++pn)
                for (long aln = 2; aln <= 6; ++aln) {
                    const BesovParams bp{Rational(sn, 12), Rational(an, 6), Rational(pn, 2),
                                         Rational(pn, 2), Rational(aln, 1)};
                    if (validate_params(bp).empty()) {
                        ++accepted;
                        CHECK(bp.p > Rational(2));
                    }
                }
    CHECK(accepted > 0);
}

TEST_CASE("exponent identities at the reference parameters") {
    const BesovParams bp;
    CHECK(bp.exp_lalpha() == Rational(1, 12));
    CHECK(bp.exp_cnorm() == Rational(1, 8));
}

TEST_CASE("t_star: closed form and monotonicity") {
    const BesovParams bp;
    CHECK(std::abs(t_star(1.0, 1.0, 1.0, bp) - std::ldexp(1.0, -12)) < 1e-15);
    CHECK(t_star(1.0, 1.0, 2.0, bp) < t_star(1.0, 1.0, 1.0, bp));
    CHECK(t_star(2.0, 1.0, 1.0, bp) < t_star(1.0, 1.0, 1.0, bp));
}

TEST_CASE("constant path and V_T norm closed forms") {
    const BesovParams bp;
    const SpectralField x = random_field(4, 1);
    const int n = 8;
    const double dt = 0.125;
    const Path p = constant_path(x, n, dt);
    CHECK(p.steps() == n);
    CHECK(p.horizon() == doctest::Approx(1.0).epsilon(1e-15));

    const VtNorm vn = vt_norm(p, bp);
    const double s = bp.s.value(), a = bp.a.value(), pp = bp.p.value(), q = bp.q.value();
    CHECK(vn.cnorm == doctest::Approx(besov_norm(x, -s, pp, q)).epsilon(1e-12));
    // constant path: (n dt)^{1/alpha} ||x||_{B^a}
    CHECK(vn.lalpha ==
          doctest::Approx(std::pow(n * dt, 1.0 / 3.0) * besov_norm(x, a, pp, q)).epsilon(1e-12));

    const Path z = constant_path(SpectralField(4), n, dt);
    CHECK(vt_norm(z, bp).total() == 0.0);
}

TEST_CASE("mild map: zero cases, linearity, oracle, and mismatch rejection") {
    const int N = 4;
    const GalerkinSystem sys(1.0, N);
    const int n = 6;
    const double dt = 0.05;
    const Path u = constant_path(random_field(N, 2), n, dt);
    const Path ut = constant_path(random_field(N, 3), n, dt);
    const Path zero = constant_path(SpectralField(N), n, dt);

    // v = 0 maps to 0; u = u~ = 0 maps anything to 0
    for (const auto& st : mild_map(zero, u, ut, sys).states) CHECK(st.max_abs() == 0.0);
    const auto& probes = make_probe_paths(N, n, dt, 2, 77);
    for (const auto& st : mild_map(probes[0], zero, zero, sys).states)
        CHECK(st.max_abs() == 0.0);

    // output starts at zero and matches the direct-sum oracle
    const Path w = mild_map(probes[0], u, ut, sys);
    CHECK(w.states[0].max_abs() == 0.0);
    const Path ref = mild_map_oracle(probes[0], u, ut, sys);
    double scale = 0.0;
    for (const auto& st : ref.states) scale = std::max(scale, st.max_abs());
    for (size_t i = 0; i < w.states.size(); ++i)
        for (int m = 0; m < w.states[i].size(); ++m)
            CHECK(std::abs(w.states[i][m] - ref.states[i][m]) < 1e-12 * scale);

    // linearity in v
    Path vsum = probes[0];
    for (size_t i = 0; i < vsum.states.size(); ++i)
        vsum.states[i] = vsum.states[i] + probes[1].states[i];
    const Path wa = mild_map(probes[0], u, ut, sys);
    const Path wb = mild_map(probes[1], u, ut, sys);
    const Path wsum = mild_map(vsum, u, ut, sys);
    for (size_t i = 0; i < wsum.states.size(); ++i)
        for (int m = 0; m < wsum.states[i].size(); ++m)
            CHECK(std::abs(wsum.states[i][m] - wa.states[i][m] - wb.states[i][m]) <
                  1e-12 * std::max(scale, 1.0));

    const Path short_path = constant_path(random_field(N, 4), n - 1, dt);
    CHECK_THROWS_AS(mild_map(short_path, u, ut, sys), std::invalid_argument);
    const Path wrong_n = constant_path(random_field(3, 5), n, dt);
    CHECK_THROWS_AS(mild_map(wrong_n, wrong_n, wrong_n, sys), std::invalid_argument);
}

TEST_CASE("bilinear estimate probe") {
    const int N = 6;
    const GalerkinSystem sys(1.0, N);
    const BesovParams bp;
    const SpectralField u = random_field(N, 6), v = random_field(N, 7);
    const double base = bilinear_estimate_probe(u, v, bp, sys.table);
    CHECK(base > 0.0);
    CHECK(std::isfinite(base));
    // invariant under independent rescaling of both arguments
    const double scaled = bilinear_estimate_probe(Complex{3.0, 0.0} * u,
                                                  Complex{0.25, 0.0} * v, bp, sys.table);
    CHECK(scaled == doctest::Approx(base).epsilon(1e-12));
    CHECK_THROWS_AS(bilinear_estimate_probe(SpectralField(N), v, bp, sys.table),
                    std::invalid_argument);
}

TEST_CASE("probe paths: determinism, ramp start, count") {
    const auto a = make_probe_paths(4, 8, 0.01, 6, 31);
    const auto b = make_probe_paths(4, 8, 0.01, 6, 31);
    REQUIRE(a.size() == 6);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].states.size() == 9);
        CHECK(a[i].states[0].max_abs() == 0.0);  // ramp keeps v(0) = 0
        CHECK(a[i].states.back().max_abs() > 0.0);
        for (int m = 0; m < a[i].states.back().size(); ++m)
            CHECK(a[i].states.back()[m] == b[i].states.back()[m]);
    }
}

TEST_CASE("contraction factor: small run produces a consistent report") {
    const int N = 4;
    const GalerkinSystem sys(1.0, N);
    const BesovParams bp;
    const double T = 0.032, dt = 0.002;  // 16 steps
    const Path u = constant_path(sample_mu_nu({1.0, N, 91}), 16, dt);
    const Path ut = constant_path(sample_mu_nu({1.0, N, 92}), 16, dt);

    CHECK_THROWS_AS(contraction_factor(u, ut, bp, sys, T, dt, 9), std::invalid_argument);

    const ContractionReport cr = contraction_factor(u, ut, bp, sys, T, dt, 10);
    CHECK(cr.probes == 10);
    CHECK(cr.C1 > 0.0);
    CHECK(cr.C2 > 0.0);
    CHECK(cr.N_T > 0.0);
    CHECK(cr.T_star > 0.0);
    CHECK(cr.factor_horizon <= std::min(T, cr.T_star) + 1e-15);
    CHECK(cr.measured_factor > 0.0);
    CHECK(cr.measured_factor < 1.0);
}

TEST_CASE("shared-noise divergence: degenerate and initial-distance checks") {
    const BesovParams bp;
    CHECK_THROWS_AS(shared_noise_divergence(8, 4, 1.0, 0.1, 0.01, 1, bp),
                    std::invalid_argument);

    // N1 = N2: identical systems, identical noise, zero distance throughout
    const DistanceCurve same = shared_noise_divergence(4, 4, 1.0, 0.05, 0.01, 21, bp, 1);
    for (double d : same.dist) CHECK(d == 0.0);

    // t = 0 distance is the Besov norm of the modes with N1 < |k| <= N2
    const int N1 = 3, N2 = 6;
    const DistanceCurve curve = shared_noise_divergence(N1, N2, 1.0, 0.05, 0.01, 22, bp, 1);
    SpectralField tail = sample_mu_nu({1.0, N2, 22});
    const auto lat1 = HalfLattice::get(N1);
    for (int m = 0; m < lat1->size(); ++m) tail.set(lat1->mode(m), Complex{});
    CHECK(curve.t[0] == 0.0);
    CHECK(curve.dist[0] ==
          doctest::Approx(besov_norm(tail, -bp.s.value(), bp.p.value(), bp.q.value()))
              .epsilon(1e-12));
    CHECK(curve.max_dist() >= curve.dist[0]);
}
