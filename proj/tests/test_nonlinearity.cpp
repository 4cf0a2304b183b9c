// Tests of the truncated bilinear operator: coefficient identities, the
// convolution against a brute-force full-lattice oracle, enstrophy
// conservation, second moments, and the lattice series with its tail bound.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sns/measure.hpp"
#include "sns/nonlinearity.hpp"
#include "sns/rng.hpp"

using namespace sns;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// B_k = sum over the full lattice, using Hermitian completion through at().
Complex brute_force_component(const SpectralField& u, const SpectralField& v, WaveIndex k,
                              int N) {
    Complex acc{};
    const long N2 = static_cast<long>(N) * N;
    for (int h1 = -N; h1 <= N; ++h1) {
        for (int h2 = -N; h2 <= N; ++h2) {
            const WaveIndex h{h1, h2};
            const WaveIndex kmh = k - h;
            if (is_zero(h) || h == k || is_zero(kmh)) continue;
            if (sqnorm(h) > N2 || sqnorm(kmh) > N2) continue;
            acc += bilinear_coefficient(h, k) * u.at(h) * v.at(kmh);
        }
    }
    return acc;
}

SpectralField random_field(int N, uint64_t seed) {
    SpectralField u(N);
    for (int i = 0; i < u.size(); ++i)
        u[i] = rng::gauss_pair({seed, 0xb111ULL, static_cast<uint64_t>(i)});
    return u;
}

}  // namespace

TEST_CASE("bilinear coefficient closed forms") {
    // h parallel to k: h_perp . k = 0
    CHECK(std::abs(bilinear_coefficient({1, 0}, {2, 0})) < 1e-15);
    CHECK(std::abs(bilinear_coefficient({0, 2}, {0, 3})) < 1e-15);

    // h = (1,0), k = (2,1): d = -3/(2 pi sqrt(10))
    const Complex d = bilinear_coefficient({1, 0}, {2, 1});
    CHECK(d.imag() == 0.0);
    CHECK(d.real() == doctest::Approx(-3.0 / (kTwoPi * std::sqrt(10.0))).epsilon(1e-14));

    // symmetrization cancels at h = (1,0), k = (1,1) ...
    CHECK(std::abs(symmetrized_coefficient({1, 0}, {1, 1})) < 1e-15);
    // ... and gives modulus 1/(4 pi sqrt(10)) at h = (1,0), k = (2,1)
    CHECK(std::abs(symmetrized_coefficient({1, 0}, {2, 1})) ==
          doctest::Approx(1.0 / (2.0 * kTwoPi * std::sqrt(10.0))).epsilon(1e-14));

    CHECK_THROWS_AS(bilinear_coefficient({0, 0}, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(bilinear_coefficient({1, 0}, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(bilinear_coefficient({1, 0}, {1, 0}), std::invalid_argument);
}

TEST_CASE("symmetrized coefficient: symmetry and modulus bound") {
    const int N = 6;
    const long N2 = static_cast<long>(N) * N;
    for (int k1 = -N; k1 <= N; ++k1) {
        for (int k2 = -N; k2 <= N; ++k2) {
            const WaveIndex k{k1, k2};
            if (is_zero(k) || sqnorm(k) > N2) continue;
            for (int h1 = -N; h1 <= N; ++h1) {
                for (int h2 = -N; h2 <= N; ++h2) {
                    const WaveIndex h{h1, h2};
                    const WaveIndex kmh = k - h;
                    if (is_zero(h) || is_zero(kmh)) continue;
                    if (sqnorm(h) > N2 || sqnorm(kmh) > N2) continue;
                    const Complex c = symmetrized_coefficient(h, k);
                    CHECK(std::abs(c - symmetrized_coefficient(kmh, k)) < 1e-14);
                    CHECK(std::norm(c) <=
                          static_cast<double>(sqnorm(k)) / (kTwoPi * kTwoPi) + 1e-13);
                }
            }
        }
    }
}

TEST_CASE("coefficient table enumerates exactly the admissible interactions") {
    const int N = 5;
    const CoefficientTable table(N);
    const HalfLattice lat(N);
    const FullGrid fg{N};
    const long N2 = static_cast<long>(N) * N;
    auto decode = [&](int idx) {
        return WaveIndex{idx / fg.side() - N, idx % fg.side() - N};
    };
    for (int i = 0; i < lat.size(); ++i) {
        const WaveIndex k = lat.mode(i);
        long count = 0;
        for (const auto* e = table.begin(i); e != table.end(i); ++e, ++count) {
            const WaveIndex h = decode(e->h), kmh = decode(e->kmh);
            CHECK(!is_zero(h));
            CHECK(!is_zero(kmh));
            CHECK((k - h) == kmh);
            CHECK(sqnorm(h) <= N2);
            CHECK(sqnorm(kmh) <= N2);
            CHECK(e->w == bilinear_coefficient(h, k).real());
        }
        // independent count of admissible h for this k
        long expect = 0;
        for (int h1 = -N; h1 <= N; ++h1)
            for (int h2 = -N; h2 <= N; ++h2) {
                const WaveIndex h{h1, h2};
                if (is_zero(h) || h == k || sqnorm(h) > N2) continue;
                const WaveIndex kmh = k - h;
                if (is_zero(kmh) || sqnorm(kmh) > N2) continue;
                ++expect;
            }
        CHECK(count == expect);
    }
    CHECK_THROWS_AS(CoefficientTable(0), std::invalid_argument);
}

TEST_CASE("nonlinear term matches the brute-force full-lattice sum") {
    const int N = 5;
    const CoefficientTable table(N);
    const SpectralField u = random_field(N, 101);
    const SpectralField B = nonlinear_term(u, table);
    const auto& lat = u.layout();
    double scale = 0.0;
    for (int i = 0; i < B.size(); ++i) scale = std::max(scale, std::abs(B[i]));
    for (int i = 0; i < lat.size(); ++i) {
        const Complex ref = brute_force_component(u, u, lat.mode(i), N);
        CHECK(std::abs(B[i] - ref) < 1e-12 * scale);
    }
}

TEST_CASE("two-mode hand computation at k = (2,1)") {
    const int N = 3;
    const CoefficientTable table(N);
    SpectralField u(N);
    const Complex a{0.7, -0.3}, b{-0.2, 0.5};
    u.set({1, 0}, a);
    u.set({1, 1}, b);
    // only h = (1,0) and h = (1,1) contribute:
    // d_{(1,0),(2,1)} + d_{(1,1),(2,1)} = (-3 + 2)/(2 pi sqrt(10))
    const SpectralField B = nonlinear_term(u, table);
    const Complex expect = -a * b / (kTwoPi * std::sqrt(10.0));
    CHECK(std::abs(B.at({2, 1}) - expect) < 1e-15);
    // the (1,0)+(0,1) interaction cancels after symmetrization at k = (1,1)
    SpectralField v(N);
    v.set({1, 0}, a);
    v.set({0, 1}, b);
    CHECK(std::abs(nonlinear_term(v, table).at({1, 1})) < 1e-15);
}

TEST_CASE("bilinear term: linearity, diagonal, and mismatch rejection") {
    const int N = 4;
    const CoefficientTable table(N);
    const SpectralField u = random_field(N, 7), v = random_field(N, 8),
                        w = random_field(N, 9);
    const SpectralField zero(N);
    CHECK(bilinear_term(u, zero, table).max_abs() == 0.0);
    CHECK(bilinear_term(zero, u, table).max_abs() == 0.0);

    const SpectralField diag = bilinear_term(u, u, table);
    const SpectralField nl = nonlinear_term(u, table);
    for (int i = 0; i < nl.size(); ++i) CHECK(diag[i] == nl[i]);

    const SpectralField lhs = bilinear_term(u, v + w, table);
    const SpectralField rhs = bilinear_term(u, v, table) + bilinear_term(u, w, table);
    for (int i = 0; i < lhs.size(); ++i) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-12);

    const SpectralField other = random_field(3, 10);
    CHECK_THROWS_AS(bilinear_term(u, other, table), std::invalid_argument);
}

TEST_CASE("enstrophy flux vanishes") {
    const CoefficientTable table(6);
    for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const SpectralField u = sample_mu_nu({1.0, 6, seed});
        const SpectralField B = nonlinear_term(u, table);
        const auto& lat = u.layout();
        double scale = 0.0;
        for (int i = 0; i < lat.size(); ++i)
            scale += 2.0 * static_cast<double>(sqnorm(lat.mode(i))) * std::abs(B[i]) *
                     std::abs(u[i]);
        CHECK(std::abs(enstrophy_flux(u, table)) < 1e-12 * scale);
    }
    // single mode: no admissible interactions, flux identically zero
    const CoefficientTable small(2);
    SpectralField one(2);
    one.set({1, 0}, Complex{1.0, 2.0});
    CHECK(std::abs(enstrophy_flux(one, small)) == 0.0);
}

TEST_CASE("analytic B-norm second moment") {
    const double v1 = bnorm_second_moment_analytic(1.0, 0.5, 6);
    CHECK(v1 > 0.0);
    // nu^{-2} scaling
    CHECK(bnorm_second_moment_analytic(2.0, 0.5, 6) == doctest::Approx(v1 / 4.0).epsilon(1e-12));
    CHECK_THROWS_AS(bnorm_second_moment_analytic(0.0, 0.5, 6), std::invalid_argument);
    CHECK_THROWS_AS(bnorm_second_moment_analytic(1.0, 0.0, 6), std::invalid_argument);
    CHECK_THROWS_AS(bnorm_second_moment_analytic(1.0, 0.5, 1), std::invalid_argument);

    // Monte-Carlo agreement at small size
    const int N = 4, M = 3000;
    const CoefficientTable table(N);
    RunningStat stat;
    for (int m = 0; m < M; ++m) {
        const SpectralField u = sample_mu_nu({1.0, N, rng::hash_key({202ULL, (uint64_t)m})});
        stat.add(std::pow(sobolev_norm(nonlinear_term(u, table), -1.5), 2));
    }
    CHECK(std::abs(stat.mean() - bnorm_second_moment_analytic(1.0, 0.5, N)) <= 4.0 * stat.se());
}

TEST_CASE("majorant shape") {
    CHECK(bnorm_majorant(0.5, 8) > 0.0);
    CHECK(bnorm_majorant(0.5, 16) > bnorm_majorant(0.5, 8));   // increasing in N
    CHECK(bnorm_majorant(1.0, 16) < bnorm_majorant(0.5, 16));  // decreasing in r
    CHECK_THROWS_AS(bnorm_majorant(0.0, 8), std::invalid_argument);
}

TEST_CASE("convolution series: symmetry, reproducibility, and rigorous tail") {
    CHECK_THROWS_AS(convolution_series({0, 0}, 64), std::invalid_argument);
    CHECK_THROWS_AS(convolution_series({2, 0}, 7), std::invalid_argument);  // R < 4|k|

    const SeriesResult a = convolution_series({3, 0}, 64);
    const SeriesResult b = convolution_series({0, 3}, 64);
    CHECK(a.sum == doctest::Approx(b.sum).epsilon(1e-12));

    const SeriesResult again = convolution_series({3, 0}, 64);
    CHECK(a.sum == again.sum);  // bitwise reproducible
    CHECK(a.tail_bound == again.tail_bound);

    // the larger-radius sum stays within the smaller radius' tail bound
    const SeriesResult r64 = convolution_series({2, 0}, 64);
    const SeriesResult r128 = convolution_series({2, 0}, 128);
    CHECK(r128.sum >= r64.sum);
    CHECK(r128.sum <= r64.sum + r64.tail_bound);
    CHECK(r128.tail_bound < r64.tail_bound);
}
