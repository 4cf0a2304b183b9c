#include "sns/measure.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sns/rng.hpp"

namespace sns {

namespace {
constexpr double kFourPiSq = 39.478417604357434475337963999505;
}

double mode_covariance(double nu, WaveIndex k) {
    if (nu <= 0.0) throw std::invalid_argument("mode_covariance: nu must be positive");
    if (is_zero(k)) throw std::invalid_argument("mode_covariance: zero wave index");
    return 1.0 / (2.0 * nu * static_cast<double>(sqnorm(k)));
}

SpectralField sample_mu_nu(const MeasureParams& params) {
    if (params.nu <= 0.0 || params.N < 1)
        throw std::invalid_argument("sample_mu_nu: need nu > 0 and N >= 1");
    SpectralField u(params.N);
    const auto& lat = u.layout();
    for (int i = 0; i < lat.size(); ++i) {
        const WaveIndex k = lat.mode(i);
        const double sigma = std::sqrt(1.0 / (4.0 * params.nu * static_cast<double>(sqnorm(k))));
        const Complex g = rng::gauss_pair(
            {params.seed, rng::kSampleTag, rng::signed_word(k.k1), rng::signed_word(k.k2)});
        u[i] = sigma * g;
    }
    return u;
}

unsigned long long moment_coefficient(int n) {
    if (n < 1) throw std::invalid_argument("moment_coefficient: n must be >= 1");
    unsigned long long acc = 1;  // (2n-1)!!
    for (int m = 1; m <= n; ++m) {
        const unsigned long long factor = 2ULL * m - 1ULL;
        if (__builtin_mul_overflow(acc, factor, &acc))
            throw std::overflow_error("moment_coefficient: overflow");
    }
    return acc;
}

ExperimentReport moment_test(const MeasureParams& params, const GammaProfile& gamma, int n,
                             long samples) {
    if (samples < 100) throw std::invalid_argument("moment_test: need at least 100 samples");

    const auto lat = HalfLattice::get(params.N);
    std::vector<std::pair<int, Complex>> support;  // (mode index, gamma_k)
    double bracket = 0.0;
    for (const auto& [kk, g] : gamma) {
        const WaveIndex k{kk.first, kk.second};
        if (!in_half_lattice(k))
            throw std::invalid_argument("moment_test: gamma index outside Z^2_+");
        const int idx = lat->index(k);
        if (idx < 0) throw std::invalid_argument("moment_test: gamma support outside truncation");
        support.emplace_back(idx, g);
        bracket += std::norm(g) * mode_covariance(params.nu, k);
    }
    const double target = static_cast<double>(moment_coefficient(n)) * std::pow(bracket, n);

    RunningStat stat;
    for (long m = 0; m < samples; ++m) {
        MeasureParams draw = params;
        draw.seed = rng::hash_key({params.seed, 0x6d6f6dULL, static_cast<uint64_t>(m)});
        const SpectralField u = sample_mu_nu(draw);
        Complex pairing{};
        for (const auto& [idx, g] : support) pairing += g * u[idx];
        const double x = std::sqrt(2.0) * pairing.real();
        stat.add(std::pow(x * x, n));
    }

    ExperimentReport rep;
    rep.experiment = "moment_test";
    rep.seed = params.seed;
    rep.version = kVersion;
    char name[64];
    std::snprintf(name, sizeof name, "E|X|^%d", 2 * n);
    rep.rows.push_back(make_row(name, stat.mean(), target, stat.se()));
    return rep;
}

double hnorm_expectation_analytic(double nu, double s, int n, int N) {
    if (n < 1 || N < 1) throw std::invalid_argument("hnorm_expectation_analytic: bad n or N");
    double bracket = 0.0;
    const long N2 = static_cast<long>(N) * N;
    for (int k1 = -N; k1 <= N; ++k1)
        for (int k2 = -N; k2 <= N; ++k2) {
            const WaveIndex k{k1, k2};
            if (is_zero(k) || sqnorm(k) > N2) continue;
            bracket += std::pow(static_cast<double>(sqnorm(k)), -s) * (1.0 / kFourPiSq) *
                       mode_covariance(nu, k);
        }
    return static_cast<double>(moment_coefficient(n)) * kFourPiSq * std::pow(bracket, n);
}

}  // namespace sns
