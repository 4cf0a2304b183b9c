#include "sns/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace sns {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double perp_dot(WaveIndex a, WaveIndex b) {
    return static_cast<double>(-a.k2) * b.k1 + static_cast<double>(a.k1) * b.k2;
}
}  // namespace

Complex bilinear_coefficient(WaveIndex h, WaveIndex k) {
    if (is_zero(h) || is_zero(k) || h == k)
        throw std::invalid_argument("bilinear_coefficient: degenerate indices");
    const WaveIndex kmh = k - h;
    const double num = perp_dot(h, k) * dot(kmh, k);
    const double den = kTwoPi * abs(h) * abs(kmh) * abs(k);
    return Complex{-num / den, 0.0};
}

Complex symmetrized_coefficient(WaveIndex h, WaveIndex k) {
    return 0.5 * (bilinear_coefficient(h, k) + bilinear_coefficient(k - h, k));
}

CoefficientTable::CoefficientTable(int N) : N_(N) {
    if (N < 1) throw std::invalid_argument("CoefficientTable: N must be >= 1");
    const auto lat = HalfLattice::get(N);
    const FullGrid fg{N};
    const long N2 = static_cast<long>(N) * N;
    offsets_.reserve(static_cast<size_t>(lat->size()) + 1);
    offsets_.push_back(0);
    for (int i = 0; i < lat->size(); ++i) {
        const WaveIndex k = lat->mode(i);
        for (int h1 = -N; h1 <= N; ++h1) {
            for (int h2 = -N; h2 <= N; ++h2) {
                const WaveIndex h{h1, h2};
                if (is_zero(h) || h == k || sqnorm(h) > N2) continue;
                const WaveIndex kmh = k - h;
                if (is_zero(kmh) || sqnorm(kmh) > N2) continue;
                Entry e;
                e.h = static_cast<int>(fg.at(h));
                e.kmh = static_cast<int>(fg.at(kmh));
                e.w = bilinear_coefficient(h, k).real();
                entries_.push_back(e);
            }
        }
        offsets_.push_back(entries_.size());
    }
}

namespace {

SpectralField convolve(const SpectralField& u, const SpectralField& v,
                       const CoefficientTable& table) {
    const int N = table.truncation();
    if (u.truncation() != N || v.truncation() != N)
        throw std::invalid_argument("bilinear term: truncation mismatch with table");
    const std::vector<Complex> uf = full_coefficients(u);
    std::vector<Complex> vf_storage;
    const std::vector<Complex>* vf = &uf;
    if (&u != &v) {
        vf_storage = full_coefficients(v);
        vf = &vf_storage;
    }

    SpectralField b(N);
    for (int i = 0; i < b.size(); ++i) {
        Complex acc{};
        for (const auto* e = table.begin(i); e != table.end(i); ++e)
            acc += e->w * (uf[static_cast<size_t>(e->h)] * (*vf)[static_cast<size_t>(e->kmh)]);
        b[i] = acc;
    }
    return b;
}

}  // namespace

SpectralField nonlinear_term(const SpectralField& u, const CoefficientTable& table) {
    return convolve(u, u, table);
}

SpectralField bilinear_term(const SpectralField& u, const SpectralField& v,
                            const CoefficientTable& table) {
    return convolve(u, v, table);
}

Complex enstrophy_flux(const SpectralField& u, const CoefficientTable& table) {
    const SpectralField b = nonlinear_term(u, table);
    const auto& lat = u.layout();
    // Kahan summation: the whole point is measuring the cancellation.
    Complex sum{}, carry{};
    for (int i = 0; i < lat.size(); ++i) {
        const double k2 = static_cast<double>(sqnorm(lat.mode(i)));
        // term at k plus its Hermitian partner at -k
        const Complex term = k2 * (b[i] * std::conj(u[i]) + std::conj(b[i]) * u[i]);
        const Complex y = term - carry;
        const Complex t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double bnorm_second_moment_analytic(double nu, double r, int N) {
    if (nu <= 0.0 || r <= 0.0 || N < 2)
        throw std::invalid_argument("bnorm_second_moment_analytic: need nu > 0, r > 0, N >= 2");
    const long N2 = static_cast<long>(N) * N;
    double total = 0.0;
    for (int k1 = -N; k1 <= N; ++k1) {
        for (int k2 = -N; k2 <= N; ++k2) {
            const WaveIndex k{k1, k2};
            if (is_zero(k) || sqnorm(k) > N2) continue;
            double inner = 0.0;
            for (int h1 = -N; h1 <= N; ++h1) {
                for (int h2 = -N; h2 <= N; ++h2) {
                    const WaveIndex h{h1, h2};
                    if (is_zero(h) || h == k || sqnorm(h) > N2) continue;
                    const WaveIndex kmh = k - h;
                    if (is_zero(kmh) || sqnorm(kmh) > N2) continue;
                    const Complex c = symmetrized_coefficient(h, k);
                    const Complex cc = symmetrized_coefficient(kmh, k);
                    const double pair = std::norm(c) + (c * std::conj(cc)).real();
                    inner += pair / (4.0 * nu * nu * static_cast<double>(sqnorm(h)) *
                                     static_cast<double>(sqnorm(kmh)));
                }
            }
            total += std::pow(static_cast<double>(sqnorm(k)), -r - 1.0) * inner;
        }
    }
    return total;
}

double bnorm_majorant(double r, int N) {
    if (r <= 0.0) throw std::invalid_argument("bnorm_majorant: r must be positive");
    const long N2 = static_cast<long>(N) * N;
    double total = 0.0;
    for (int k1 = -N; k1 <= N; ++k1)
        for (int k2 = -N; k2 <= N; ++k2) {
            const long s = static_cast<long>(k1) * k1 + static_cast<long>(k2) * k2;
            if (s < 4 || s > N2) continue;  // 2 <= |k| <= N
            const double ksq = static_cast<double>(s);
            total += 0.5 * std::log(ksq) / std::pow(ksq, 1.0 + r);
        }
    return total;
}

SeriesResult convolution_series(WaveIndex k, int R) {
    if (is_zero(k)) throw std::invalid_argument("convolution_series: zero wave index");
    if (static_cast<double>(R) < 4.0 * abs(k))
        throw std::invalid_argument("convolution_series: cutoff too small (need R >= 4|k|)");
    const long R2 = static_cast<long>(R) * R;
    double sum = 0.0, carry = 0.0;
    for (int h1 = -R; h1 <= R; ++h1) {
        for (int h2 = -R; h2 <= R; ++h2) {
            const WaveIndex h{h1, h2};
            if (is_zero(h) || h == k || sqnorm(h) > R2) continue;
            const double term =
                1.0 / (static_cast<double>(sqnorm(h)) * static_cast<double>(sqnorm(k - h)));
            const double y = term - carry;
            const double t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
    }
    // For |h| > R >= 4|k|: |k-h| >= (3/4)|h|, so each term is at most
    // 16/(9|h|^4); compare with the integral over unit cells shifted by at
    // most 1/sqrt(2).
    const double T = static_cast<double>(R) - std::sqrt(2.0);
    SeriesResult res;
    res.sum = sum;
    res.tail_bound =
        (16.0 / 9.0) * kTwoPi * (0.5 / (T * T) + 1.0 / (3.0 * std::sqrt(2.0) * T * T * T));
    return res;
}

}  // namespace sns
