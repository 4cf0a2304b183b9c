#include "sns/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace sns {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

std::shared_ptr<const HalfLattice> HalfLattice::get(int N) {
    static std::mutex mu;
    static std::unordered_map<int, std::shared_ptr<const HalfLattice>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    auto made = std::make_shared<const HalfLattice>(N);
    cache.emplace(N, made);
    return made;
}

Complex SpectralField::at(WaveIndex k) const {
    if (in_half_lattice(k)) {
        int i = layout_->index(k);
        return i >= 0 ? coeff_[static_cast<size_t>(i)] : Complex{};
    }
    int i = layout_->index(-k);
    return i >= 0 ? std::conj(coeff_[static_cast<size_t>(i)]) : Complex{};
}

void SpectralField::set(WaveIndex k, Complex v) {
    int i = layout_->index(k);
    if (!in_half_lattice(k) || i < 0)
        throw std::invalid_argument("SpectralField::set: index outside stored half-lattice");
    coeff_[static_cast<size_t>(i)] = v;
}

bool SpectralField::finite() const {
    for (const Complex& c : coeff_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

double SpectralField::max_abs() const {
    double m = 0.0;
    for (const Complex& c : coeff_) m = std::max(m, std::abs(c));
    return m;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    if (a.truncation() != b.truncation())
        throw std::invalid_argument("field sum: truncation mismatch");
    SpectralField r = a;
    for (size_t i = 0; i < r.coeff_.size(); ++i) r.coeff_[i] += b.coeff_[i];
    return r;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    if (a.truncation() != b.truncation())
        throw std::invalid_argument("field difference: truncation mismatch");
    SpectralField r = a;
    for (size_t i = 0; i < r.coeff_.size(); ++i) r.coeff_[i] -= b.coeff_[i];
    return r;
}

SpectralField operator*(Complex s, const SpectralField& a) {
    SpectralField r = a;
    for (auto& c : r.coeff_) c *= s;
    return r;
}

std::array<Complex, 2> basis_eval(WaveIndex k, double xi1, double xi2) {
    if (is_zero(k)) throw std::invalid_argument("basis_eval: zero wave index");
    const double kn = abs(k);
    const Complex phase = std::polar(1.0, k.k1 * xi1 + k.k2 * xi2);
    const WaveIndex kp = perp(k);
    const double scale = 1.0 / (kTwoPi * kn);
    return {scale * kp.k1 * phase, scale * kp.k2 * phase};
}

std::vector<Complex> full_coefficients(const SpectralField& field) {
    const FullGrid fg{field.truncation()};
    std::vector<Complex> full(fg.size(), Complex{});
    const auto& lat = field.layout();
    for (int i = 0; i < lat.size(); ++i) {
        const WaveIndex k = lat.mode(i);
        full[fg.at(k)] = field[i];
        full[fg.at(-k)] = std::conj(field[i]);
    }
    return full;
}

namespace {

// Separable evaluation of sum_k W_k e^{ik.xi} for a dense coefficient array W
// over [-N,N]^2: first contract k2 against the grid, then k1.
std::vector<Complex> synth_component(const std::vector<Complex>& W, int N, int M) {
    const int side = 2 * N + 1;
    // phase[(t+N)*M + m] = e^{i t xi_m}
    std::vector<Complex> phase(static_cast<size_t>(side) * M);
    for (int t = -N; t <= N; ++t)
        for (int m = 0; m < M; ++m)
            phase[static_cast<size_t>(t + N) * M + m] = std::polar(1.0, t * kTwoPi * m / M);

    std::vector<Complex> partial(static_cast<size_t>(side) * M, Complex{});
    for (int a = 0; a < side; ++a) {
        for (int b = 0; b < side; ++b) {
            const Complex w = W[static_cast<size_t>(a) * side + b];
            if (w == Complex{}) continue;
            const Complex* ph = &phase[static_cast<size_t>(b) * M];
            Complex* out = &partial[static_cast<size_t>(a) * M];
            for (int m = 0; m < M; ++m) out[m] += w * ph[m];
        }
    }
    std::vector<Complex> values(static_cast<size_t>(M) * M, Complex{});
    for (int a = 0; a < side; ++a) {
        const Complex* row = &partial[static_cast<size_t>(a) * M];
        const Complex* ph = &phase[static_cast<size_t>(a) * M];
        for (int i = 0; i < M; ++i) {
            const Complex f = ph[i];
            Complex* out = &values[static_cast<size_t>(i) * M];
            for (int m = 0; m < M; ++m) out[m] += f * row[m];
        }
    }
    return values;
}

}  // namespace

GridField synthesize(const SpectralField& field, int M) {
    const int N = field.truncation();
    if (M < 4 * N + 1) throw std::invalid_argument("synthesize: grid too coarse (need M >= 4N+1)");
    if (!field.finite()) throw std::invalid_argument("synthesize: non-finite coefficients");

    const FullGrid fg{N};
    const int side = fg.side();
    std::vector<Complex> W1(fg.size(), Complex{}), W2(fg.size(), Complex{});
    const auto& lat = field.layout();
    for (int i = 0; i < lat.size(); ++i) {
        const WaveIndex k = lat.mode(i);
        const double scale = 1.0 / (kTwoPi * abs(k));
        const WaveIndex kp = perp(k);
        const Complex c = field[i];
        W1[fg.at(k)] = c * (scale * kp.k1);
        W2[fg.at(k)] = c * (scale * kp.k2);
        W1[fg.at(-k)] = std::conj(W1[fg.at(k)]);
        W2[fg.at(-k)] = std::conj(W2[fg.at(k)]);
    }
    (void)side;
    auto v1 = synth_component(W1, N, M);
    auto v2 = synth_component(W2, N, M);

    double max_amp = 0.0, max_imag = 0.0;
    for (size_t i = 0; i < v1.size(); ++i) {
        max_amp = std::max({max_amp, std::abs(v1[i]), std::abs(v2[i])});
        max_imag = std::max({max_imag, std::abs(v1[i].imag()), std::abs(v2[i].imag())});
    }
    if (max_imag > 1e-12 * std::max(max_amp, 1e-300))
        throw std::runtime_error("synthesize: Hermitian completion left an imaginary residue");

    GridField g;
    g.M = M;
    g.vx.resize(v1.size());
    g.vy.resize(v2.size());
    for (size_t i = 0; i < v1.size(); ++i) {
        g.vx[i] = v1[i].real();
        g.vy[i] = v2[i].real();
    }
    return g;
}

std::vector<double> synthesize_scalar(const ScalarField& field, int M) {
    const int N = field.layout->truncation();
    if (M < 4 * N + 1) throw std::invalid_argument("synthesize_scalar: grid too coarse");
    const FullGrid fg{N};
    std::vector<Complex> W(fg.size(), Complex{});
    for (int i = 0; i < field.layout->size(); ++i) {
        const WaveIndex k = field.layout->mode(i);
        W[fg.at(k)] = field.coeff[static_cast<size_t>(i)] / kTwoPi;
        W[fg.at(-k)] = std::conj(W[fg.at(k)]);
    }
    auto v = synth_component(W, N, M);
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
    return out;
}

double sobolev_norm(const SpectralField& field, double s) {
    if (!field.finite()) throw std::invalid_argument("sobolev_norm: non-finite coefficients");
    double acc = 0.0;
    const auto& lat = field.layout();
    for (int i = 0; i < lat.size(); ++i) {
        const double k2 = static_cast<double>(sqnorm(lat.mode(i)));
        acc += std::norm(field[i]) * std::pow(k2, s);
    }
    return std::sqrt(2.0 * acc);
}

double lp_norm(const GridField& grid, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    const double cell = (kTwoPi / grid.M) * (kTwoPi / grid.M);
    double acc = 0.0;
    for (size_t i = 0; i < grid.vx.size(); ++i) {
        const double a2 = grid.vx[i] * grid.vx[i] + grid.vy[i] * grid.vy[i];
        acc += std::pow(a2, 0.5 * p);
    }
    return std::pow(cell * acc, 1.0 / p);
}

double besov_norm(const SpectralField& field, double s, double p, double q) {
    if (p < 1.0 || q < 1.0) throw std::invalid_argument("besov_norm: need 1 <= p, q");
    const int N = field.truncation();
    const int M = 8 * N + 1;
    const auto& lat = field.layout();
    double acc = 0.0;
    for (int j = 0; (1 << j) <= N; ++j) {
        const long lo = 1L << (2 * j), hi = 1L << (2 * j + 2);  // 4^j <= |k|^2 < 4^{j+1}
        SpectralField block(N);
        bool nonempty = false;
        for (int i = 0; i < lat.size(); ++i) {
            const long k2 = sqnorm(lat.mode(i));
            if (k2 >= lo && k2 < hi && field[i] != Complex{}) {
                block[i] = field[i];
                nonempty = true;
            }
        }
        if (!nonempty) continue;
        const double bn = lp_norm(synthesize(block, M), p);
        acc += std::pow(std::pow(2.0, j * s) * bn, q);
    }
    return std::pow(acc, 1.0 / q);
}

double enstrophy(const SpectralField& field) {
    double acc = 0.0;
    const auto& lat = field.layout();
    for (int i = 0; i < lat.size(); ++i)
        acc += static_cast<double>(sqnorm(lat.mode(i))) * std::norm(field[i]);
    return 2.0 * acc;
}

std::pair<ScalarField, ScalarField> vorticity_and_stream(const SpectralField& field) {
    const int N = field.truncation();
    ScalarField omega(N), psi(N);
    const auto& lat = field.layout();
    for (int i = 0; i < lat.size(); ++i) {
        const double kn = abs(lat.mode(i));
        omega.coeff[static_cast<size_t>(i)] = Complex{0.0, kn} * field[i];
        psi.coeff[static_cast<size_t>(i)] = Complex{0.0, -1.0 / kn} * field[i];
    }
    return {std::move(omega), std::move(psi)};
}

SpectralField stokes_apply(const SpectralField& field) {
    SpectralField r = field;
    const auto& lat = field.layout();
    for (int i = 0; i < lat.size(); ++i) r[i] *= static_cast<double>(sqnorm(lat.mode(i)));
    return r;
}

SpectralField heat_semigroup(const SpectralField& field, double t, double nu) {
    if (t < 0.0) throw std::invalid_argument("heat_semigroup: negative time");
    if (nu <= 0.0) throw std::invalid_argument("heat_semigroup: viscosity must be positive");
    SpectralField r = field;
    const auto& lat = field.layout();
    for (int i = 0; i < lat.size(); ++i)
        r[i] *= std::exp(-nu * t * static_cast<double>(sqnorm(lat.mode(i))));
    return r;
}

void write_snapshot(const SpectralField& field, double nu, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_snapshot: cannot open " + path);
    char buf[128];
    std::snprintf(buf, sizeof buf, "# nu=%.17g N=%d\n", nu, field.truncation());
    os << buf;
    const auto& lat = field.layout();
    for (int i = 0; i < lat.size(); ++i) {
        const WaveIndex k = lat.mode(i);
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", k.k1, k.k2, field[i].real(),
                      field[i].imag());
        os << buf;
    }
}

std::pair<SpectralField, double> read_snapshot(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_snapshot: cannot open " + path);
    std::string header;
    std::getline(is, header);
    double nu = 0.0;
    int N = 0;
    if (std::sscanf(header.c_str(), "# nu=%lf N=%d", &nu, &N) != 2)
        throw std::runtime_error("read_snapshot: bad header in " + path);
    SpectralField field(N);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        int k1 = 0, k2 = 0;
        double re = 0.0, im = 0.0;
        if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf", &k1, &k2, &re, &im) != 4)
            throw std::runtime_error("read_snapshot: bad row: " + line);
        field.set({k1, k2}, Complex{re, im});
    }
    return {std::move(field), nu};
}

}  // namespace sns
