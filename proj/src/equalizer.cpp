#include "scfde/equalizer.hpp"

#include "scfde/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace scfde {

Constellation Constellation::psk(int bits) {
    if (bits < 1 || bits > 16)
        throw InvalidConfig("PSK order must use between 1 and 16 bits per symbol");
    Constellation c;
    c.bits = bits;
    const int order = 1 << bits;
    c.points.resize(order);
    for (int m = 0; m < order; ++m)
        c.points[m] =
            std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) / order);
    return c;
}

cvec fde_coefficients(const FrequencyResponse& fr, double snr, EqualizerKind kind) {
    if (!(snr > 0.0)) throw InvalidConfig("SNR must be positive");
    const std::size_t L = fr.lambda.size();
    cvec w(L);
    if (kind == EqualizerKind::Mmse) {
        const double inv_snr = 1.0 / snr;
        for (std::size_t k = 0; k < L; ++k)
            w[k] = std::conj(fr.lambda[k]) / (std::norm(fr.lambda[k]) + inv_snr);
    } else {
        for (std::size_t k = 0; k < L; ++k) {
            if (std::norm(fr.lambda[k]) == 0.0)
                throw DegenerateEigenvalue("ZF cannot invert a zero eigenvalue");
            w[k] = 1.0 / fr.lambda[k];
        }
    }
    return w;
}

cvec equalize(std::span<const cplx> y, std::span<const cplx> coeffs) {
    if (y.size() != coeffs.size())
        throw DimensionMismatch("received block and coefficient lengths differ");
    Dft dft(y.size());
    cvec spec = dft.forward(y);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= coeffs[k];
    return dft.inverse(spec);
}

double decision_sinr(const FrequencyResponse& fr, double snr, EqualizerKind kind) {
    if (!(snr > 0.0)) throw InvalidConfig("SNR must be positive");
    const std::size_t L = fr.lambda.size();
    double acc = 0.0;
    if (kind == EqualizerKind::Mmse) {
        for (std::size_t k = 0; k < L; ++k)
            acc += 1.0 / (1.0 + snr * std::norm(fr.lambda[k]));
        return static_cast<double>(L) / acc - 1.0;
    }
    for (std::size_t k = 0; k < L; ++k) {
        const double mag2 = std::norm(fr.lambda[k]);
        if (mag2 == 0.0)
            throw DegenerateEigenvalue("ZF cannot invert a zero eigenvalue");
        acc += 1.0 / (snr * mag2);
    }
    return static_cast<double>(L) / acc;
}

ResidualNoiseStats residual_noise_stats(const FrequencyResponse& fr, double snr,
                                        std::span<const cplx> x) {
    if (!(snr > 0.0)) throw InvalidConfig("SNR must be positive");
    const std::size_t L = fr.lambda.size();
    if (x.size() != L)
        throw DimensionMismatch("payload length must equal the block length");

    ResidualNoiseStats st;

    // mean = sqrt(SNR) (W H_eq - I) x; spectrally W H_eq - I has per-bin
    // gain -1/(SNR |lambda_k|^2 + 1)
    Dft dft(L);
    cvec spec = dft.forward(x);
    for (std::size_t k = 0; k < L; ++k)
        spec[k] *= -1.0 / (snr * std::norm(fr.lambda[k]) + 1.0);
    st.mean = dft.inverse(spec);
    const double amp = std::sqrt(snr);
    for (auto& v : st.mean) v *= amp;

    double cov = 0.0;
    double var = 0.0;
    for (std::size_t k = 0; k < L; ++k) {
        const double d = snr * std::norm(fr.lambda[k]) + 1.0;
        cov += snr / d;
        var += snr * snr * std::norm(fr.lambda[k]) / (d * d);
    }
    cov /= static_cast<double>(L);
    var /= static_cast<double>(L);
    st.diag_cov.assign(L, cov);
    st.variance = var;
    return st;
}

std::vector<int> slicer(std::span<const cplx> y_hat, double snr,
                        const Constellation& constellation) {
    if (constellation.points.empty())
        throw InvalidConfig("constellation must be non-empty");
    const double inv_amp = 1.0 / std::sqrt(snr);
    std::vector<int> idx(y_hat.size());
    for (std::size_t n = 0; n < y_hat.size(); ++n) {
        const cplx z = y_hat[n] * inv_amp;
        int best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int m = 0; m < constellation.order(); ++m) {
            const double d2 = std::norm(z - constellation.points[m]);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = m;
            }
        }
        idx[n] = best;
    }
    return idx;
}

} // namespace scfde
