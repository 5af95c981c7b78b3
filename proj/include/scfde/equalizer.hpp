#pragma once

#include "scfde/spectrum.hpp"

#include <span>
#include <vector>

namespace scfde {

enum class EqualizerKind { Mmse, Zf };

/// Unit-energy 2^R-PSK constellation, point_m = e^{j 2 pi m / 2^R}.
struct Constellation {
    int bits = 0;
    cvec points;

    static Constellation psk(int bits);
    int order() const { return static_cast<int>(points.size()); }
};

/// First and second order statistics of the residual noise
/// n~ = y~ - sqrt(SNR) x at the MMSE equalizer output.
struct ResidualNoiseStats {
    cvec mean;                    // E[n~] for the given payload x
    std::vector<double> diag_cov; // diagonal of E[n~ n~^H] averaged over x
    double variance = 0.0;        // per-entry noise variance, identical across entries
};

/// Per-bin equalizer coefficients: MMSE w_k = conj(lambda_k) /
/// (|lambda_k|^2 + 1/SNR); ZF w_k = 1/lambda_k. ZF throws
/// DegenerateEigenvalue on an exactly zero eigenvalue.
cvec fde_coefficients(const FrequencyResponse& fr, double snr, EqualizerKind kind);

/// y~ = IDFT(coeffs .* DFT(y)).
cvec equalize(std::span<const cplx> y, std::span<const cplx> coeffs);

/// Unbiased decision-point SINR, identical for every stream:
/// MMSE gamma = [ (1/L) sum 1/(1+SNR|lambda_k|^2) ]^-1 - 1,
/// ZF   gamma = [ (1/L) sum 1/(SNR|lambda_k|^2) ]^-1.
double decision_sinr(const FrequencyResponse& fr, double snr, EqualizerKind kind);

/// Residual-noise statistics for the MMSE equalizer with payload x.
ResidualNoiseStats residual_noise_stats(const FrequencyResponse& fr, double snr,
                                        std::span<const cplx> x);

/// Nearest-neighbor hard decisions on y_hat / sqrt(SNR); ties go to the
/// lowest constellation index.
std::vector<int> slicer(std::span<const cplx> y_hat, double snr,
                        const Constellation& constellation);

} // namespace scfde
