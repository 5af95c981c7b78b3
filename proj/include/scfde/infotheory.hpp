#pragma once

#include "scfde/equalizer.hpp"
#include "scfde/spectrum.hpp"

#include <utility>
#include <vector>

namespace scfde {

/// Target data rate in bits per symbol.
struct Rate {
    double bits = 0.0;
};

enum class DiversityRegime { FullDiversity, RateLimited };

/// Half-open rate interval (lo, hi].
struct RateInterval {
    double lo = 0.0;
    double hi = 0.0;
};

struct DiversityReport {
    int d = 1;
    DiversityRegime regime = DiversityRegime::FullDiversity;
    RateInterval interval; // rates over which d is constant
};

/// Mutual information in bits per symbol:
/// MMSE  I = -log2[ (1/L) sum 1/(SNR|lambda_k|^2 + 1) ],
/// ZF    I = log2(1 + gamma_ZF).
double mutual_info(const FrequencyResponse& fr, double snr, EqualizerKind kind);

/// True iff the equalized mutual information falls strictly below the rate.
/// The MMSE branch evaluates the harmonic-sum form
/// (1/L) sum 1/(1+SNR|lambda_k|^2) > 2^-R directly.
bool outage_indicator(const FrequencyResponse& fr, double snr, Rate rate,
                      EqualizerKind kind);

/// Analytic diversity order. MMSE: nu+1 for R <= log2(L/nu) (boundary
/// inclusive), floor(2^-R L)+1 above, capped at nu+1; nu = 0 gives d = 1.
/// ZF: always 1.
DiversityReport analytic_diversity(Rate rate, int memory, int block_length,
                                   EqualizerKind kind);

/// Full MMSE partition of (0, inf) into constant-diversity rate intervals:
/// d = nu+1 on (0, log2(L/nu)], d = i on (log2(L/i), log2(L/(i-1))] for
/// i = nu..2, and d = 1 on (log2 L, inf). Requires nu >= 1.
std::vector<std::pair<int, RateInterval>> rate_intervals(int memory, int block_length);

/// Rate map between block lengths: R -> R + log2(L'/L).
Rate rate_shift(Rate rate, int from_block, int to_block);

/// Union bound on the MMSE conditional error probability,
/// 2^R exp[-((1/L) sum SNR|lambda_k|^2/(SNR|lambda_k|^2+1)^2)^-1],
/// clamped to [0, 1].
double union_bound_pep(const FrequencyResponse& fr, double snr, Rate rate);

} // namespace scfde
