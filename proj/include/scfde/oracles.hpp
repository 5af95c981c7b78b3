#pragma once

#include "scfde/montecarlo.hpp"
#include "scfde/spectrum.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace scfde {

struct TailProbeResult {
    std::vector<EstimatePoint> points;
    std::optional<SlopeFit> fit; // absent when no window has enough successes
};

/// Tail probability P[sum_k 1/(1+SNR|lambda_k|^2) > m] for n i.i.d.
/// CN(0,1) draws per trial, with a log-log slope fit over the default
/// window. Requires 0 < m < n.
TailProbeResult lemma1_tail_probability(int n, double m,
                                        std::span<const double> snr_grid_db,
                                        std::uint64_t trials, std::uint64_t seed,
                                        int workers = 0,
                                        std::uint64_t min_successes = 30);

/// Histogram of M(alpha) = #{alpha_k > 1} over trials draws of n i.i.d.
/// CN(0,1) variables at a fixed SNR; index i counts trials with M = i.
std::vector<std::uint64_t> lemma1_mcount_histogram(int n, double snr,
                                                   std::uint64_t trials,
                                                   std::uint64_t seed);

/// Dirichlet-kernel interpolation of the tap spectrum from its L DFT
/// samples: G(omega) = (1/L) sum_i lambda_i (1-e^{-jL omega}) /
/// (1-e^{-j(omega - 2 pi (i-1)/L)}). Grid frequencies are returned exactly
/// via the analytic limit rather than an epsilon division.
cplx dft_interpolate(const FrequencyResponse& fr, double omega);

/// Interpolation coefficients gamma[k][i] mapping base-grid eigenvalues to
/// the T-times finer grid; rows at k = T(k'-1)+1 reduce to unit vectors.
struct InterpolationWeights {
    int base_length = 0;
    int factor = 0;
    std::vector<cvec> gamma; // (T*L) rows of L coefficients
};

InterpolationWeights interpolation_weights(int base_length, int factor);

struct SubsampleCheck {
    bool ok = false;
    double subsample_err = 0.0; // max |lambda~_{T(k-1)+1} - lambda_k|
    double interp_err = 0.0;    // max |sum_i gamma_i lambda_i - lambda~_k|
};

/// Verifies the zero-padding subsampling identity and the interpolation
/// weights against the direct DFT at block lengths L and T*L (1e-10
/// absolute).
SubsampleCheck zero_pad_subsample_check(const ChannelTaps& taps, int base_length,
                                        int factor);

struct SlopePair {
    TailProbeResult first;  // block length L
    TailProbeResult second; // block length Lprime
    std::optional<double> slope_difference; // absent when either fit is missing
};

/// Estimates P[sum_{k<=L} 1/(1+SNR|lambda_k|^2) > m] at block lengths L and
/// Lprime using the same channel draws per trial (common random numbers)
/// and fits both slopes. Requires 0 < m < nu+1.
SlopePair lemma2_slope_pair(int memory, int block_length, int block_length_prime,
                            double m, std::span<const double> snr_grid_db,
                            std::uint64_t trials, std::uint64_t seed,
                            int workers = 0, std::uint64_t min_successes = 30);

/// Maximum pairwise eigenvalue correlation magnitude over channel draws at
/// block length L (default nu+1, where the eigenvalues are independent).
double remark1_independence_check(int memory, std::uint64_t trials,
                                  std::uint64_t seed, int block_length = 0);

} // namespace scfde
