#pragma once

#include "scfde/dft.hpp"
#include "scfde/rng.hpp"

#include <span>
#include <vector>

namespace scfde {

/// One realization of a frequency-selective Rayleigh block-fading channel:
/// nu+1 i.i.d. CN(0,1) taps h_0..h_nu.
struct ChannelTaps {
    cvec taps;

    int memory() const { return static_cast<int>(taps.size()) - 1; }
};

/// The L eigenvalues of the cyclic-prefix equivalent circulant channel,
/// lambda_k = sum_i h_i e^{-j 2 pi i (k-1) / L} for k = 1..L.
struct FrequencyResponse {
    cvec lambda;
    int memory = 0;

    int block_length() const { return static_cast<int>(lambda.size()); }
};

/// Per-bin exponential orders alpha_k = -log|lambda_k|^2 / log SNR and the
/// count of orders exceeding 1.
struct ExponentialOrders {
    std::vector<double> alpha;
    double snr = 0.0;
    int m_count = 0;
};

/// Precomputed L x (nu+1) partial DFT used by hot Monte Carlo loops to map
/// taps to eigenvalues without reallocating.
class PartialDft {
public:
    PartialDft(int memory, int block_length);

    int memory() const { return memory_; }
    int block_length() const { return block_length_; }

    /// lambda must have block_length entries; taps must have memory+1.
    void response(std::span<const cplx> taps, std::span<cplx> lambda) const;

private:
    int memory_;
    int block_length_;
    cvec coeff_; // row-major L x (nu+1)
};

/// Draws nu+1 i.i.d. CN(0,1) taps from the given stream. The same stream
/// state always yields bit-identical taps.
ChannelTaps draw_channel(int memory, RandomStream& stream);

/// Eigenvalues of the equivalent circulant channel at block length L.
/// Throws BlockTooShort if L < nu+1.
FrequencyResponse frequency_response(const ChannelTaps& taps, int block_length);

/// Applies the circulant channel H_eq (circular convolution with the taps)
/// in the spectral domain: DFT, per-bin multiply by lambda, inverse DFT.
cvec circulant_apply(const ChannelTaps& taps, int block_length, std::span<const cplx> x);

/// Cyclic-prefix transmission of a length-L payload: prepends the last nu
/// symbols, runs the linear-convolution channel, discards the first nu
/// received samples, and returns sqrt(SNR) * H_eq * x + n with CN(0,1)
/// noise per sample. Pass noise = nullptr for a noiseless channel.
cvec cp_transmit(const ChannelTaps& taps, std::span<const cplx> x, double snr,
                 RandomStream* noise);

/// Exponential orders for snr > 1. Throws DegenerateEigenvalue if any
/// eigenvalue is exactly zero.
ExponentialOrders exponential_orders(const FrequencyResponse& fr, double snr);

} // namespace scfde
