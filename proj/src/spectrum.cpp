#include "scfde/spectrum.hpp"

#include "scfde/errors.hpp"

#include <cmath>
#include <numbers>

namespace scfde {

namespace {

void require_block(int memory, int block_length) {
    if (memory < 0) throw InvalidConfig("channel memory must be non-negative");
    if (block_length < memory + 1)
        throw BlockTooShort("block length must be at least nu+1");
}

} // namespace

PartialDft::PartialDft(int memory, int block_length)
    : memory_(memory), block_length_(block_length),
      coeff_(static_cast<std::size_t>(block_length) * (memory + 1)) {
    require_block(memory, block_length);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(block_length);
    for (int k = 0; k < block_length; ++k)
        for (int i = 0; i <= memory; ++i)
            coeff_[static_cast<std::size_t>(k) * (memory + 1) + i] =
                std::polar(1.0, step * static_cast<double>((static_cast<long long>(i) * k) %
                                                           block_length));
}

void PartialDft::response(std::span<const cplx> taps, std::span<cplx> lambda) const {
    if (static_cast<int>(taps.size()) != memory_ + 1 ||
        static_cast<int>(lambda.size()) != block_length_)
        throw DimensionMismatch("tap or eigenvalue vector length mismatch");
    const int w = memory_ + 1;
    for (int k = 0; k < block_length_; ++k) {
        cplx acc = 0.0;
        const cplx* row = coeff_.data() + static_cast<std::size_t>(k) * w;
        for (int i = 0; i < w; ++i) acc += taps[i] * row[i];
        lambda[k] = acc;
    }
}

ChannelTaps draw_channel(int memory, RandomStream& stream) {
    if (memory < 0) throw InvalidConfig("channel memory must be non-negative");
    ChannelTaps ch;
    ch.taps.resize(memory + 1);
    for (auto& h : ch.taps) h = stream.cgauss();
    return ch;
}

FrequencyResponse frequency_response(const ChannelTaps& taps, int block_length) {
    require_block(taps.memory(), block_length);
    FrequencyResponse fr;
    fr.memory = taps.memory();
    fr.lambda.resize(block_length);
    PartialDft pd(taps.memory(), block_length);
    pd.response(taps.taps, fr.lambda);
    return fr;
}

cvec circulant_apply(const ChannelTaps& taps, int block_length, std::span<const cplx> x) {
    require_block(taps.memory(), block_length);
    if (static_cast<int>(x.size()) != block_length)
        throw DimensionMismatch("input vector length must equal the block length");
    const FrequencyResponse fr = frequency_response(taps, block_length);
    Dft dft(block_length);
    cvec spec = dft.forward(x);
    for (int k = 0; k < block_length; ++k) spec[k] *= fr.lambda[k];
    return dft.inverse(spec);
}

cvec cp_transmit(const ChannelTaps& taps, std::span<const cplx> x, double snr,
                 RandomStream* noise) {
    const int nu = taps.memory();
    const int L = static_cast<int>(x.size());
    require_block(nu, L);

    // CP-extended block s[0..L+nu): the last nu payload symbols, then the payload.
    cvec s(static_cast<std::size_t>(L) + nu);
    for (int t = 0; t < nu; ++t) s[t] = x[L - nu + t];
    for (int t = 0; t < L; ++t) s[nu + t] = x[t];

    // Linear convolution with the taps; the first nu received samples fall in
    // the prefix and are discarded, so only samples nu..L+nu-1 are formed.
    const double amp = std::sqrt(snr);
    cvec y(L);
    for (int m = 0; m < L; ++m) {
        cplx acc = 0.0;
        for (int i = 0; i <= nu; ++i) acc += taps.taps[i] * s[nu + m - i];
        y[m] = amp * acc;
        if (noise) y[m] += noise->cgauss();
    }
    return y;
}

ExponentialOrders exponential_orders(const FrequencyResponse& fr, double snr) {
    if (!(snr > 1.0))
        throw InvalidConfig("exponential orders are defined only for SNR > 1");
    ExponentialOrders eo;
    eo.snr = snr;
    eo.alpha.resize(fr.lambda.size());
    const double log_snr = std::log(snr);
    for (std::size_t k = 0; k < fr.lambda.size(); ++k) {
        const double mag2 = std::norm(fr.lambda[k]);
        if (mag2 == 0.0)
            throw DegenerateEigenvalue("eigenvalue is exactly zero");
        eo.alpha[k] = -std::log(mag2) / log_snr;
        if (eo.alpha[k] > 1.0) ++eo.m_count;
    }
    return eo;
}

} // namespace scfde
