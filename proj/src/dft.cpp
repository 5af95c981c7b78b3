#include "scfde/dft.hpp"

#include "scfde/errors.hpp"

#include <cmath>
#include <numbers>

namespace scfde {

Dft::Dft(std::size_t n) : n_(n), twiddle_(n) {
    if (n == 0) throw InvalidConfig("DFT size must be positive");
    for (std::size_t m = 0; m < n; ++m)
        twiddle_[m] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m) /
                                          static_cast<double>(n));
}

void Dft::forward(std::span<const cplx> in, std::span<cplx> out) const {
    if (in.size() != n_ || out.size() != n_)
        throw DimensionMismatch("DFT input/output length must equal the transform size");
    for (std::size_t k = 0; k < n_; ++k) {
        cplx acc = 0.0;
        std::size_t idx = 0;
        for (std::size_t n = 0; n < n_; ++n) {
            acc += in[n] * twiddle_[idx];
            idx += k;
            if (idx >= n_) idx -= n_;
        }
        out[k] = acc;
    }
}

void Dft::inverse(std::span<const cplx> in, std::span<cplx> out) const {
    if (in.size() != n_ || out.size() != n_)
        throw DimensionMismatch("DFT input/output length must equal the transform size");
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t n = 0; n < n_; ++n) {
        cplx acc = 0.0;
        std::size_t idx = 0;
        for (std::size_t k = 0; k < n_; ++k) {
            acc += in[k] * std::conj(twiddle_[idx]);
            idx += n;
            if (idx >= n_) idx -= n_;
        }
        out[n] = acc * scale;
    }
}

cvec Dft::forward(std::span<const cplx> in) const {
    cvec out(n_);
    forward(in, out);
    return out;
}

cvec Dft::inverse(std::span<const cplx> in) const {
    cvec out(n_);
    inverse(in, out);
    return out;
}

} // namespace scfde
