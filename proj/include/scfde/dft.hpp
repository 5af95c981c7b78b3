#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace scfde {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

/// Direct O(N^2) DFT with a precomputed twiddle table.
///
/// Forward transform is the non-unitary convention X_k = sum_n x_n
/// e^{-j 2 pi n k / N}; the inverse carries the 1/N factor. Block lengths
/// here are at most a few tens, where the direct transform is exact enough
/// (~1e-13 relative) and fast enough; no FFT is needed.
class Dft {
public:
    explicit Dft(std::size_t n);

    std::size_t size() const { return n_; }

    /// e^{-j 2 pi m / N}, m taken mod N.
    cplx root(std::size_t m) const { return twiddle_[m % n_]; }

    void forward(std::span<const cplx> in, std::span<cplx> out) const;
    void inverse(std::span<const cplx> in, std::span<cplx> out) const;

    cvec forward(std::span<const cplx> in) const;
    cvec inverse(std::span<const cplx> in) const;

private:
    std::size_t n_;
    cvec twiddle_;
};

} // namespace scfde
