#include "scfde/rng.hpp"

#include <cmath>
#include <cstdlib>

namespace scfde {
namespace detail {

ZigTables::ZigTables() {
    constexpr double m = 4503599627370496.0; // 2^52
    const double fr = std::exp(-0.5 * r * r);
    // area per layer: rectangle [0,R]x[0,f(R)] plus the tail mass
    const double v = r * fr + std::sqrt(std::atan(1.0) * 2.0) *
                                  std::erfc(r / std::sqrt(2.0));

    double dn = r;
    double tn = r;
    const double q = v / fr;

    k[0] = static_cast<std::uint64_t>((dn / q) * m);
    k[1] = 0;
    w[0] = q / m;
    w[layers - 1] = dn / m;
    f[0] = 1.0;
    f[layers - 1] = fr;
    for (int i = layers - 2; i >= 1; --i) {
        dn = std::sqrt(-2.0 * std::log(v / dn + std::exp(-0.5 * dn * dn)));
        k[i + 1] = static_cast<std::uint64_t>((dn / tn) * m);
        tn = dn;
        f[i] = std::exp(-0.5 * dn * dn);
        w[i] = dn / m;
    }
    // the recursion must close at the top layer; if it does not, the
    // constants above were mangled
    const double top_area = dn * (1.0 - std::exp(-0.5 * dn * dn));
    if (std::abs(top_area - v) > 1e-9 * v) std::abort();
}

const ZigTables zig_tables{};

} // namespace detail

double RandomStream::normal_fixup(std::uint64_t r, int idx, double x) noexcept {
    const detail::ZigTables& t = detail::zig_tables;
    const bool neg = (r >> 8) & 1;
    if (idx == 0) {
        // exact tail sample beyond R via the exponential majorant
        for (;;) {
            const double xt = -std::log(uniform_pos()) * detail::ZigTables::inv_r;
            const double yt = -std::log(uniform_pos());
            if (yt + yt > xt * xt)
                return neg ? -(detail::ZigTables::r + xt) : (detail::ZigTables::r + xt);
        }
    }
    if (t.f[idx] + uniform01() * (t.f[idx - 1] - t.f[idx]) < std::exp(-0.5 * x * x))
        return neg ? -x : x;
    return 0.0; // rejected; caller retries
}

} // namespace scfde
