#include "scfde/equalizer.hpp"

#include "scfde/errors.hpp"
#include "support/dense_oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace scfde;

namespace {

FrequencyResponse flat(int L, cplx v = 1.0) {
    FrequencyResponse fr;
    fr.memory = 0;
    fr.lambda.assign(L, v);
    return fr;
}

} // namespace

TEST_CASE("fde_coefficients: flat channel") {
    const auto fr = flat(4);
    const auto mmse = fde_coefficients(fr, 1.0, EqualizerKind::Mmse);
    for (const auto& w : mmse) CHECK(std::abs(w - 0.5) < 1e-15);
    const auto zf = fde_coefficients(fr, 1.0, EqualizerKind::Zf);
    for (const auto& w : zf) CHECK(std::abs(w - 1.0) < 1e-15);
}

TEST_CASE("fde_coefficients: ZF rejects a zero eigenvalue") {
    FrequencyResponse fr = flat(3);
    fr.lambda[1] = 0.0;
    CHECK_THROWS_AS((void)fde_coefficients(fr, 1.0, EqualizerKind::Zf),
                    DegenerateEigenvalue);
    CHECK_NOTHROW((void)fde_coefficients(fr, 1.0, EqualizerKind::Mmse));
}

TEST_CASE("MMSE coefficient assembly reproduces the dense inverse") {
    RandomStream rs(201, 0, 0);
    const auto ch = draw_channel(2, rs);
    const int L = 8;
    const double snr = 10.0;
    const auto fr = frequency_response(ch, L);
    const auto w = fde_coefficients(fr, snr, EqualizerKind::Mmse);

    // W = IDFT diag(w) DFT assembled column by column
    Dft dft(L);
    test::CMat W(L, L);
    for (int c = 0; c < L; ++c) {
        cvec e(L, 0.0);
        e[c] = 1.0;
        const auto col = equalize(e, w);
        for (int r = 0; r < L; ++r) W(r, c) = col[r];
    }
    const auto want = test::dense_mmse_matrix(ch, L, snr);
    for (int r = 0; r < L; ++r)
        for (int c = 0; c < L; ++c)
            CHECK(std::abs(W(r, c) - want(r, c)) < 1e-8 * (1.0 + std::abs(want(r, c))));
}

TEST_CASE("equalize: identity coefficients") {
    RandomStream rs(202, 0, 0);
    cvec y(6);
    for (auto& v : y) v = rs.cgauss();
    const cvec ones(6, 1.0);
    const auto out = equalize(y, ones);
    for (int n = 0; n < 6; ++n) CHECK(std::abs(out[n] - y[n]) < 1e-12);
    CHECK_THROWS_AS((void)equalize(y, cvec(5, 1.0)), DimensionMismatch);
}

TEST_CASE("equalize: noiseless ZF inverts the channel exactly") {
    RandomStream rs(203, 0, 0);
    const auto ch = draw_channel(2, rs);
    const int L = 8;
    cvec x(L);
    for (auto& v : x) v = rs.cgauss();
    const double snr = 4.0;
    const auto y = cp_transmit(ch, x, snr, nullptr);
    const auto fr = frequency_response(ch, L);
    const auto out = equalize(y, fde_coefficients(fr, snr, EqualizerKind::Zf));
    for (int n = 0; n < L; ++n)
        CHECK(std::abs(out[n] - std::sqrt(snr) * x[n]) <
              1e-8 * (1.0 + std::abs(x[n])));
}

TEST_CASE("equalize: noiseless MMSE matches the dense oracle") {
    RandomStream rs(204, 0, 0);
    const auto ch = draw_channel(1, rs);
    const int L = 4;
    cvec x(L);
    for (auto& v : x) v = rs.cgauss();
    const double snr = 7.0;
    const auto y = cp_transmit(ch, x, snr, nullptr);
    const auto fr = frequency_response(ch, L);
    const auto got = equalize(y, fde_coefficients(fr, snr, EqualizerKind::Mmse));

    const auto H = test::circulant_matrix(ch, L);
    const test::CVec want =
        std::sqrt(snr) * (test::dense_mmse_matrix(ch, L, snr) * (H * test::to_eigen(x)));
    for (int n = 0; n < L; ++n)
        CHECK(std::abs(got[n] - want(n)) < 1e-8 * (1.0 + std::abs(want(n))));
}

TEST_CASE("decision_sinr: flat channels") {
    for (const double s : {0.5, 3.0, 100.0}) {
        const auto fr = flat(5);
        CHECK(decision_sinr(fr, s, EqualizerKind::Mmse) == doctest::Approx(s).epsilon(1e-12));
        CHECK(decision_sinr(fr, s, EqualizerKind::Zf) == doctest::Approx(s).epsilon(1e-12));
    }
    FrequencyResponse pm = flat(2);
    pm.lambda = {1.0, -1.0};
    CHECK(decision_sinr(pm, 3.0, EqualizerKind::Mmse) == doctest::Approx(3.0));
    CHECK(decision_sinr(pm, 3.0, EqualizerKind::Zf) == doctest::Approx(3.0));
}

TEST_CASE("decision_sinr: matches the dense trace oracle") {
    RandomStream rs(205, 0, 0);
    const auto ch = draw_channel(2, rs);
    const int L = 8;
    const double snr = 10.0;
    const auto fr = frequency_response(ch, L);
    const auto H = test::circulant_matrix(ch, L);
    const test::CMat R =
        (H.adjoint() * H + test::CMat::Identity(L, L) / snr).inverse();
    const double want = snr / (R.trace().real() / L) - 1.0;
    CHECK(decision_sinr(fr, snr, EqualizerKind::Mmse) ==
          doctest::Approx(want).epsilon(1e-8));
    // per-stream SINR from the dense matrix is identical across streams
    for (int l = 0; l < L; ++l) {
        const double per_stream = snr / R(l, l).real() - 1.0;
        CHECK(per_stream == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("MMSE SINR dominates ZF SINR") {
    int checked = 0;
    for (int t = 0; t < 20'000; ++t) {
        RandomStream rs(206, 0, t);
        const int nu = 1 + int(rs.bits(1));       // 1..2
        const int L = nu + 1 + int(rs.bits(3));   // small blocks
        const auto fr = frequency_response(draw_channel(nu, rs), L);
        for (const double snr : {1.0, 10.0, 100.0}) {
            const double zf = decision_sinr(fr, snr, EqualizerKind::Zf);
            const double mmse = decision_sinr(fr, snr, EqualizerKind::Mmse);
            CHECK(mmse >= zf - 1e-12);
            ++checked;
        }
    }
    CHECK(checked == 60'000);
}

TEST_CASE("decision_sinr increases with SNR") {
    RandomStream rs(207, 0, 0);
    const auto fr = frequency_response(draw_channel(2, rs), 8);
    for (const auto kind : {EqualizerKind::Mmse, EqualizerKind::Zf}) {
        double prev = 0.0;
        for (double db = -10.0; db <= 40.0; db += 1.0) {
            const double g = decision_sinr(fr, std::pow(10.0, db / 10.0), kind);
            CHECK(g > prev);
            prev = g;
        }
    }
}

TEST_CASE("residual_noise_stats: flat-channel closed forms") {
    const int L = 4;
    const double snr = 9.0;
    const auto fr = flat(L);
    cvec x(L);
    RandomStream rs(208, 0, 0);
    for (auto& v : x) v = std::polar(1.0, rs.uniform01() * 6.28);
    const auto st = residual_noise_stats(fr, snr, x);
    for (int n = 0; n < L; ++n)
        CHECK(std::abs(st.mean[n] - (-std::sqrt(snr) / (1.0 + snr)) * x[n]) < 1e-12);
    CHECK(st.variance == doctest::Approx(snr * snr / ((snr + 1) * (snr + 1))).epsilon(1e-12));
    for (const double c : st.diag_cov)
        CHECK(c == doctest::Approx(snr / (snr + 1)).epsilon(1e-12));

    // SNR -> infinity limit on the flat channel: variance -> 1
    const auto hi = residual_noise_stats(fr, 1e12, x);
    CHECK(hi.variance == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("residual_noise_stats: empirical moments over noise draws") {
    const std::uint64_t seed = 209;
    RandomStream chs(seed, 0, 0);
    const auto ch = draw_channel(1, chs);
    const int L = 4;
    const double snr = 5.0;
    const auto fr = frequency_response(ch, L);
    const auto w = fde_coefficients(fr, snr, EqualizerKind::Mmse);
    cvec x(L);
    for (auto& v : x) v = std::polar(1.0, chs.uniform01() * 6.28);
    const auto st = residual_noise_stats(fr, snr, x);

    const int n = 100'000;
    cvec mean_acc(L, 0.0);
    std::vector<double> var_acc(L, 0.0);
    for (int t = 0; t < n; ++t) {
        RandomStream noise(seed, 1, t);
        const auto y = cp_transmit(ch, x, snr, &noise);
        const auto out = equalize(y, w);
        for (int l = 0; l < L; ++l) {
            const cplx r = out[l] - std::sqrt(snr) * x[l];
            mean_acc[l] += r;
            var_acc[l] += std::norm(r - st.mean[l]);
        }
    }
    for (int l = 0; l < L; ++l) {
        const cplx m = mean_acc[l] / double(n);
        const double se = std::sqrt(st.variance / n);
        CHECK(std::abs(m.real() - st.mean[l].real()) < 3.0 * se);
        CHECK(std::abs(m.imag() - st.mean[l].imag()) < 3.0 * se);
        const double v = var_acc[l] / n;
        // variance of |z|^2 for complex gaussian z is var^2
        CHECK(std::abs(v - st.variance) < 3.0 * st.variance / std::sqrt(double(n)));
    }
}

TEST_CASE("residual_noise_stats: dimension check") {
    const auto fr = flat(4);
    CHECK_THROWS_AS((void)residual_noise_stats(fr, 1.0, cvec(3, 1.0)),
                    DimensionMismatch);
}

TEST_CASE("residual_noise_stats: noiseless equalizer output sits at the mean") {
    RandomStream rs(211, 0, 0);
    const auto ch = draw_channel(2, rs);
    const int L = 8;
    const double snr = 12.0;
    const auto fr = frequency_response(ch, L);
    cvec x(L);
    for (auto& v : x) v = std::polar(1.0, rs.uniform01() * 6.283185307179586);
    const auto st = residual_noise_stats(fr, snr, x);

    const auto y = cp_transmit(ch, x, snr, nullptr);
    const auto out = equalize(y, fde_coefficients(fr, snr, EqualizerKind::Mmse));
    for (int l = 0; l < L; ++l)
        CHECK(std::abs((out[l] - std::sqrt(snr) * x[l]) - st.mean[l]) < 1e-10);
}

TEST_CASE("residual_noise_stats: covariance splits into mean power plus variance") {
    // diag_cov - variance equals the payload-averaged |mean|^2,
    // (SNR/L) sum (SNR|lambda_k|^2 + 1)^-2, and is never negative
    for (int t = 0; t < 100; ++t) {
        RandomStream rs(212, 0, t);
        const int nu = int(rs.bits(2));
        const int L = nu + 1 + int(rs.bits(3));
        const auto fr = frequency_response(draw_channel(nu, rs), L);
        const double snr = std::pow(10.0, rs.uniform01() * 3.0 - 0.5);
        const auto st = residual_noise_stats(fr, snr, cvec(L, 1.0));
        double mean_power = 0.0;
        for (const auto& l : fr.lambda) {
            const double d = snr * std::norm(l) + 1.0;
            mean_power += snr / (d * d);
        }
        mean_power /= double(L);
        CHECK(st.diag_cov[0] - st.variance ==
              doctest::Approx(mean_power).epsilon(1e-10));
        CHECK(st.diag_cov[0] - st.variance >= 0.0);
    }
}

TEST_CASE("slicer: exact hits, tie break, and noise margin") {
    const auto qpsk = Constellation::psk(2);
    const double snr = 16.0;

    cvec y{4.0 * qpsk.points[3]};
    CHECK(slicer(y, snr, qpsk)[0] == 3);

    y = {cplx(0.0, 0.0)}; // equidistant from every point
    CHECK(slicer(y, snr, qpsk)[0] == 0);

    for (int bits = 1; bits <= 4; ++bits) {
        const auto c = Constellation::psk(bits);
        // half the minimum distance of 2^R-PSK
        const double margin = std::sin(std::numbers::pi / c.order());
        RandomStream rs(210, bits, 0);
        for (int m = 0; m < c.order(); ++m) {
            for (int k = 0; k < 50; ++k) {
                const cplx off = std::polar(margin * 0.999 * rs.uniform01(),
                                            rs.uniform01() * 6.283185307179586);
                cvec probe{std::sqrt(snr) * (c.points[m] + off)};
                CHECK(slicer(probe, snr, c)[0] == m);
            }
        }
    }
}

TEST_CASE("constellation points are distinct and unit magnitude") {
    for (int bits = 1; bits <= 6; ++bits) {
        const auto c = Constellation::psk(bits);
        REQUIRE(c.order() == (1 << bits));
        for (int m = 0; m < c.order(); ++m) {
            CHECK(std::abs(std::abs(c.points[m]) - 1.0) < 1e-15);
            for (int k = m + 1; k < c.order(); ++k)
                CHECK(std::abs(c.points[m] - c.points[k]) > 1e-12);
        }
    }
}
