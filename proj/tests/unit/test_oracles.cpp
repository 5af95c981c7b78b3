#include "scfde/oracles.hpp"

#include "scfde/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace scfde;

TEST_CASE("lemma1: n=1 event has a closed form and unit slope") {
    // {1/(1+SNR|z|^2) > m} iff |z|^2 < (1-m)/(m SNR)
    const double m = 0.5;
    const std::vector<double> grid{10.0, 12.5, 15.0, 17.5, 20.0, 22.5, 25.0};
    const auto res = lemma1_tail_probability(1, m, grid, 1'000'000, 501);
    for (const auto& pt : res.points) {
        const double snr = std::pow(10.0, pt.snr_db / 10.0);
        const double p = 1.0 - std::exp(-(1.0 - m) / (m * snr));
        const double se = std::sqrt(p * (1.0 - p) / double(pt.trials));
        CHECK(std::abs(pt.p_hat - p) < 3.0 * se);
    }
    CHECK(res.fit->slope == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("lemma1: validation and determinism") {
    const std::vector<double> grid{10.0, 20.0};
    CHECK_THROWS_AS((void)lemma1_tail_probability(4, 4.5, grid, 100, 1), InvalidConfig);
    CHECK_THROWS_AS((void)lemma1_tail_probability(4, 0.0, grid, 100, 1), InvalidConfig);
    const auto a = lemma1_tail_probability(3, 1.5, grid, 50'000, 502, 1, 1);
    const auto b = lemma1_tail_probability(3, 1.5, grid, 50'000, 502, 4, 1);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(a.points[i].successes == b.points[i].successes);
}

TEST_CASE("lemma1: floor discontinuity separates m below and above 2") {
    // the tail exponent jumps from 2 to 3 across m = 2. An epsilon straddle
    // (1.999 vs 2.001) only separates once P[a third term contributes >
    // epsilon] = 1 - exp(-(1/eps - 1)/SNR) is small, i.e. SNR >> 1/eps, far
    // beyond reach here; a 0.3 straddle separates cleanly at 10-20 dB.
    const std::vector<double> grid{10.0, 12.5, 15.0, 17.5, 20.0};
    const auto below = lemma1_tail_probability(4, 1.7, grid, 20'000'000, 512);
    const auto above = lemma1_tail_probability(4, 2.3, grid, 20'000'000, 512);
    REQUIRE(below.fit.has_value());
    REQUIRE(above.fit.has_value());
    CHECK(above.fit->slope - below.fit->slope >= 0.5);
}

TEST_CASE("lemma1 m-count histogram is Binomial(n, 1-exp(-1/SNR))") {
    const int n = 4;
    const double snr = 10.0;
    const std::uint64_t trials = 100'000;
    const auto hist = lemma1_mcount_histogram(n, snr, trials, 503);
    REQUIRE(hist.size() == 5);
    const double p = 1.0 - std::exp(-1.0 / snr);
    // chi-square against the binomial pmf, merging the sparse top bins
    double expect[5];
    for (int k = 0; k <= 4; ++k) {
        double c = 1.0;
        for (int i = 0; i < k; ++i) c *= double(4 - i) / double(i + 1);
        expect[k] = trials * c * std::pow(p, k) * std::pow(1.0 - p, 4 - k);
    }
    const double obs_top = double(hist[3] + hist[4]);
    const double exp_top = expect[3] + expect[4];
    double chi2 = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double d = double(hist[k]) - expect[k];
        chi2 += d * d / expect[k];
    }
    chi2 += (obs_top - exp_top) * (obs_top - exp_top) / exp_top;
    // df = 3, p-value > 0.001 iff chi2 < 16.266
    CHECK(chi2 < 16.266);
}

TEST_CASE("dft_interpolate: reproduces grid samples and flat spectra") {
    RandomStream rs(504, 0, 0);
    const auto ch = draw_channel(2, rs);
    const int L = 8;
    const auto fr = frequency_response(ch, L);
    for (int k = 0; k < L; ++k) {
        const double omega = 2.0 * std::numbers::pi * k / L;
        CHECK(std::abs(dft_interpolate(fr, omega) - fr.lambda[k]) < 1e-10);
    }
    const auto impulse = frequency_response(ChannelTaps{{1.0}}, 8);
    for (double omega = 0.0; omega < 6.28; omega += 0.37)
        CHECK(std::abs(dft_interpolate(impulse, omega) - 1.0) < 1e-12);
}

TEST_CASE("dft_interpolate: matches the direct Fourier sum off grid") {
    RandomStream rs(505, 0, 0);
    const auto ch = draw_channel(2, rs);
    const int L = 8;
    const auto fr = frequency_response(ch, L);
    for (double omega : {0.123, 1.77, 3.01, 5.5, -0.9, 9.42}) {
        cplx direct = 0.0;
        for (int i = 0; i <= 2; ++i)
            direct += ch.taps[i] * std::polar(1.0, -omega * i);
        CHECK(std::abs(dft_interpolate(fr, omega) - direct) < 1e-9);
    }
}

TEST_CASE("interpolation weights: subsampled rows are unit vectors") {
    const auto w = interpolation_weights(5, 3);
    REQUIRE(w.gamma.size() == 15);
    for (int kp = 0; kp < 5; ++kp) {
        const auto& row = w.gamma[3 * kp];
        for (int i = 0; i < 5; ++i) {
            const double want = i == kp ? 1.0 : 0.0;
            CHECK(std::abs(row[i] - want) < 1e-10);
        }
    }
}

TEST_CASE("zero_pad_subsample_check: identity, hand case, random sweep") {
    RandomStream rs(506, 0, 0);
    const auto ch = draw_channel(3, rs);
    const auto same = zero_pad_subsample_check(ch, 8, 1);
    CHECK(same.ok);
    CHECK(same.subsample_err == 0.0);

    const ChannelTaps delay{{0.0, 1.0}};
    const auto fine = frequency_response(delay, 4);
    CHECK(std::abs(fine.lambda[0] - cplx(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(fine.lambda[1] - cplx(0.0, -1.0)) < 1e-12);
    CHECK(std::abs(fine.lambda[2] - cplx(-1.0, 0.0)) < 1e-12);
    CHECK(std::abs(fine.lambda[3] - cplx(0.0, 1.0)) < 1e-12);
    const auto hand = zero_pad_subsample_check(delay, 2, 2);
    CHECK(hand.ok);

    for (int t = 0; t < 100; ++t) {
        RandomStream cfg(507, 0, t);
        const int nu = int(cfg.bits(2));               // 0..3
        const int L = nu + 1 + int(cfg.bits(4));       // <= nu+16
        const int T = 1 + int(cfg.bits(2));            // 1..4
        const auto taps = draw_channel(nu, cfg);
        const auto chk = zero_pad_subsample_check(taps, L, T);
        CHECK(chk.ok);
        CHECK(chk.subsample_err <= 1e-10);
        CHECK(chk.interp_err <= 1e-10);
    }
}

TEST_CASE("lemma2: equal block lengths give identical estimates") {
    const std::vector<double> grid{10.0, 15.0, 20.0};
    const auto pair = lemma2_slope_pair(2, 6, 6, 1.5, grid, 100'000, 508, 0, 10);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(pair.first.points[i].successes == pair.second.points[i].successes);
    CHECK(*pair.slope_difference == doctest::Approx(0.0));
}

TEST_CASE("lemma2: nu=1 slope matches floor(m)+1 at both lengths") {
    const std::vector<double> grid{10.0, 12.5, 15.0, 17.5, 20.0, 22.5};
    const auto pair = lemma2_slope_pair(1, 2, 8, 0.5, grid, 2'000'000, 509);
    CHECK(pair.first.fit->slope == doctest::Approx(1.0).epsilon(0.3));
    CHECK(pair.second.fit->slope == doctest::Approx(1.0).epsilon(0.3));
    CHECK_THROWS_AS(
        (void)lemma2_slope_pair(1, 2, 8, 2.5, grid, 100, 1), InvalidConfig);
    CHECK_THROWS_AS(
        (void)lemma2_slope_pair(1, 1, 8, 0.5, grid, 100, 1), InvalidConfig);
}

TEST_CASE("remark1_independence_check: positive and negative controls") {
    CHECK(remark1_independence_check(1, 100'000, 510) < 0.01);
    CHECK(remark1_independence_check(0, 1'000, 510) == 0.0);
    // L > nu+1 leaves the partial DFT rank deficient: strong correlations
    CHECK(remark1_independence_check(3, 20'000, 510, 8) > 0.1);
}

TEST_CASE("alpha CDF matches exp(-SNR^-alpha) within the DKW band") {
    const double snr = 100.0;
    const int n = 100'000;
    std::vector<double> alpha(n);
    for (int t = 0; t < n; ++t) {
        RandomStream rs(511, 0, t);
        const auto fr = frequency_response(draw_channel(0, rs), 1);
        alpha[t] = exponential_orders(fr, snr).alpha[0];
    }
    std::sort(alpha.begin(), alpha.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = std::exp(-std::pow(snr, -alpha[i]));
        d = std::max(d, std::abs(f - double(i + 1) / n));
        d = std::max(d, std::abs(f - double(i) / n));
    }
    CHECK(d < std::sqrt(std::log(2.0 / 1e-3) / (2.0 * n)));
}
