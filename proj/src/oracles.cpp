#include "scfde/oracles.hpp"

#include "scfde/errors.hpp"

#include <cmath>
#include <numbers>

#if defined(__x86_64__)
#include <immintrin.h>
extern "C" __m256d _ZGVdN4v_log(__m256d); // glibc libmvec
#endif

namespace scfde {

namespace {

using LogBatch = void (*)(double*, std::size_t);

void log_batch_scalar(double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) v[i] = std::log(v[i]);
}

#if defined(__x86_64__)
__attribute__((target("avx2"))) void log_batch_avx2(double* v, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(v + i, _ZGVdN4v_log(_mm256_loadu_pd(v + i)));
    for (; i < n; ++i) v[i] = std::log(v[i]);
}
#endif

LogBatch pick_log_batch() {
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2")) return log_batch_avx2;
#endif
    return log_batch_scalar;
}

const LogBatch log_batch = pick_log_batch();

std::vector<EstimatePoint> tail_points(std::span<const double> grid,
                                       std::uint64_t trials,
                                       const std::vector<detail::PointTally>& tallies) {
    std::vector<EstimatePoint> pts(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        pts[i].snr_db = grid[i];
        pts[i].trials = trials;
        pts[i].successes = tallies[i].successes;
        pts[i].p_hat =
            static_cast<double>(tallies[i].successes) / static_cast<double>(trials);
        std::tie(pts[i].ci_low, pts[i].ci_high) =
            wilson_interval(tallies[i].successes, trials);
        pts[i].degenerate_redraws = tallies[i].redraws;
    }
    return pts;
}

void require_grid(std::span<const double> grid, std::uint64_t trials) {
    if (grid.empty()) throw InvalidConfig("SNR grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw InvalidConfig("SNR grid must be strictly increasing");
    if (trials < 1) throw InvalidConfig("at least one trial is required");
}

} // namespace

TailProbeResult lemma1_tail_probability(int n, double m,
                                        std::span<const double> snr_grid_db,
                                        std::uint64_t trials, std::uint64_t seed,
                                        int workers, std::uint64_t min_successes) {
    if (n < 1) throw InvalidConfig("need at least one variable");
    if (!(m > 0.0) || !(m < static_cast<double>(n)))
        throw InvalidConfig("m must lie in (0, n)");
    require_grid(snr_grid_db, trials);

    std::vector<detail::PointTally> tallies(snr_grid_db.size());
    for (std::size_t pi = 0; pi < snr_grid_db.size(); ++pi) {
        const double snr = std::pow(10.0, snr_grid_db[pi] / 10.0);
        // Only the squared magnitudes enter the sum, and |CN(0,1)|^2 is
        // Exp(1); the magnitudes are drawn by inverse transform and the
        // logs evaluated in batches.
        tallies[pi] = detail::run_chunks(trials, workers, [&] {
            constexpr std::uint64_t batch = 512;
            return [&, pi, buf = std::vector<double>(batch * n)](
                       std::uint64_t t0, std::uint64_t t1,
                       detail::PointTally& acc) mutable {
                for (std::uint64_t b0 = t0; b0 < t1; b0 += batch) {
                    const std::uint64_t b1 = std::min(t1, b0 + batch);
                    const std::size_t cnt = static_cast<std::size_t>(b1 - b0) * n;
                    std::size_t idx = 0;
                    for (std::uint64_t t = b0; t < b1; ++t) {
                        RandomStream rs(seed, pi, t);
                        for (int k = 0; k < n; ++k) buf[idx++] = rs.uniform_pos();
                    }
                    log_batch(buf.data(), cnt);
                    idx = 0;
                    for (std::uint64_t t = b0; t < b1; ++t) {
                        double s = 0.0;
                        for (int k = 0; k < n; ++k)
                            s += 1.0 / (1.0 - snr * buf[idx++]);
                        if (s > m) ++acc.successes;
                    }
                }
            };
        });
    }
    TailProbeResult res;
    res.points = tail_points(snr_grid_db, trials, tallies);
    try {
        res.fit = fit_slope(res.points, min_successes);
    } catch (const InsufficientData&) {
    }
    return res;
}

std::vector<std::uint64_t> lemma1_mcount_histogram(int n, double snr,
                                                   std::uint64_t trials,
                                                   std::uint64_t seed) {
    if (n < 1) throw InvalidConfig("need at least one variable");
    if (!(snr > 1.0)) throw InvalidConfig("SNR must exceed 1");
    std::vector<std::uint64_t> hist(n + 1, 0);
    const double bound = 1.0 / snr; // alpha_k > 1 iff |lambda_k|^2 < 1/SNR
    for (std::uint64_t t = 0; t < trials; ++t) {
        RandomStream rs(seed, 0, t);
        int count = 0;
        for (int k = 0; k < n; ++k)
            if (std::norm(rs.cgauss()) < bound) ++count;
        ++hist[count];
    }
    return hist;
}

cplx dft_interpolate(const FrequencyResponse& fr, double omega) {
    const int L = fr.block_length();
    const cplx numer = 1.0 - std::polar(1.0, -static_cast<double>(L) * omega);
    cplx acc = 0.0;
    for (int i = 0; i < L; ++i) {
        const double theta =
            omega - 2.0 * std::numbers::pi * static_cast<double>(i) / L;
        const cplx denom = 1.0 - std::polar(1.0, -theta);
        if (std::abs(denom) < 1e-9) return fr.lambda[i]; // on-grid frequency
        acc += fr.lambda[i] * numer / denom;
    }
    return acc / static_cast<double>(L);
}

InterpolationWeights interpolation_weights(int base_length, int factor) {
    if (base_length < 1 || factor < 1)
        throw InvalidConfig("base length and factor must be positive");
    const int fine = base_length * factor;
    InterpolationWeights w;
    w.base_length = base_length;
    w.factor = factor;
    w.gamma.assign(fine, cvec(base_length, 0.0));
    for (int k = 0; k < fine; ++k) {
        const double omega = 2.0 * std::numbers::pi * static_cast<double>(k) / fine;
        const cplx numer = 1.0 - std::polar(1.0, -static_cast<double>(base_length) * omega);
        bool on_grid = false;
        for (int i = 0; i < base_length; ++i) {
            const double theta =
                omega - 2.0 * std::numbers::pi * static_cast<double>(i) / base_length;
            const cplx denom = 1.0 - std::polar(1.0, -theta);
            if (std::abs(denom) < 1e-9) {
                std::fill(w.gamma[k].begin(), w.gamma[k].end(), cplx(0.0));
                w.gamma[k][i] = 1.0;
                on_grid = true;
                break;
            }
            w.gamma[k][i] = numer / (denom * static_cast<double>(base_length));
        }
        (void)on_grid;
    }
    return w;
}

SubsampleCheck zero_pad_subsample_check(const ChannelTaps& taps, int base_length,
                                        int factor) {
    if (factor < 1) throw InvalidConfig("subsampling factor must be positive");
    const FrequencyResponse coarse = frequency_response(taps, base_length);
    const FrequencyResponse fine = frequency_response(taps, base_length * factor);

    SubsampleCheck chk;
    for (int k = 0; k < base_length; ++k) {
        const double err = std::abs(fine.lambda[static_cast<std::size_t>(factor) * k] -
                                    coarse.lambda[k]);
        if (err > chk.subsample_err) chk.subsample_err = err;
    }

    const InterpolationWeights w = interpolation_weights(base_length, factor);
    for (int k = 0; k < base_length * factor; ++k) {
        cplx acc = 0.0;
        for (int i = 0; i < base_length; ++i) acc += w.gamma[k][i] * coarse.lambda[i];
        const double err = std::abs(acc - fine.lambda[k]);
        if (err > chk.interp_err) chk.interp_err = err;
    }
    chk.ok = chk.subsample_err <= 1e-10 && chk.interp_err <= 1e-10;
    return chk;
}

SlopePair lemma2_slope_pair(int memory, int block_length, int block_length_prime,
                            double m, std::span<const double> snr_grid_db,
                            std::uint64_t trials, std::uint64_t seed, int workers,
                            std::uint64_t min_successes) {
    if (memory < 0) throw InvalidConfig("channel memory must be non-negative");
    if (block_length < memory + 1 || block_length_prime < memory + 1)
        throw InvalidConfig("block length must be at least nu+1");
    if (!(m > 0.0) || !(m < static_cast<double>(memory) + 1.0))
        throw InvalidConfig("m must lie in (0, nu+1)");
    require_grid(snr_grid_db, trials);

    const PartialDft pd_a(memory, block_length);
    const PartialDft pd_b(memory, block_length_prime);

    std::vector<detail::PointTally> tallies(snr_grid_db.size());
    for (std::size_t pi = 0; pi < snr_grid_db.size(); ++pi) {
        const double snr = std::pow(10.0, snr_grid_db[pi] / 10.0);
        tallies[pi] = detail::run_trials(trials, workers, [&] {
            return [&, pi, taps = cvec(memory + 1), la = cvec(block_length),
                    lb = cvec(block_length_prime)](std::uint64_t trial,
                                                   detail::PointTally& acc) mutable {
                RandomStream rs(seed, pi, trial);
                for (auto& h : taps) h = rs.cgauss();
                pd_a.response(taps, la);
                pd_b.response(taps, lb);
                double sa = 0.0;
                for (const auto& l : la) sa += 1.0 / (1.0 + snr * std::norm(l));
                double sb = 0.0;
                for (const auto& l : lb) sb += 1.0 / (1.0 + snr * std::norm(l));
                if (sa > m) ++acc.successes;
                if (sb > m) ++acc.successes_alt;
            };
        });
    }

    SlopePair pair;
    pair.first.points = tail_points(snr_grid_db, trials, tallies);
    std::vector<detail::PointTally> alt(tallies.size());
    for (std::size_t i = 0; i < tallies.size(); ++i)
        alt[i].successes = tallies[i].successes_alt;
    pair.second.points = tail_points(snr_grid_db, trials, alt);
    try {
        pair.first.fit = fit_slope(pair.first.points, min_successes);
        pair.second.fit = fit_slope(pair.second.points, min_successes);
        pair.slope_difference = pair.first.fit->slope - pair.second.fit->slope;
    } catch (const InsufficientData&) {
    }
    return pair;
}

double remark1_independence_check(int memory, std::uint64_t trials,
                                  std::uint64_t seed, int block_length) {
    if (memory < 0) throw InvalidConfig("channel memory must be non-negative");
    if (trials < 2) throw InvalidConfig("need at least two draws");
    const int L = block_length > 0 ? block_length : memory + 1;
    if (L < memory + 1) throw InvalidConfig("block length must be at least nu+1");
    if (L == 1) return 0.0; // single eigenvalue, nothing to correlate

    const PartialDft pd(memory, L);
    cvec taps(memory + 1), lambda(L);
    cvec mean(L, 0.0);
    std::vector<cvec> cross(L, cvec(L, 0.0));
    for (std::uint64_t t = 0; t < trials; ++t) {
        RandomStream rs(seed, 0, t);
        for (auto& h : taps) h = rs.cgauss();
        pd.response(taps, lambda);
        for (int j = 0; j < L; ++j) {
            mean[j] += lambda[j];
            for (int k = j; k < L; ++k) cross[j][k] += lambda[j] * std::conj(lambda[k]);
        }
    }
    const double inv_n = 1.0 / static_cast<double>(trials);
    for (auto& v : mean) v *= inv_n;
    double worst = 0.0;
    for (int j = 0; j < L; ++j) {
        for (int k = j + 1; k < L; ++k) {
            const cplx cjk = cross[j][k] * inv_n - mean[j] * std::conj(mean[k]);
            const double cjj =
                (cross[j][j] * inv_n - mean[j] * std::conj(mean[j])).real();
            const double ckk =
                (cross[k][k] * inv_n - mean[k] * std::conj(mean[k])).real();
            const double corr = std::abs(cjk) / std::sqrt(cjj * ckk);
            if (corr > worst) worst = corr;
        }
    }
    return worst;
}

} // namespace scfde
