#pragma once

#include "scfde/equalizer.hpp"
#include "scfde/infotheory.hpp"

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <thread>
#include <vector>

namespace scfde {

enum class SweepTarget { Outage, SymbolError };

struct SweepConfig {
    int memory = 0;
    int block_length = 1;
    double rate_bits = 1.0;
    EqualizerKind kind = EqualizerKind::Mmse;
    std::vector<double> snr_grid_db; // strictly increasing
    std::uint64_t trials_per_point = 1;
    std::uint64_t master_seed = 0;
    SweepTarget target = SweepTarget::Outage;
    int workers = 0;            // 0: SCFDE_WORKERS env var, else hardware count
    bool noise_enabled = true;  // SymbolError debug switch
    std::uint64_t point_stream_base = 0; // offsets the per-point substream ids
};

struct EstimatePoint {
    double snr_db = 0.0;
    double p_hat = 0.0;
    std::uint64_t trials = 0;   // Bernoulli units (channel trials, or symbols for SER)
    std::uint64_t successes = 0;
    double ci_low = 0.0;        // 95% Wilson interval
    double ci_high = 0.0;
    std::uint64_t degenerate_redraws = 0;
};

struct SlopeFit {
    double slope = 0.0;     // negated log-log regression slope (diversity order)
    double intercept = 0.0; // in log10 probability at log10 SNR = 0
    double r_squared = 1.0;
    std::vector<std::size_t> window; // indices of the fitted points
};

void validate(const SweepConfig& config);

/// Outage frequency per SNR point: each trial draws one channel and
/// evaluates the outage indicator. Bit-identical for a given seed
/// regardless of worker count.
std::vector<EstimatePoint> estimate_outage(const SweepConfig& config);

/// Uncoded 2^R-PSK symbol error rate per SNR point: channel draw, PSK
/// block, cyclic-prefix transmission, per-bin equalization, hard slicing.
/// p_hat counts symbol errors over trials * L symbols. ZF trials that hit
/// an exactly zero eigenvalue redraw the channel and are counted in
/// degenerate_redraws.
std::vector<EstimatePoint> estimate_ser(const SweepConfig& config);

/// 95% Wilson score interval.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials);

/// Least squares of log10(p_hat) on log10(SNR) over the given point
/// indices, slope negated. Throws InsufficientData for fewer than two
/// usable points and InvalidConfig on zero-success points in an explicit
/// window.
SlopeFit fit_slope(std::span<const EstimatePoint> curve,
                   std::span<const std::size_t> window);

/// Default window rule: the highest-SNR contiguous run of points with
/// successes >= min_successes.
SlopeFit fit_slope(std::span<const EstimatePoint> curve,
                   std::uint64_t min_successes = 30);

int resolve_workers(int requested);

namespace detail {

struct PointTally {
    std::uint64_t successes = 0;
    std::uint64_t successes_alt = 0; // second event, e.g. the L' side of Lemma 2
    std::uint64_t redraws = 0;

    void operator+=(const PointTally& o) {
        successes += o.successes;
        successes_alt += o.successes_alt;
        redraws += o.redraws;
    }
};

/// Runs half-open trial-index ranges through worker callables.
/// `make_worker()` returns a callable `void(std::uint64_t t0, std::uint64_t
/// t1, PointTally&)` owning any scratch state. Ranges are fixed-size chunks
/// handed out via an atomic counter; accumulation is exact integer
/// addition, so the result is schedule-independent.
template <class WorkerFactory>
PointTally run_chunks(std::uint64_t trials, int workers, WorkerFactory&& make_worker) {
    workers = resolve_workers(workers);
    if (trials < 4096 || workers <= 1) {
        PointTally tally;
        auto worker = make_worker();
        worker(0, trials, tally);
        return tally;
    }
    std::atomic<std::uint64_t> next{0};
    const std::uint64_t chunk = 16384;
    std::vector<PointTally> tallies(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            auto worker = make_worker();
            PointTally local;
            for (;;) {
                const std::uint64_t t0 = next.fetch_add(chunk, std::memory_order_relaxed);
                if (t0 >= trials) break;
                worker(t0, std::min(trials, t0 + chunk), local);
            }
            tallies[w] = local;
        });
    }
    for (auto& th : pool) th.join();
    PointTally total;
    for (const auto& t : tallies) total += t;
    return total;
}

/// Per-trial wrapper over run_chunks: `make_worker()` returns a callable
/// `void(std::uint64_t trial, PointTally&)`.
template <class WorkerFactory>
PointTally run_trials(std::uint64_t trials, int workers, WorkerFactory&& make_worker) {
    return run_chunks(trials, workers, [&] {
        return [worker = make_worker()](std::uint64_t t0, std::uint64_t t1,
                                        PointTally& tally) mutable {
            for (std::uint64_t t = t0; t < t1; ++t) worker(t, tally);
        };
    });
}

} // namespace detail

} // namespace scfde
