#include "scfde/montecarlo.hpp"

#include "scfde/errors.hpp"

#include <cmath>
#include <cstdlib>

namespace scfde {

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SCFDE_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void validate(const SweepConfig& config) {
    if (config.memory < 0) throw InvalidConfig("channel memory must be non-negative");
    if (config.block_length < config.memory + 1)
        throw InvalidConfig("block length must be at least nu+1");
    if (!(config.rate_bits > 0.0)) throw InvalidConfig("rate must be positive");
    if (config.trials_per_point < 1)
        throw InvalidConfig("at least one trial per point is required");
    if (config.snr_grid_db.empty()) throw InvalidConfig("SNR grid is empty");
    for (std::size_t i = 1; i < config.snr_grid_db.size(); ++i)
        if (!(config.snr_grid_db[i] > config.snr_grid_db[i - 1]))
            throw InvalidConfig("SNR grid must be strictly increasing");
    if (config.target == SweepTarget::SymbolError) {
        const double r = config.rate_bits;
        if (r < 1.0 || r != std::floor(r))
            throw InvalidConfig("symbol error sweeps require an integer rate >= 1");
    }
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054; // 97.5th normal percentile
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2n = z * z / n;
    const double denom = 1.0 + z2n;
    const double center = (p + z2n / 2.0) / denom;
    const double half =
        (z / denom) * std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n));
    double lo = successes == 0 ? 0.0 : center - half;
    double hi = successes == trials ? 1.0 : center + half;
    if (lo < 0.0) lo = 0.0;
    if (hi > 1.0) hi = 1.0;
    return {lo, hi};
}

namespace {

EstimatePoint make_point(double snr_db, std::uint64_t units,
                         const detail::PointTally& tally) {
    EstimatePoint pt;
    pt.snr_db = snr_db;
    pt.trials = units;
    pt.successes = tally.successes;
    pt.p_hat = static_cast<double>(tally.successes) / static_cast<double>(units);
    std::tie(pt.ci_low, pt.ci_high) = wilson_interval(tally.successes, units);
    pt.degenerate_redraws = tally.redraws;
    return pt;
}

} // namespace

std::vector<EstimatePoint> estimate_outage(const SweepConfig& config) {
    validate(config);
    const int nu = config.memory;
    const int L = config.block_length;
    const double threshold = std::exp2(-config.rate_bits);
    const bool mmse = config.kind == EqualizerKind::Mmse;
    const PartialDft pd(nu, L);

    std::vector<EstimatePoint> out;
    out.reserve(config.snr_grid_db.size());
    for (std::size_t pi = 0; pi < config.snr_grid_db.size(); ++pi) {
        const double snr = std::pow(10.0, config.snr_grid_db[pi] / 10.0);
        const std::uint64_t stream_hi = config.point_stream_base + pi;
        auto tally = detail::run_trials(
            config.trials_per_point, config.workers, [&] {
                return [&, taps = cvec(nu + 1), lambda = cvec(L)](
                           std::uint64_t trial, detail::PointTally& acc) mutable {
                    RandomStream rs(config.master_seed, stream_hi, trial);
                    for (;;) {
                        for (auto& h : taps) h = rs.cgauss();
                        pd.response(taps, lambda);
                        if (mmse) {
                            double s = 0.0;
                            for (int k = 0; k < L; ++k)
                                s += 1.0 / (1.0 + snr * std::norm(lambda[k]));
                            if (s / static_cast<double>(L) > threshold) ++acc.successes;
                            return;
                        }
                        bool degenerate = false;
                        double s = 0.0;
                        for (int k = 0; k < L; ++k) {
                            const double mag2 = std::norm(lambda[k]);
                            if (mag2 == 0.0) {
                                degenerate = true;
                                break;
                            }
                            s += 1.0 / (snr * mag2);
                        }
                        if (degenerate) {
                            ++acc.redraws;
                            continue;
                        }
                        const double info =
                            std::log2(1.0 + static_cast<double>(L) / s);
                        if (info < config.rate_bits) ++acc.successes;
                        return;
                    }
                };
            });
        out.push_back(make_point(config.snr_grid_db[pi], config.trials_per_point, tally));
    }
    return out;
}

std::vector<EstimatePoint> estimate_ser(const SweepConfig& config) {
    validate(config);
    if (config.target != SweepTarget::SymbolError)
        throw InvalidConfig("config target must be SymbolError");
    const int nu = config.memory;
    const int L = config.block_length;
    const int bits = static_cast<int>(config.rate_bits);
    const Constellation constellation = Constellation::psk(bits);
    const bool mmse = config.kind == EqualizerKind::Mmse;
    const PartialDft pd(nu, L);
    const Dft dft(L);

    std::vector<EstimatePoint> out;
    out.reserve(config.snr_grid_db.size());
    for (std::size_t pi = 0; pi < config.snr_grid_db.size(); ++pi) {
        const double snr = std::pow(10.0, config.snr_grid_db[pi] / 10.0);
        const double amp = std::sqrt(snr);
        const double inv_snr = 1.0 / snr;
        const std::uint64_t stream_hi = config.point_stream_base + pi;
        auto tally = detail::run_trials(
            config.trials_per_point, config.workers, [&] {
                struct Scratch {
                    cvec taps, lambda, x, y, spec, eq;
                    std::vector<int> sent;
                };
                return [&, sc = Scratch{cvec(nu + 1), cvec(L), cvec(L), cvec(L),
                                        cvec(L), cvec(L), std::vector<int>(L)}](
                           std::uint64_t trial, detail::PointTally& acc) mutable {
                    RandomStream rs(config.master_seed, stream_hi, trial);
                    for (;;) {
                        for (auto& h : sc.taps) h = rs.cgauss();
                        pd.response(sc.taps, sc.lambda);
                        if (!mmse) {
                            bool degenerate = false;
                            for (int k = 0; k < L; ++k)
                                if (std::norm(sc.lambda[k]) == 0.0) {
                                    degenerate = true;
                                    break;
                                }
                            if (degenerate) {
                                ++acc.redraws;
                                continue;
                            }
                        }
                        break;
                    }

                    for (int n = 0; n < L; ++n) {
                        const int m = static_cast<int>(rs.bits(bits));
                        sc.sent[n] = m;
                        sc.x[n] = constellation.points[m];
                    }

                    // cyclic-prefix channel: the kept samples are the
                    // circular convolution of the payload with the taps
                    for (int m = 0; m < L; ++m) {
                        cplx s = 0.0;
                        for (int i = 0; i <= nu; ++i) {
                            int n = m - i;
                            if (n < 0) n += L;
                            s += sc.taps[i] * sc.x[n];
                        }
                        sc.y[m] = amp * s;
                        if (config.noise_enabled) sc.y[m] += rs.cgauss();
                    }

                    dft.forward(sc.y, sc.spec);
                    if (mmse) {
                        for (int k = 0; k < L; ++k)
                            sc.spec[k] *= std::conj(sc.lambda[k]) /
                                          (std::norm(sc.lambda[k]) + inv_snr);
                    } else {
                        for (int k = 0; k < L; ++k) sc.spec[k] /= sc.lambda[k];
                    }
                    dft.inverse(sc.spec, sc.eq);

                    for (int n = 0; n < L; ++n) {
                        const cplx z = sc.eq[n] / amp;
                        int best = 0;
                        double best_d2 = std::norm(z - constellation.points[0]);
                        for (int m = 1; m < constellation.order(); ++m) {
                            const double d2 = std::norm(z - constellation.points[m]);
                            if (d2 < best_d2) {
                                best_d2 = d2;
                                best = m;
                            }
                        }
                        if (best != sc.sent[n]) ++acc.successes;
                    }
                };
            });
        out.push_back(make_point(config.snr_grid_db[pi],
                                 config.trials_per_point * static_cast<std::uint64_t>(L),
                                 tally));
    }
    return out;
}

SlopeFit fit_slope(std::span<const EstimatePoint> curve,
                   std::span<const std::size_t> window) {
    if (window.size() < 2)
        throw InsufficientData("slope fit needs at least two points");
    for (const std::size_t i : window) {
        if (i >= curve.size()) throw InvalidConfig("window index out of range");
        if (curve[i].successes < 1)
            throw InvalidConfig("zero-success points cannot enter a slope fit");
    }
    double sx = 0.0, sy = 0.0;
    for (const std::size_t i : window) {
        sx += curve[i].snr_db / 10.0; // log10 of linear SNR
        sy += std::log10(curve[i].p_hat);
    }
    const double n = static_cast<double>(window.size());
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const std::size_t i : window) {
        const double dx = curve[i].snr_db / 10.0 - mx;
        const double dy = std::log10(curve[i].p_hat) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw InvalidConfig("window spans a single SNR value");
    const double beta = sxy / sxx;
    SlopeFit fit;
    fit.slope = -beta;
    fit.intercept = my - beta * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    fit.window.assign(window.begin(), window.end());
    return fit;
}

SlopeFit fit_slope(std::span<const EstimatePoint> curve, std::uint64_t min_successes) {
    // highest-SNR contiguous run (of at least two points) with
    // successes >= min_successes
    std::size_t best_lo = 0, best_hi = 0; // [lo, hi)
    std::size_t run_lo = 0;
    bool in_run = false;
    for (std::size_t i = 0; i <= curve.size(); ++i) {
        const bool ok = i < curve.size() && curve[i].successes >= min_successes;
        if (ok && !in_run) {
            run_lo = i;
            in_run = true;
        } else if (!ok && in_run) {
            if (i - run_lo >= 2) {
                best_lo = run_lo;
                best_hi = i;
            }
            in_run = false;
        }
    }
    if (best_hi - best_lo < 2)
        throw InsufficientData("no contiguous window with enough successes");
    std::vector<std::size_t> window;
    for (std::size_t i = best_lo; i < best_hi; ++i) window.push_back(i);
    return fit_slope(curve, window);
}

} // namespace scfde
