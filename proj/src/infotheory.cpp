#include "scfde/infotheory.hpp"

#include "scfde/errors.hpp"

#include <cmath>
#include <limits>

namespace scfde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_rate(Rate rate) {
    if (!(rate.bits > 0.0)) throw InvalidConfig("rate must be positive");
}

} // namespace

double mutual_info(const FrequencyResponse& fr, double snr, EqualizerKind kind) {
    if (!(snr > 0.0)) throw InvalidConfig("SNR must be positive");
    if (kind == EqualizerKind::Mmse) {
        const std::size_t L = fr.lambda.size();
        double acc = 0.0;
        for (std::size_t k = 0; k < L; ++k)
            acc += 1.0 / (snr * std::norm(fr.lambda[k]) + 1.0);
        return -std::log2(acc / static_cast<double>(L));
    }
    return std::log2(1.0 + decision_sinr(fr, snr, EqualizerKind::Zf));
}

bool outage_indicator(const FrequencyResponse& fr, double snr, Rate rate,
                      EqualizerKind kind) {
    require_rate(rate);
    if (!(snr > 0.0)) throw InvalidConfig("SNR must be positive");
    if (kind == EqualizerKind::Mmse) {
        const std::size_t L = fr.lambda.size();
        double acc = 0.0;
        for (std::size_t k = 0; k < L; ++k)
            acc += 1.0 / (1.0 + snr * std::norm(fr.lambda[k]));
        return acc / static_cast<double>(L) > std::exp2(-rate.bits);
    }
    return mutual_info(fr, snr, EqualizerKind::Zf) < rate.bits;
}

DiversityReport analytic_diversity(Rate rate, int memory, int block_length,
                                   EqualizerKind kind) {
    require_rate(rate);
    if (memory < 0) throw InvalidConfig("channel memory must be non-negative");
    if (block_length < memory + 1)
        throw InvalidConfig("block length must be at least nu+1");

    DiversityReport rep;
    if (kind == EqualizerKind::Zf) {
        rep.d = 1;
        rep.regime = memory == 0 ? DiversityRegime::FullDiversity
                                 : DiversityRegime::RateLimited;
        rep.interval = {0.0, kInf};
        return rep;
    }
    if (memory == 0) {
        // flat fading: single tap, d = 1 at every rate
        rep.d = 1;
        rep.regime = DiversityRegime::FullDiversity;
        rep.interval = {0.0, kInf};
        return rep;
    }

    const double L = static_cast<double>(block_length);
    const double threshold = std::log2(L / static_cast<double>(memory));
    if (rate.bits <= threshold) {
        rep.d = memory + 1;
        rep.regime = DiversityRegime::FullDiversity;
        rep.interval = {0.0, threshold};
        return rep;
    }
    int d = static_cast<int>(std::floor(std::exp2(-rate.bits) * L)) + 1;
    if (d > memory + 1) d = memory + 1; // numeric guard at interval edges
    if (d < 1) d = 1;
    rep.d = d;
    rep.regime = DiversityRegime::RateLimited;
    if (d == 1)
        rep.interval = {std::log2(L), kInf};
    else
        rep.interval = {std::log2(L / static_cast<double>(d)),
                        std::log2(L / static_cast<double>(d - 1))};
    return rep;
}

std::vector<std::pair<int, RateInterval>> rate_intervals(int memory, int block_length) {
    if (memory < 1) throw InvalidConfig("rate intervals require nu >= 1");
    if (block_length < memory + 1)
        throw InvalidConfig("block length must be at least nu+1");
    const double L = static_cast<double>(block_length);
    std::vector<std::pair<int, RateInterval>> parts;
    parts.push_back({memory + 1,
                     {0.0, std::log2(L / static_cast<double>(memory))}});
    for (int i = memory; i >= 2; --i)
        parts.push_back({i, {std::log2(L / static_cast<double>(i)),
                             std::log2(L / static_cast<double>(i - 1))}});
    parts.push_back({1, {std::log2(L), kInf}});
    return parts;
}

Rate rate_shift(Rate rate, int from_block, int to_block) {
    if (from_block < 1 || to_block < 1)
        throw InvalidConfig("block lengths must be positive");
    return {rate.bits + std::log2(static_cast<double>(to_block) /
                                  static_cast<double>(from_block))};
}

double union_bound_pep(const FrequencyResponse& fr, double snr, Rate rate) {
    require_rate(rate);
    if (!(snr > 0.0)) throw InvalidConfig("SNR must be positive");
    const std::size_t L = fr.lambda.size();
    double acc = 0.0;
    for (std::size_t k = 0; k < L; ++k) {
        const double d = snr * std::norm(fr.lambda[k]) + 1.0;
        acc += snr * std::norm(fr.lambda[k]) / (d * d);
    }
    acc /= static_cast<double>(L);
    const double bound = std::exp2(rate.bits) * std::exp(-1.0 / acc);
    return bound > 1.0 ? 1.0 : bound;
}

} // namespace scfde
