#include "scfde/io.hpp"

#include "scfde/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace scfde {

std::string format_double(double v) {
    if (v == std::floor(v) && std::abs(v) < 9.007199254740992e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // drop digits while the value still reads back exactly
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

void write_curve_csv(const std::filesystem::path& path,
                     std::span<const EstimatePoint> points) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "snr_db,p_hat,ci_low,ci_high,trials\n";
    for (const auto& pt : points)
        out << format_double(pt.snr_db) << ',' << format_double(pt.p_hat) << ','
            << format_double(pt.ci_low) << ',' << format_double(pt.ci_high) << ','
            << pt.trials << '\n';
    if (!out) throw Error("failed writing " + path.string());
}

std::vector<EstimatePoint> read_curve_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "snr_db,p_hat,ci_low,ci_high,trials")
        throw Error("unexpected CSV header in " + path.string());
    std::vector<EstimatePoint> pts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        EstimatePoint pt;
        auto next = [&]() {
            if (!std::getline(row, field, ','))
                throw Error("short CSV row in " + path.string());
            return field;
        };
        pt.snr_db = std::strtod(next().c_str(), nullptr);
        pt.p_hat = std::strtod(next().c_str(), nullptr);
        pt.ci_low = std::strtod(next().c_str(), nullptr);
        pt.ci_high = std::strtod(next().c_str(), nullptr);
        pt.trials = std::strtoull(next().c_str(), nullptr, 10);
        pt.successes =
            static_cast<std::uint64_t>(std::llround(pt.p_hat * static_cast<double>(pt.trials)));
        pts.push_back(pt);
    }
    return pts;
}

ordered_json point_json(const EstimatePoint& pt) {
    ordered_json j;
    j["snr_db"] = pt.snr_db;
    j["p_hat"] = pt.p_hat;
    j["ci_low"] = pt.ci_low;
    j["ci_high"] = pt.ci_high;
    j["trials"] = pt.trials;
    j["successes"] = pt.successes;
    if (pt.degenerate_redraws > 0) j["degenerate_redraws"] = pt.degenerate_redraws;
    return j;
}

ordered_json slope_fit_json(const SlopeFit& fit) {
    ordered_json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r_squared"] = fit.r_squared;
    j["window"] = fit.window;
    return j;
}

ordered_json diversity_json(const DiversityReport& rep) {
    ordered_json j;
    j["d"] = rep.d;
    j["regime"] = rep.regime == DiversityRegime::FullDiversity ? "full_diversity"
                                                               : "rate_limited";
    j["interval_lo"] = rep.interval.lo;
    j["interval_hi"] = std::isfinite(rep.interval.hi)
                           ? ordered_json(rep.interval.hi)
                           : ordered_json("inf");
    return j;
}

ordered_json curve_summary_json(const ordered_json& config,
                                std::span<const EstimatePoint> points,
                                const std::optional<SlopeFit>& fit,
                                const std::optional<DiversityReport>& analytic) {
    ordered_json j;
    j["config"] = config;
    auto& arr = j["points"] = ordered_json::array();
    for (const auto& pt : points) arr.push_back(point_json(pt));
    j["slope_fit"] = fit ? slope_fit_json(*fit) : ordered_json(nullptr);
    if (analytic) {
        j["analytic_d"] = analytic->d;
        j["regime"] = analytic->regime == DiversityRegime::FullDiversity
                          ? "full_diversity"
                          : "rate_limited";
    } else {
        j["analytic_d"] = nullptr;
        j["regime"] = nullptr;
    }
    return j;
}

void write_json(const std::filesystem::path& path, const ordered_json& doc) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw Error("failed writing " + path.string());
}

ordered_json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return ordered_json::parse(in);
}

} // namespace scfde
