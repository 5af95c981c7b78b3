// Experiment runner for SC-FDE link simulations: outage and symbol-error
// sweeps, block-length studies, analytic diversity tables, and the
// numerical lemma checks, with CSV/JSON plot data per curve.
#include "scfde/errors.hpp"
#include "scfde/io.hpp"
#include "scfde/montecarlo.hpp"
#include "scfde/oracles.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace scfde;

namespace {

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0, stop = 0, step = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3)
        throw scfde::InvalidConfig("SNR grid must be start:stop:step in dB");
    if (!(step > 0.0)) throw scfde::InvalidConfig("SNR grid step must be positive");
    if (stop < start) throw scfde::InvalidConfig("SNR grid stop must not precede start");
    std::vector<double> grid;
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    for (int i = 0; i <= n; ++i) grid.push_back(start + i * step);
    return grid;
}

std::vector<double> parse_rates(const std::string& spec) {
    std::vector<double> rates;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t next = spec.find(',', pos);
        if (next == std::string::npos) next = spec.size();
        rates.push_back(std::stod(spec.substr(pos, next - pos)));
        pos = next + 1;
    }
    if (rates.empty()) throw scfde::InvalidConfig("at least one rate is required");
    return rates;
}

std::vector<int> parse_ints(const std::string& spec) {
    std::vector<int> out;
    for (const double v : parse_rates(spec)) out.push_back(static_cast<int>(v));
    return out;
}

std::string trim_num(double v) { return format_double(v); }

struct SweepCli {
    int nu = 0;
    int block = 1;
    std::string rates = "1";
    std::string snr = "10:30:5";
    double trials = 1e6;
    std::uint64_t seed = 0;
    std::string equalizer = "mmse";
    std::string out_dir = ".";
    std::string format = "csv";
    int workers = 0;
    std::uint64_t min_successes = 30;
    bool deterministic = false;
    bool no_noise = false;

    void add_common(CLI::App* cmd, bool with_equalizer) {
        cmd->add_option("--nu", nu, "channel memory length")->required();
        cmd->add_option("--block", block, "transmission block length L")->required();
        cmd->add_option("--rates", rates, "comma-separated rates in bits/symbol")
            ->required();
        cmd->add_option("--snr", snr, "SNR grid start:stop:step in dB")->required();
        cmd->add_option("--trials", trials, "Monte Carlo trials per grid point");
        cmd->add_option("--seed", seed, "master seed");
        if (with_equalizer)
            cmd->add_option("--equalizer", equalizer, "mmse or zf")
                ->check(CLI::IsMember({"mmse", "zf"}));
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--format", format, "curve file format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--workers", workers,
                        "worker threads (0: SCFDE_WORKERS or hardware)");
        cmd->add_option("--min-successes", min_successes,
                        "slope-fit window threshold");
        cmd->add_flag("--deterministic", deterministic,
                      "omit timestamps so outputs are byte-identical");
    }

    EqualizerKind kind() const {
        return equalizer == "zf" ? EqualizerKind::Zf : EqualizerKind::Mmse;
    }
};

ordered_json config_json(const SweepConfig& cfg, const char* target) {
    ordered_json j;
    j["target"] = target;
    j["nu"] = cfg.memory;
    j["block_length"] = cfg.block_length;
    j["rate"] = cfg.rate_bits;
    j["equalizer"] = cfg.kind == EqualizerKind::Zf ? "zf" : "mmse";
    j["snr_grid_db"] = cfg.snr_grid_db;
    j["trials_per_point"] = cfg.trials_per_point;
    j["seed"] = cfg.master_seed;
    if (!cfg.noise_enabled) j["noise_enabled"] = false;
    return j;
}

struct CurveOutputs {
    ordered_json summary_entry;
};

CurveOutputs emit_curve(const fs::path& dir, const std::string& stem,
                        const SweepConfig& cfg, const char* target,
                        std::span<const EstimatePoint> points,
                        std::uint64_t min_successes, const std::string& format) {
    std::optional<SlopeFit> fit;
    try {
        fit = fit_slope(points, min_successes);
    } catch (const scfde::Error&) {
    }
    std::optional<DiversityReport> analytic;
    try {
        analytic = analytic_diversity(Rate{cfg.rate_bits}, cfg.memory,
                                      cfg.block_length, cfg.kind);
    } catch (const scfde::Error&) {
    }

    const auto cfgj = config_json(cfg, target);
    const auto summary = curve_summary_json(cfgj, points, fit, analytic);
    if (format == "csv") write_curve_csv(dir / (stem + ".csv"), points);
    write_json(dir / (stem + ".json"), summary);

    CurveOutputs out;
    out.summary_entry = ordered_json();
    out.summary_entry["rate"] = cfg.rate_bits;
    out.summary_entry["nu"] = cfg.memory;
    out.summary_entry["block_length"] = cfg.block_length;
    out.summary_entry["curve"] = stem + (format == "csv" ? ".csv" : ".json");
    out.summary_entry["slope_fit"] =
        fit ? slope_fit_json(*fit) : ordered_json(nullptr);
    if (analytic) {
        out.summary_entry["analytic_d"] = analytic->d;
        out.summary_entry["regime"] =
            analytic->regime == DiversityRegime::FullDiversity ? "full_diversity"
                                                               : "rate_limited";
    }
    return out;
}

void write_summary(const fs::path& dir, const ordered_json& config,
                   ordered_json curves, bool deterministic) {
    ordered_json doc;
    doc["config"] = config;
    doc["curves"] = std::move(curves);
    if (!deterministic) {
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        doc["meta"] = {{"unix_time",
                        std::chrono::duration_cast<std::chrono::seconds>(now).count()}};
    }
    write_json(dir / "summary.json", doc);
}

int run_curve_family(const SweepCli& cli, SweepTarget target, const char* name,
                     const std::vector<int>& nus) {
    const auto grid = parse_grid(cli.snr);
    const auto rates = parse_rates(cli.rates);
    fs::create_directories(cli.out_dir);

    ordered_json curves = ordered_json::array();
    ordered_json top_cfg;
    top_cfg["command"] = name;
    top_cfg["snr_grid_db"] = grid;
    top_cfg["trials_per_point"] = static_cast<std::uint64_t>(cli.trials);
    top_cfg["seed"] = cli.seed;

    std::uint64_t stream_base = 0;
    for (const int nu : nus) {
        for (const double rate : rates) {
            SweepConfig cfg;
            cfg.memory = nu;
            cfg.block_length = cli.block;
            cfg.rate_bits = rate;
            cfg.kind = cli.kind();
            cfg.snr_grid_db = grid;
            cfg.trials_per_point = static_cast<std::uint64_t>(cli.trials);
            cfg.master_seed = cli.seed;
            cfg.target = target;
            cfg.workers = cli.workers;
            cfg.noise_enabled = !cli.no_noise;
            cfg.point_stream_base = stream_base;
            stream_base += grid.size();

            const auto points = target == SweepTarget::Outage ? estimate_outage(cfg)
                                                              : estimate_ser(cfg);
            const std::string stem = std::string(name) + "_nu" + std::to_string(nu) +
                                     "_R" + trim_num(rate);
            const char* tname = target == SweepTarget::Outage ? "outage" : "ser";
            auto out = emit_curve(cli.out_dir, stem, cfg, tname, points,
                                  cli.min_successes, cli.format);
            curves.push_back(std::move(out.summary_entry));
            std::printf("%s: wrote %s\n", name, stem.c_str());
        }
    }
    write_summary(cli.out_dir, top_cfg, std::move(curves), cli.deterministic);
    return 0;
}

int run_blocklength(const SweepCli& cli, const std::string& blocks_spec) {
    const auto grid = parse_grid(cli.snr);
    const auto blocks = parse_ints(blocks_spec);
    const auto rates = parse_rates(cli.rates);
    if (rates.size() != 1)
        throw scfde::InvalidConfig("blocklength takes exactly one rate");
    fs::create_directories(cli.out_dir);

    ordered_json curves = ordered_json::array();
    ordered_json top_cfg;
    top_cfg["command"] = "blocklength";
    top_cfg["nu"] = cli.nu;
    top_cfg["rate"] = rates[0];
    top_cfg["snr_grid_db"] = grid;
    top_cfg["trials_per_point"] = static_cast<std::uint64_t>(cli.trials);
    top_cfg["seed"] = cli.seed;

    std::uint64_t stream_base = 0;
    for (const int L : blocks) {
        SweepConfig cfg;
        cfg.memory = cli.nu;
        cfg.block_length = L;
        cfg.rate_bits = rates[0];
        cfg.kind = cli.kind();
        cfg.snr_grid_db = grid;
        cfg.trials_per_point = static_cast<std::uint64_t>(cli.trials);
        cfg.master_seed = cli.seed;
        cfg.workers = cli.workers;
        cfg.point_stream_base = stream_base;
        stream_base += grid.size();

        const auto points = estimate_outage(cfg);
        const std::string stem = "blocklength_L" + std::to_string(L) + "_R" +
                                 trim_num(rates[0]);
        auto out = emit_curve(cli.out_dir, stem, cfg, "outage", points,
                              cli.min_successes, cli.format);
        out.summary_entry["block_length"] = L;
        curves.push_back(std::move(out.summary_entry));
        std::printf("blocklength: wrote %s\n", stem.c_str());
    }
    write_summary(cli.out_dir, top_cfg, std::move(curves), cli.deterministic);
    return 0;
}

int run_diversity_table(const std::string& nus_spec, const std::string& blocks_spec,
                        const std::string& rates_spec, const std::string& out_file) {
    const auto nus = parse_ints(nus_spec);
    const auto blocks = parse_ints(blocks_spec);
    const auto rates = parse_rates(rates_spec);

    std::FILE* out = stdout;
    if (!out_file.empty()) {
        out = std::fopen(out_file.c_str(), "w");
        if (!out) throw scfde::Error("cannot open " + out_file + " for writing");
    }
    std::fprintf(out, "nu,block_length,rate,d,regime\n");
    for (const int nu : nus) {
        for (const int L : blocks) {
            if (L < nu + 1) continue;
            for (const double r : rates) {
                const auto rep =
                    analytic_diversity(Rate{r}, nu, L, EqualizerKind::Mmse);
                std::fprintf(out, "%d,%d,%s,%d,%s\n", nu, L, trim_num(r).c_str(),
                             rep.d,
                             rep.regime == DiversityRegime::FullDiversity
                                 ? "full_diversity"
                                 : "rate_limited");
            }
        }
    }
    if (out != stdout) std::fclose(out);

    // rate intervals per configuration, printed for quick reference
    for (const int nu : nus) {
        if (nu < 1) continue;
        for (const int L : blocks) {
            if (L < nu + 1) continue;
            std::printf("intervals nu=%d L=%d:", nu, L);
            for (const auto& [d, iv] : rate_intervals(nu, L)) {
                if (std::isinf(iv.hi))
                    std::printf("  d=%d on (%s, inf)", d, trim_num(iv.lo).c_str());
                else
                    std::printf("  d=%d on (%s, %s]", d, trim_num(iv.lo).c_str(),
                                trim_num(iv.hi).c_str());
            }
            std::printf("\n");
        }
    }
    return 0;
}

struct OracleCli {
    double m = 1.5;
    int n = 4;
    int nu = 2;
    int block = 3;
    int block_prime = 12;
    int factor = 2;
    int count = 100;
    std::string snr = "20:40:5";
    double trials = 1e6;
    std::uint64_t seed = 0;
    int workers = 0;
    std::uint64_t min_successes = 30;
    double slope_target = 0.0;
    double slope_tol = 0.3;
    double diff_tol = 0.3;
    double tol = 1e-10;
    std::string out_file;
};

void print_points(const std::vector<EstimatePoint>& pts) {
    for (const auto& pt : pts)
        std::printf("  snr_db=%-6s p_hat=%-12s successes=%llu\n",
                    trim_num(pt.snr_db).c_str(), trim_num(pt.p_hat).c_str(),
                    static_cast<unsigned long long>(pt.successes));
}

int run_oracle_lemma1(const OracleCli& o) {
    const auto grid = parse_grid(o.snr);
    const auto res = lemma1_tail_probability(
        o.n, o.m, grid, static_cast<std::uint64_t>(o.trials), o.seed, o.workers,
        o.min_successes);
    print_points(res.points);
    const double target =
        o.slope_target > 0.0 ? o.slope_target : std::floor(o.m) + 1.0;
    if (!res.fit) {
        std::printf("lemma1: no fittable window (target slope %s)\n",
                    trim_num(target).c_str());
        return 1;
    }
    std::printf("lemma1: fitted slope %.4f target %s tol %s\n", res.fit->slope,
                trim_num(target).c_str(), trim_num(o.slope_tol).c_str());
    return std::abs(res.fit->slope - target) <= o.slope_tol ? 0 : 1;
}

int run_oracle_lemma2(const OracleCli& o) {
    const auto grid = parse_grid(o.snr);
    const auto pair = lemma2_slope_pair(o.nu, o.block, o.block_prime, o.m, grid,
                                        static_cast<std::uint64_t>(o.trials),
                                        o.seed, o.workers, o.min_successes);
    std::printf("L=%d:\n", o.block);
    print_points(pair.first.points);
    std::printf("L'=%d:\n", o.block_prime);
    print_points(pair.second.points);
    if (!pair.slope_difference) {
        std::printf("lemma2: no fittable window\n");
        return 1;
    }
    std::printf("lemma2: slopes %.4f vs %.4f, |difference| tol %s\n",
                pair.first.fit->slope, pair.second.fit->slope,
                trim_num(o.diff_tol).c_str());
    return std::abs(*pair.slope_difference) <= o.diff_tol ? 0 : 1;
}

int run_oracle_interp(const OracleCli& o) {
    double worst_sub = 0.0, worst_int = 0.0;
    bool ok = true;
    for (int t = 0; t < o.count; ++t) {
        RandomStream rs(o.seed, 1000, t);
        const int nu = static_cast<int>(rs.bits(2));
        const int L = nu + 1 + static_cast<int>(rs.bits(4));
        const int T = 1 + static_cast<int>(rs.bits(2));
        const auto taps = draw_channel(nu, rs);
        const auto chk = zero_pad_subsample_check(taps, L, T);
        worst_sub = std::max(worst_sub, chk.subsample_err);
        worst_int = std::max(worst_int, chk.interp_err);
        ok = ok && chk.ok;
    }
    std::printf("interp: %d random configs, max subsample err %.3g, "
                "max interpolation err %.3g, tol %s\n",
                o.count, worst_sub, worst_int, trim_num(o.tol).c_str());
    return ok && worst_sub <= o.tol && worst_int <= o.tol ? 0 : 1;
}

int run_oracle_remark1(const OracleCli& o, int block) {
    const double worst = remark1_independence_check(
        o.nu, static_cast<std::uint64_t>(o.trials), o.seed, block);
    std::printf("remark1: max |corr| = %.5f tol %s\n", worst,
                trim_num(o.tol).c_str());
    return worst <= o.tol ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SC-FDE link-level simulation experiments"};
    app.require_subcommand(1);

    SweepCli outage_cli, ser_cli, block_cli, zf_cli;
    std::string zf_nus = "2,3";
    std::string blocks_spec = "4,8,16";
    std::string zf_target = "outage";

    auto* outage = app.add_subcommand("outage", "outage probability sweep");
    outage_cli.add_common(outage, true);

    auto* ser = app.add_subcommand("ser", "uncoded PSK symbol error sweep");
    ser_cli.add_common(ser, true);
    ser->add_flag("--no-noise", ser_cli.no_noise, "disable channel noise (debug)");

    auto* blocklength =
        app.add_subcommand("blocklength", "outage slope versus block length");
    block_cli.add_common(blocklength, true);
    blocklength->get_option("--block")->required(false);
    blocklength->add_option("--blocks", blocks_spec, "comma-separated block lengths")
        ->required();

    auto* zf = app.add_subcommand("zf", "ZF curves across memory lengths");
    zf_cli.add_common(zf, false);
    zf_cli.equalizer = "zf";
    zf->get_option("--nu")->required(false);
    zf->add_option("--nus", zf_nus, "comma-separated memory lengths");
    zf->add_option("--target", zf_target, "outage or ser")
        ->check(CLI::IsMember({"outage", "ser"}));

    auto* oracle = app.add_subcommand("oracle", "numerical lemma checks");
    oracle->require_subcommand(1);
    OracleCli ocli;
    auto* lemma1 = oracle->add_subcommand("lemma1", "tail exponent of Lemma 1");
    lemma1->add_option("--n", ocli.n, "i.i.d. variables per trial");
    lemma1->add_option("--m", ocli.m, "threshold in (0, n)");
    lemma1->add_option("--snr", ocli.snr, "SNR grid start:stop:step in dB");
    lemma1->add_option("--trials", ocli.trials, "trials per point");
    lemma1->add_option("--seed", ocli.seed, "master seed");
    lemma1->add_option("--workers", ocli.workers, "worker threads");
    lemma1->add_option("--min-successes", ocli.min_successes, "fit threshold");
    lemma1->add_option("--slope-target", ocli.slope_target,
                       "expected slope (default floor(m)+1)");
    lemma1->add_option("--slope-tol", ocli.slope_tol, "slope tolerance");

    auto* lemma2 = oracle->add_subcommand("lemma2", "block-length invariance of Lemma 2");
    lemma2->add_option("--nu", ocli.nu, "channel memory");
    lemma2->add_option("--l", ocli.block, "first block length");
    lemma2->add_option("--lprime", ocli.block_prime, "second block length");
    lemma2->add_option("--m", ocli.m, "threshold in (0, nu+1)");
    lemma2->add_option("--snr", ocli.snr, "SNR grid start:stop:step in dB");
    lemma2->add_option("--trials", ocli.trials, "trials per point");
    lemma2->add_option("--seed", ocli.seed, "master seed");
    lemma2->add_option("--workers", ocli.workers, "worker threads");
    lemma2->add_option("--min-successes", ocli.min_successes, "fit threshold");
    lemma2->add_option("--diff-tol", ocli.diff_tol, "slope difference tolerance");

    auto* interp = oracle->add_subcommand("interp", "DFT zero-padding identities");
    interp->add_option("--count", ocli.count, "random configurations");
    interp->add_option("--seed", ocli.seed, "master seed");
    interp->add_option("--tol", ocli.tol, "absolute tolerance");

    auto* remark1 = oracle->add_subcommand("remark1", "eigenvalue independence");
    int remark1_block = 0;
    remark1->add_option("--nu", ocli.nu, "channel memory");
    remark1->add_option("--block", remark1_block, "block length (default nu+1)");
    remark1->add_option("--trials", ocli.trials, "channel draws");
    remark1->add_option("--seed", ocli.seed, "master seed");
    remark1->add_option("--tol", ocli.tol, "correlation tolerance");

    std::string dt_nus = "2,3", dt_blocks = "10", dt_rates = "1,2,3,4";
    std::string dt_out;
    auto* table = app.add_subcommand("diversity-table",
                                     "analytic diversity orders and rate intervals");
    table->add_option("--nus", dt_nus, "comma-separated memory lengths");
    table->add_option("--blocks", dt_blocks, "comma-separated block lengths");
    table->add_option("--rates", dt_rates, "comma-separated rates");
    table->add_option("--out", dt_out, "write the table as CSV to this path");

    try {
        app.parse(argc, argv);
        if (outage->parsed())
            return run_curve_family(outage_cli, SweepTarget::Outage, "outage",
                                    {outage_cli.nu});
        if (ser->parsed())
            return run_curve_family(ser_cli, SweepTarget::SymbolError, "ser",
                                    {ser_cli.nu});
        if (blocklength->parsed()) return run_blocklength(block_cli, blocks_spec);
        if (zf->parsed()) {
            zf_cli.equalizer = "zf";
            return run_curve_family(
                zf_cli,
                zf_target == "ser" ? SweepTarget::SymbolError : SweepTarget::Outage,
                "zf", parse_ints(zf_nus));
        }
        if (lemma1->parsed()) return run_oracle_lemma1(ocli);
        if (lemma2->parsed()) return run_oracle_lemma2(ocli);
        if (interp->parsed()) return run_oracle_interp(ocli);
        if (remark1->parsed()) return run_oracle_remark1(ocli, remark1_block);
        if (table->parsed())
            return run_diversity_table(dt_nus, dt_blocks, dt_rates, dt_out);
    } catch (const CLI::ParseError& e) {
        std::fflush(stdout);
        (void)app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    } catch (const scfde::InvalidConfig& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const scfde::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
