#include "scfde/errors.hpp"
#include "scfde/io.hpp"
#include "scfde/montecarlo.hpp"
#include "scfde/oracles.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace scfde;

namespace {

std::vector<double> lambda_mag2(const FrequencyResponse& fr) {
    std::vector<double> out(fr.lambda.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::norm(fr.lambda[k]);
    return out;
}

} // namespace

PYBIND11_MODULE(_scfde, m) {
    m.doc() = "Single-carrier frequency-domain equalization link simulator";

    py::register_exception<BlockTooShort>(m, "BlockTooShort");
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch");
    py::register_exception<DegenerateEigenvalue>(m, "DegenerateEigenvalue");
    py::register_exception<InvalidConfig>(m, "InvalidConfig");
    py::register_exception<InsufficientData>(m, "InsufficientData");

    py::enum_<EqualizerKind>(m, "EqualizerKind")
        .value("MMSE", EqualizerKind::Mmse)
        .value("ZF", EqualizerKind::Zf);

    py::enum_<SweepTarget>(m, "SweepTarget")
        .value("OUTAGE", SweepTarget::Outage)
        .value("SYMBOL_ERROR", SweepTarget::SymbolError);

    py::enum_<DiversityRegime>(m, "DiversityRegime")
        .value("FULL_DIVERSITY", DiversityRegime::FullDiversity)
        .value("RATE_LIMITED", DiversityRegime::RateLimited);

    py::class_<RandomStream>(m, "RandomStream")
        .def(py::init<std::uint64_t, std::uint64_t, std::uint64_t>(),
             py::arg("master_seed"), py::arg("stream_hi") = 0,
             py::arg("stream_lo") = 0)
        .def("next_u64", &RandomStream::next_u64)
        .def("uniform01", &RandomStream::uniform01)
        .def("normal", &RandomStream::normal)
        .def("cgauss", &RandomStream::cgauss);

    py::class_<ChannelTaps>(m, "ChannelTaps")
        .def(py::init([](cvec taps) { return ChannelTaps{std::move(taps)}; }),
             py::arg("taps"))
        .def_readonly("taps", &ChannelTaps::taps)
        .def_property_readonly("memory", &ChannelTaps::memory);

    py::class_<FrequencyResponse>(m, "FrequencyResponse")
        .def_readonly("lam", &FrequencyResponse::lambda)
        .def_readonly("memory", &FrequencyResponse::memory)
        .def_property_readonly("block_length", &FrequencyResponse::block_length)
        .def_property_readonly("lambda_mag2", &lambda_mag2);

    py::class_<Constellation>(m, "Constellation")
        .def_static("psk", &Constellation::psk, py::arg("bits"))
        .def_readonly("bits", &Constellation::bits)
        .def_readonly("points", &Constellation::points);

    py::class_<ResidualNoiseStats>(m, "ResidualNoiseStats")
        .def_readonly("mean", &ResidualNoiseStats::mean)
        .def_readonly("diag_cov", &ResidualNoiseStats::diag_cov)
        .def_readonly("variance", &ResidualNoiseStats::variance);

    py::class_<RateInterval>(m, "RateInterval")
        .def_readonly("lo", &RateInterval::lo)
        .def_readonly("hi", &RateInterval::hi);

    py::class_<DiversityReport>(m, "DiversityReport")
        .def_readonly("d", &DiversityReport::d)
        .def_readonly("regime", &DiversityReport::regime)
        .def_readonly("interval", &DiversityReport::interval);

    py::class_<EstimatePoint>(m, "EstimatePoint")
        .def_readonly("snr_db", &EstimatePoint::snr_db)
        .def_readonly("p_hat", &EstimatePoint::p_hat)
        .def_readonly("trials", &EstimatePoint::trials)
        .def_readonly("successes", &EstimatePoint::successes)
        .def_readonly("ci_low", &EstimatePoint::ci_low)
        .def_readonly("ci_high", &EstimatePoint::ci_high)
        .def_readonly("degenerate_redraws", &EstimatePoint::degenerate_redraws)
        .def("__repr__", [](const EstimatePoint& p) {
            return "EstimatePoint(snr_db=" + format_double(p.snr_db) +
                   ", p_hat=" + format_double(p.p_hat) + ")";
        });

    py::class_<SlopeFit>(m, "SlopeFit")
        .def_readonly("slope", &SlopeFit::slope)
        .def_readonly("intercept", &SlopeFit::intercept)
        .def_readonly("r_squared", &SlopeFit::r_squared)
        .def_readonly("window", &SlopeFit::window)
        .def("__repr__", [](const SlopeFit& f) {
            return "SlopeFit(slope=" + format_double(f.slope) + ")";
        });

    py::class_<SweepConfig>(m, "SweepConfig")
        .def(py::init<>())
        .def_readwrite("memory", &SweepConfig::memory)
        .def_readwrite("block_length", &SweepConfig::block_length)
        .def_readwrite("rate_bits", &SweepConfig::rate_bits)
        .def_readwrite("kind", &SweepConfig::kind)
        .def_readwrite("snr_grid_db", &SweepConfig::snr_grid_db)
        .def_readwrite("trials_per_point", &SweepConfig::trials_per_point)
        .def_readwrite("master_seed", &SweepConfig::master_seed)
        .def_readwrite("target", &SweepConfig::target)
        .def_readwrite("workers", &SweepConfig::workers)
        .def_readwrite("noise_enabled", &SweepConfig::noise_enabled);

    py::class_<TailProbeResult>(m, "TailProbeResult")
        .def_readonly("points", &TailProbeResult::points)
        .def_readonly("fit", &TailProbeResult::fit);

    py::class_<SlopePair>(m, "SlopePair")
        .def_readonly("first", &SlopePair::first)
        .def_readonly("second", &SlopePair::second)
        .def_readonly("slope_difference", &SlopePair::slope_difference);

    py::class_<SubsampleCheck>(m, "SubsampleCheck")
        .def_readonly("ok", &SubsampleCheck::ok)
        .def_readonly("subsample_err", &SubsampleCheck::subsample_err)
        .def_readonly("interp_err", &SubsampleCheck::interp_err);

    m.def(
        "draw_channel",
        [](int memory, std::uint64_t seed, std::uint64_t trial) {
            RandomStream rs(seed, 0, trial);
            return draw_channel(memory, rs);
        },
        py::arg("memory"), py::arg("seed"), py::arg("trial") = 0);
    m.def("draw_channel",
          [](int memory, RandomStream& rs) { return draw_channel(memory, rs); },
          py::arg("memory"), py::arg("stream"));
    m.def("frequency_response", &frequency_response, py::arg("taps"),
          py::arg("block_length"));
    m.def("circulant_apply",
          [](const ChannelTaps& t, int L, const cvec& x) {
              return circulant_apply(t, L, x);
          },
          py::arg("taps"), py::arg("block_length"), py::arg("x"));
    m.def("cp_transmit",
          [](const ChannelTaps& t, const cvec& x, double snr, RandomStream* rs) {
              return cp_transmit(t, x, snr, rs);
          },
          py::arg("taps"), py::arg("x"), py::arg("snr"),
          py::arg("noise") = nullptr);
    m.def("exponential_orders",
          [](const FrequencyResponse& fr, double snr) {
              const auto eo = exponential_orders(fr, snr);
              return py::make_tuple(eo.alpha, eo.m_count);
          },
          py::arg("fr"), py::arg("snr"));

    m.def("fde_coefficients",
          [](const FrequencyResponse& fr, double snr, EqualizerKind kind) {
              return fde_coefficients(fr, snr, kind);
          },
          py::arg("fr"), py::arg("snr"), py::arg("kind"));
    m.def("equalize",
          [](const cvec& y, const cvec& w) { return equalize(y, w); },
          py::arg("y"), py::arg("coeffs"));
    m.def("decision_sinr", &decision_sinr, py::arg("fr"), py::arg("snr"),
          py::arg("kind"));
    m.def("residual_noise_stats",
          [](const FrequencyResponse& fr, double snr, const cvec& x) {
              return residual_noise_stats(fr, snr, x);
          },
          py::arg("fr"), py::arg("snr"), py::arg("x"));
    m.def("slicer",
          [](const cvec& y, double snr, const Constellation& c) {
              return slicer(y, snr, c);
          },
          py::arg("y_hat"), py::arg("snr"), py::arg("constellation"));

    m.def("mutual_info", &mutual_info, py::arg("fr"), py::arg("snr"),
          py::arg("kind"));
    m.def("outage_indicator",
          [](const FrequencyResponse& fr, double snr, double rate,
             EqualizerKind kind) {
              return outage_indicator(fr, snr, Rate{rate}, kind);
          },
          py::arg("fr"), py::arg("snr"), py::arg("rate"), py::arg("kind"));
    m.def("analytic_diversity",
          [](double rate, int memory, int block_length, EqualizerKind kind) {
              return analytic_diversity(Rate{rate}, memory, block_length, kind);
          },
          py::arg("rate"), py::arg("memory"), py::arg("block_length"),
          py::arg("kind") = EqualizerKind::Mmse);
    m.def("rate_intervals", &rate_intervals, py::arg("memory"),
          py::arg("block_length"));
    m.def("rate_shift",
          [](double rate, int from_block, int to_block) {
              return rate_shift(Rate{rate}, from_block, to_block).bits;
          },
          py::arg("rate"), py::arg("from_block"), py::arg("to_block"));
    m.def("union_bound_pep",
          [](const FrequencyResponse& fr, double snr, double rate) {
              return union_bound_pep(fr, snr, Rate{rate});
          },
          py::arg("fr"), py::arg("snr"), py::arg("rate"));

    m.def("estimate_outage", &estimate_outage, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("estimate_ser", &estimate_ser, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("wilson_interval", &wilson_interval, py::arg("successes"),
          py::arg("trials"));
    m.def("fit_slope",
          [](const std::vector<EstimatePoint>& pts, std::uint64_t min_successes) {
              return fit_slope(pts, min_successes);
          },
          py::arg("curve"), py::arg("min_successes") = 30);
    m.def("fit_slope_window",
          [](const std::vector<EstimatePoint>& pts,
             const std::vector<std::size_t>& window) {
              return fit_slope(pts, window);
          },
          py::arg("curve"), py::arg("window"));

    m.def("lemma1_tail_probability",
          [](int n, double mm, const std::vector<double>& grid,
             std::uint64_t trials, std::uint64_t seed, int workers,
             std::uint64_t min_successes) {
              return lemma1_tail_probability(n, mm, grid, trials, seed, workers,
                                             min_successes);
          },
          py::arg("n"), py::arg("m"), py::arg("snr_grid_db"), py::arg("trials"),
          py::arg("seed"), py::arg("workers") = 0, py::arg("min_successes") = 30,
          py::call_guard<py::gil_scoped_release>());
    m.def("lemma2_slope_pair",
          [](int nu, int L, int Lp, double mm, const std::vector<double>& grid,
             std::uint64_t trials, std::uint64_t seed, int workers,
             std::uint64_t min_successes) {
              return lemma2_slope_pair(nu, L, Lp, mm, grid, trials, seed, workers,
                                       min_successes);
          },
          py::arg("memory"), py::arg("block_length"), py::arg("block_length_prime"),
          py::arg("m"), py::arg("snr_grid_db"), py::arg("trials"), py::arg("seed"),
          py::arg("workers") = 0, py::arg("min_successes") = 30,
          py::call_guard<py::gil_scoped_release>());
    m.def("dft_interpolate", &dft_interpolate, py::arg("fr"), py::arg("omega"));
    m.def("zero_pad_subsample_check", &zero_pad_subsample_check, py::arg("taps"),
          py::arg("base_length"), py::arg("factor"));
    m.def("remark1_independence_check", &remark1_independence_check,
          py::arg("memory"), py::arg("trials"), py::arg("seed"),
          py::arg("block_length") = 0,
          py::call_guard<py::gil_scoped_release>());
}
