// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stia/acceptance.hpp"
#include "stia/channel.hpp"
#include "stia/cli.hpp"
#include "stia/errors.hpp"
#include "stia/harness.hpp"
#include "stia/ic3.hpp"
#include "stia/rates.hpp"
#include "stia/schedule.hpp"
#include "stia/tradeoff.hpp"
#include "stia/xchannel.hpp"

namespace py = pybind11;
using namespace stia;

namespace {

py::object fraction(const Rational& r) {
    static py::object cls = py::module_::import("fractions").attr("Fraction");
    return cls(r.numerator(), r.denominator());
}

Rational rational(const py::handle& x) {
    py::object f = py::module_::import("fractions").attr("Fraction")(x).attr("limit_denominator")(1'000'000'000);
    return {f.attr("numerator").cast<std::int64_t>(), f.attr("denominator").cast<std::int64_t>()};
}

X2SlotGains slot_gains(const std::array<Eigen::Matrix2cd, 3>& g) { return {g}; }

py::dict decode_dict(const DecodeReport& d) {
    py::dict out;
    out["exact_recovery"] = d.exact_recovery;
    out["max_abs_error"] = d.max_abs_error;
    out["effective_condition"] = d.effective_condition;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Distributed space-time interference alignment simulator";
    m.attr("__version__") = version();

    py::register_exception<PreconditionViolation>(m, "PreconditionViolation", PyExc_ValueError);
    py::register_exception<SingularMatrixError>(m, "SingularMatrixError", PyExc_ArithmeticError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<FeedbackConfig>(m, "FeedbackConfig")
        .def(py::init<int, int>(), py::arg("coherence_slots"), py::arg("feedback_slots"))
        .def_property_readonly("coherence_slots", &FeedbackConfig::coherence_slots)
        .def_property_readonly("feedback_slots", &FeedbackConfig::feedback_slots)
        .def_property_readonly("normalized_delay",
                               [](const FeedbackConfig& c) { return fraction(c.normalized_delay()); })
        .def("block_of", &FeedbackConfig::block_of)
        .def("knows_current", [](const FeedbackConfig& c, int slot) { return knows_current(c, slot); });

    py::class_<ChannelTensor>(m, "ChannelTensor")
        .def_property_readonly("num_rx", &ChannelTensor::num_rx)
        .def_property_readonly("num_tx", &ChannelTensor::num_tx)
        .def_property_readonly("num_blocks", &ChannelTensor::num_blocks)
        .def("gain", &ChannelTensor::gain, py::arg("rx"), py::arg("tx"), py::arg("block"))
        .def("to_numpy", [](const ChannelTensor& t) {
            // (block, rx, tx), zero-based.
            py::array_t<cplx> a({t.num_blocks(), t.num_rx(), t.num_tx()});
            std::copy(t.raw().begin(), t.raw().end(), a.mutable_data());
            return a;
        });

    m.def("generate_channels",
          [](std::uint64_t seed, int num_rx, int num_tx, int num_blocks) {
              return generate_channels(seed, num_rx, num_tx, num_blocks);
          },
          py::arg("seed"), py::arg("num_rx"), py::arg("num_tx"), py::arg("num_blocks"));
    m.def("generate_phase_channels",
          [](const Eigen::MatrixXd& theta, int num_blocks, int coherence_slots) {
              return generate_channels(0, static_cast<int>(theta.rows()), static_cast<int>(theta.cols()),
                                       num_blocks, PhaseOnlyFading{theta, coherence_slots});
          },
          py::arg("theta"), py::arg("num_blocks"), py::arg("coherence_slots") = 1);

    py::class_<SlotSchedule>(m, "SlotSchedule")
        .def_readonly("num_tx", &SlotSchedule::num_tx)
        .def_readonly("n_groups", &SlotSchedule::n_groups)
        .def_readonly("all_slots", &SlotSchedule::all_slots)
        .def_readonly("delayed_only", &SlotSchedule::delayed_only)
        .def_readonly("current_ok", &SlotSchedule::current_ok)
        .def_readonly("groups", &SlotSchedule::groups)
        .def_readonly("filler", &SlotSchedule::filler);
    m.def("build_schedule", &build_schedule, py::arg("num_tx"), py::arg("n_groups"));
    m.def("validate_schedule", [](const SlotSchedule& s) {
        const ScheduleCheck c = validate_schedule(s);
        return py::make_tuple(c.ok, c.violations);
    });

    m.def("run_xchannel",
          [](int num_tx, std::uint64_t seed, int n_groups, double noise_variance) {
              const NoiseModel noise =
                  noise_variance > 0.0 ? NoiseModel::gaussian(noise_variance) : NoiseModel::noiseless();
              const XchannelRunReport r = run_xchannel(num_tx, seed, noise, n_groups);
              py::dict out = decode_dict(r.decode);
              out["symbols_delivered"] = r.accounting.symbols_delivered;
              out["slots_used"] = r.accounting.slots_used;
              out["symbols_per_slot"] = fraction(r.accounting.ratio());
              out["groups_decoded"] = r.groups_decoded;
              out["rejected_groups"] = r.rejected_groups;
              out["alignment_residual"] = r.max_alignment_residual;
              return out;
          },
          py::arg("num_tx"), py::arg("seed"), py::arg("n_groups") = 3, py::arg("noise_variance") = 0.0);

    m.def("run_ic3",
          [](std::uint64_t seed, double noise_variance) {
              const NoiseModel noise =
                  noise_variance > 0.0 ? NoiseModel::gaussian(noise_variance) : NoiseModel::noiseless();
              const Ic3RunReport r = run_ic3(seed, noise);
              py::dict out;
              out["exact_recovery"] = r.decode.exact_recovery;
              out["max_abs_error"] = r.decode.max_abs_error;
              out["worst_condition"] = r.decode.worst_condition;
              out["rejected"] = r.rejected;
              out["symbols_per_slot"] = fraction(r.accounting.ratio());
              out["alignment_residual"] = r.alignment_residual;
              return out;
          },
          py::arg("seed"), py::arg("noise_variance") = 0.0);

    py::class_<TradeoffRegion>(m, "TradeoffRegion")
        .def_property_readonly("label", &TradeoffRegion::label)
        .def("value", [](const TradeoffRegion& r, py::object lambda) { return fraction(r.value(rational(lambda))); },
             py::arg("lam"))
        .def("is_nonincreasing", &TradeoffRegion::is_nonincreasing);
    m.def("dof_x_local", &dof_x_local, py::arg("num_tx"));
    m.def("dof_ic3_local", &dof_ic3_local);
    m.def("dof_x_global_2x2", &dof_x_global_2x2);
    m.def("ia_tdma_region", &ia_tdma_region);
    m.def("ia_gmk_region", &ia_gmk_region);
    m.def("region_table", [](int figure) {
        if (figure != 4 && figure != 5) throw py::value_error("figure must be 4 or 5");
        const auto regions = figure == 4 ? x2_comparison_regions() : ic3_comparison_regions();
        const Table t = emit_region_table(regions, lambda_grid(30, 60));
        return py::make_tuple(t.header, t.rows);
    }, py::arg("figure") = 4);

    m.def("rayleigh_slot_gains", [](std::uint64_t seed) { return rayleigh_slot_gains(seed).slot; },
          py::arg("seed"));
    m.def("phase_fading_orthogonal", [](std::uint64_t seed) { return phase_fading_orthogonal(seed).gains.slot; },
          py::arg("seed") = 0);
    m.def("achievable_sum_rate",
          [](const std::array<Eigen::Matrix2cd, 3>& g, double snr) {
              return achievable_sum_rate(slot_gains(g), SnrConfig(snr, 1.0)).sum_rate;
          },
          py::arg("slot_gains"), py::arg("snr"));
    m.def("solve_power", [](const std::array<Eigen::Matrix2cd, 3>& g) {
        const PowerAllocation p = solve_power(slot_gains(g));
        return py::make_tuple(p.p1, p.p2, p.method == PowerMethod::equality_solve ? "equality_solve"
                                                                                  : "symmetric_fallback");
    });
    m.def("sum_rate_outer", [](const Eigen::Matrix2cd& h, double snr) { return sum_rate_outer(h, SnrConfig(snr, 1.0)); },
          py::arg("gains"), py::arg("snr"));
    m.def("tdma_rate", [](const Eigen::Matrix2cd& h, double snr) { return tdma_rate(h, SnrConfig(snr, 1.0)); },
          py::arg("gains"), py::arg("snr"));
    m.def("asymptotic_gap_bound", &asymptotic_gap_bound);
    m.def("constant_gap", [](const std::vector<double>& grid_db, std::uint64_t seed) {
        const GapReport r = constant_gap(grid_db, seed);
        py::list points;
        for (const GapPoint& p : r.points) {
            points.append(py::dict(py::arg("snr_db") = p.snr_db, py::arg("achievable") = p.achievable,
                                   py::arg("outer") = p.outer, py::arg("gap") = p.gap));
        }
        return py::dict(py::arg("points") = points, py::arg("max_gap") = r.max_gap,
                        py::arg("bound") = r.bound, py::arg("within_bound") = r.within_bound);
    }, py::arg("snr_grid_db"), py::arg("seed") = 0);

    m.def("run_ergodic",
          [](int trials, std::uint64_t seed, std::vector<double> snr_db, int workers) {
              SweepConfig c;
              c.trials = trials;
              c.seed = seed;
              c.workers = workers;
              if (!snr_db.empty()) c.snr_grid_db = std::move(snr_db);
              ErgodicReport r;
              {
                  py::gil_scoped_release release;
                  r = run_ergodic_x2(c);
              }
              const Table t = ergodic_table(r);
              py::dict out;
              for (std::size_t col = 0; col < t.header.size(); ++col) {
                  std::vector<double> values;
                  for (const auto& row : t.rows) values.push_back(std::stod(row[col]));
                  out[py::str(t.header[col])] = values;
              }
              out["rejected"] = r.rejected;
              return out;
          },
          py::arg("trials") = 10000, py::arg("seed") = 1, py::arg("snr_db") = std::vector<double>{},
          py::arg("workers") = 1);
    m.def("estimate_dof_slope", &estimate_dof_slope, py::arg("snr1"), py::arg("rate1"), py::arg("snr2"),
          py::arg("rate2"));

    m.def("cli_main", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
            py::gil_scoped_release release;
            code = cli_main(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
    m.def("run_criterion", [](int id, int workers) {
        CriterionResult r;
        {
            py::gil_scoped_release release;
            r = run_criterion(id, workers);
        }
        return py::dict(py::arg("id") = r.id, py::arg("name") = r.name, py::arg("passed") = r.passed,
                        py::arg("detail") = r.detail, py::arg("seconds") = r.seconds);
    }, py::arg("id"), py::arg("workers") = 1);
}
