#pragma once

// JSON and CSV emission for experiment reports.
//
// Every JSON report has the top-level keys
//   config, results, bounds, threshold_vacuous, version
// in that order. Reports contain no timings or host data, so equal inputs
// give byte-identical output.

#include <json.hpp>

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "minext/experiments.hpp"
#include "minext/signal.hpp"
#include "minext/solver.hpp"
#include "minext/trials.hpp"

namespace minext {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportVersion = "minext-report/1";

/// Complex entries as [re, im] pairs.
inline Json complex_array(std::span<const Complex> v) {
  Json out = Json::array();
  for (const Complex& c : v) out.push_back(Json::array({c.real(), c.imag()}));
  return out;
}

template <class D>
Json complex_array(const Sequence<D>& s) {
  return complex_array(s.values());
}

inline Json index_array(const SupportSet& s) {
  Json out = Json::array();
  for (std::size_t i : s) out.push_back(i);
  return out;
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json to_json(const SolverConfig& c) {
  return Json{{"max_iter", c.max_iter},
              {"eps_feasibility", c.eps_feasibility},
              {"eps_step", c.eps_step},
              {"relaxation", c.relaxation},
              {"recovery_rel_tol", c.recovery_rel_tol},
              {"step_scale", c.step_scale}};
}

inline Json to_json(const ExperimentConfig& c) {
  return Json{{"n", c.n},
              {"t_sparsity", c.t_sparsity},
              {"tau", optional_json(c.tau)},
              {"omega_size", optional_json(c.omega_size)},
              {"trials", c.trials},
              {"master_seed", c.master_seed},
              {"m_exponent", c.m_exponent},
              {"delta", c.delta},
              {"n_phases", c.n_phases},
              {"phase_cos", c.phase_cos()},
              {"solver", to_json(c.solver)}};
}

inline Json to_json(const Thresholds& t) {
  return Json{{"kernel_test", t.kernel_test},
              {"crt_22", t.crt_22},
              {"crt_23", t.crt_23},
              {"crt_c", t.crt_c}};
}

inline Json to_json(const McReport& r) {
  return Json{{"event", r.event},
              {"success_count", r.success_count},
              {"trials", r.trials},
              {"empirical_p", r.empirical_p},
              {"standard_error", r.standard_error},
              {"theoretical_bound", optional_json(r.theoretical_bound)},
              {"bound_satisfied", optional_json(r.bound_satisfied)},
              {"per_trial_seeds", r.per_trial_seeds}};
}

inline Json to_json(const RecoveryReport& r) {
  return Json{{"objective", r.objective},
              {"feasibility_residual", r.feasibility_residual},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"recovered", optional_json(r.recovered)},
              {"minimizer", complex_array(r.minimizer)}};
}

/// Assembles the fixed top-level layout.
inline Json make_report(Json config, Json results, Json bounds = Json::object(),
                        std::optional<bool> threshold_vacuous = std::nullopt) {
  Json out;
  out["config"] = std::move(config);
  out["results"] = std::move(results);
  out["bounds"] = std::move(bounds);
  out["threshold_vacuous"] = optional_json(threshold_vacuous);
  out["version"] = kReportVersion;
  return out;
}

/// Shortest decimal that round-trips, matching the JSON number format.
inline std::string format_double(double v) {
  return Json(v).dump();
}

inline void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << "trial_index,seed,omega_size,success,objective,residual\n";
  for (const TrialRecord& r : records) {
    os << r.index << ',' << r.seed << ',' << r.omega_size << ',' << (r.success ? 1 : 0) << ','
       << format_double(r.objective) << ',' << format_double(r.residual) << '\n';
  }
}

}  // namespace minext
