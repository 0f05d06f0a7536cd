#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "minext/minext.hpp"

namespace minext::cli {
namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("empty entry in list '" + text + "'");
    out.push_back(item.substr(b, e - b + 1));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<std::size_t> parse_indices(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& s : split_list(text)) {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size() || v < 0) throw std::invalid_argument("bad index '" + s + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
    out.push_back(v);
  }
  return out;
}

/// --signal and optional --signal-im as one complex signal of length n.
Signal parse_signal(std::size_t n, const std::string& re, const std::string& im) {
  const auto r = parse_reals(re);
  if (r.size() != n) throw std::invalid_argument("signal needs exactly N entries");
  std::vector<Complex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = r[i];
  if (!im.empty()) {
    const auto q = parse_reals(im);
    if (q.size() != n) throw std::invalid_argument("imaginary part needs exactly N entries");
    for (std::size_t i = 0; i < n; ++i) v[i] += Complex(0.0, q[i]);
  }
  return Signal(std::move(v));
}

/// JSON array of {omega, re, im} objects.
std::map<std::size_t, Complex> read_samples_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open samples file '" + path + "'");
  const Json j = Json::parse(in);
  if (!j.is_array()) throw std::invalid_argument("samples file must hold a JSON array");
  std::map<std::size_t, Complex> m;
  for (const auto& e : j) {
    const auto w = e.at("omega").get<long long>();
    if (w < 0) throw std::invalid_argument("samples file: negative omega");
    const double re = e.at("re").get<double>();
    const double im = e.contains("im") ? e.at("im").get<double>() : 0.0;
    if (!m.emplace(static_cast<std::size_t>(w), Complex(re, im)).second) {
      throw std::invalid_argument("samples file: duplicate omega");
    }
  }
  return m;
}

void write_csv(const std::string& path, const std::vector<TrialRecord>& records) {
  if (path.empty()) return;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  write_trials_csv(os, records);
}

void add_solver_options(CLI::App* app, SolverConfig& cfg) {
  app->add_option("--max-iter", cfg.max_iter, "Iteration budget")->capture_default_str();
  app->add_option("--eps-feasibility", cfg.eps_feasibility, "Constraint residual bound")
      ->capture_default_str();
  app->add_option("--eps-step", cfg.eps_step, "Iterate change bound")->capture_default_str();
  app->add_option("--relaxation", cfg.relaxation, "Relaxation in (0, 2)")->capture_default_str();
  app->add_option("--recovery-rel-tol", cfg.recovery_rel_tol, "Relative l2 error for exact recovery")
      ->capture_default_str();
  app->add_option("--step-scale", cfg.step_scale, "Threshold scale")->capture_default_str();
}

struct Options {
  std::size_t n = 0;
  std::size_t t = 1;
  std::string omega_list;
  std::string samples_file;
  std::string truth, truth_im;
  std::string signal, signal_im;
  std::string support_list;
  bool comb = false;
  bool oracle = false;
  bool exhaustive = false;
  long long spike = -1;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
  // lacunary
  int nu = 1;
  double d = 0.0, r = 0.0, a = 0.0;
  // band
  std::size_t step = 0;
  std::size_t band = 0;
  std::size_t points = 0;
  // Monte Carlo
  double tau = -1.0;
  std::size_t omega_size = 0;
  int phases = 8;
  double delta = 0.1;
  double m_exponent = 1.0;
  double lambda = 1.0;
  DeviationScale deviation = DeviationScale::log_n;
  // failure example
  std::size_t offset = 0;
  std::size_t keep = 1;
  bool random_zhat = false;
  bool solve = false;
  SolverConfig solver;
  std::string config_file;
};

/// Appends --key=value for every config entry whose flag is absent from
/// args. Entries under a [section] apply only to the subcommand of that name.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path, command;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    if (command.empty() && !args[i].empty() && args[i][0] != '-') command = args[i];
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  const auto items = CLI::ConfigINI().from_config(in);
  auto present = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--" || item.inputs.empty()) continue;
    if (!item.parents.empty() && item.parents.front() != command) continue;
    const std::string flag = "--" + item.name;
    if (present(flag)) continue;
    std::string value = item.inputs.front();
    for (std::size_t k = 1; k < item.inputs.size(); ++k) value += "," + item.inputs[k];
    args.push_back(flag + "=" + value);
  }
  return args;
}

Json cmd_recover(const Options& o, const CLI::App& app) {
  const SupportSet omega_flag = o.omega_list.empty() ? SupportSet::empty(o.n)
                                                     : SupportSet(o.n, parse_indices(o.omega_list));
  std::optional<Signal> truth;
  if (!o.truth.empty()) truth = parse_signal(o.n, o.truth, o.truth_im);
  Samples samples;
  if (!o.samples_file.empty()) {
    auto m = read_samples_file(o.samples_file);
    if (app.count("--omega") != 0) {
      std::map<std::size_t, Complex> sel;
      for (std::size_t w : omega_flag) {
        auto it = m.find(w);
        if (it == m.end()) throw std::invalid_argument("samples file lacks omega " + std::to_string(w));
        sel.emplace(w, it->second);
      }
      m = std::move(sel);
    }
    samples = Samples::from_map(o.n, m);
  } else if (truth) {
    if (app.count("--omega") == 0) throw std::invalid_argument("--omega is required with --truth");
    samples = restrict_spectrum(dft(*truth), omega_flag);
  } else {
    throw std::invalid_argument("recover needs --samples-file or --truth");
  }

  const RecoveryReport rep = solve_minimal_extension(samples, o.solver, truth ? &*truth : nullptr);
  Json results = to_json(rep);
  if (o.oracle) {
    const BpOracleResult orc = exhaustive_bp_oracle(samples);
    results["oracle"] = Json{{"objective", orc.objective},
                             {"minimizer_count", orc.minimizers.size()},
                             {"unique", orc.minimizers.size() == 1}};
  }
  Json config{{"n", o.n},
              {"omega", index_array(samples.omega)},
              {"samples", complex_array(std::span<const Complex>(samples.values))},
              {"truth", truth ? complex_array(*truth) : Json(nullptr)},
              {"solver", to_json(o.solver)}};
  return make_report(std::move(config), std::move(results));
}

Json cmd_certify(const Options& o) {
  const SupportSet omega(o.n, parse_indices(o.omega_list));
  const IdempotentKernel k = make_kernel(omega);
  const ConditionCheck iv = check_condition_iv(k, o.t);
  double off_peak = 0.0;
  for (std::size_t t = 1; t < o.n; ++t) off_peak = std::max(off_peak, std::abs(k(t)));
  const double energy = kernel_energy(k);
  const double lower = omega_parseval_lower_bound(o.t, o.n);

  Json results{{"omega_size", omega.size()},
               {"kernel_peak", k.peak()},
               {"kernel_max_off_peak", off_peak},
               {"condition_iv", Json{{"holds", iv.holds}, {"margin", iv.margin}}},
               {"kernel_energy", energy},
               {"parseval_identity_error", std::abs(energy - static_cast<double>(o.n * omega.size()))}};
  if (!o.support_list.empty()) {
    const SupportSet s(o.n, parse_indices(o.support_list));
    const SignPattern sp(s, std::vector<Complex>(s.size(), Complex(1.0)));
    const DualCertificate p = build_certificate(sp, k);
    const CertificateCheck c = check_condition_2prime(p, sp);
    results["certificate"] = Json{{"support", index_array(s)},
                                  {"holds", c.holds},
                                  {"worst_on_support", c.worst_on_support},
                                  {"worst_off_support", c.worst_off_support},
                                  {"leakage", certificate_leakage(p)}};
  }
  if (o.trials > 0 && iv.holds) {
    const ImplicationReport ir =
        verify_implication_iv_to_recovery(k, o.t, o.trials, o.seed, o.solver, o.threads);
    results["implication"] = Json{{"trials", ir.trials},
                                  {"certificate_holds", ir.certificate_holds},
                                  {"recoveries", ir.recoveries},
                                  {"counterexamples", ir.counterexamples},
                                  {"max_leakage", ir.max_leakage}};
  } else {
    results["implication"] = nullptr;
  }
  Json config{{"n", o.n}, {"omega", index_array(omega)}, {"t_sparsity", o.t}, {"trials", o.trials},
              {"seed", o.seed}};
  Json bounds{{"parseval_lower_bound", lower},
              {"omega_meets_parseval_bound", static_cast<double>(omega.size()) >= lower}};
  return make_report(std::move(config), std::move(results), std::move(bounds));
}

Json cmd_uncertainty(const Options& o) {
  Signal x = Signal::zeros(1);
  std::string source;
  if (o.comb) {
    const auto m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(o.n))));
    if (m * m != o.n) throw std::invalid_argument("--comb needs N to be a perfect square");
    x = make_comb_witness(m).signal;
    source = "comb";
  } else if (!o.signal.empty()) {
    x = parse_signal(o.n, o.signal, o.signal_im);
    source = "signal";
  } else if (!o.support_list.empty()) {
    std::vector<Complex> v(o.n, Complex{});
    for (std::size_t t : SupportSet(o.n, parse_indices(o.support_list))) v[t] = 1.0;
    x = Signal(std::move(v));
    source = "support";
  } else {
    throw std::invalid_argument("uncertainty needs --comb, --signal or --support");
  }
  const SupportProduct prod = verify_support_product(x);
  const SupportSum sum = sum_bound(x);
  const std::size_t run = max_zero_run(dft(normalized(x)));
  Json results{{"time_support", prod.time_support},
               {"frequency_support", prod.frequency_support},
               {"product", prod.product},
               {"holds", prod.holds},
               {"equality", prod.product == o.n},
               {"sum", sum.sum},
               {"sum_holds", sum.holds},
               {"max_zero_run", run},
               {"zero_run_bound_holds", run + 1 <= prod.time_support}};
  Json config{{"n", o.n}, {"source", source}, {"eps_zero", ZeroTolerance{}.value()}};
  Json bounds{{"product_lower_bound", o.n}, {"sum_lower_bound", 2.0 * std::sqrt(static_cast<double>(o.n))}};
  return make_report(std::move(config), std::move(results), std::move(bounds));
}

Json cmd_dh(const Options& o) {
  Signal x = Signal::zeros(o.n);
  std::string source;
  if (o.comb) {
    const auto m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(o.n))));
    if (m * m != o.n) throw std::invalid_argument("--comb needs N to be a perfect square");
    x = make_comb_witness(m).signal;
    source = "comb";
  } else if (o.spike >= 0) {
    if (static_cast<std::size_t>(o.spike) >= o.n) throw std::invalid_argument("--spike must be < N");
    x = Signal::delta(o.n, static_cast<std::size_t>(o.spike));
    source = "spike";
  } else if (!o.signal.empty()) {
    x = parse_signal(o.n, o.signal, o.signal_im);
    source = "signal";
  } else {
    throw std::invalid_argument("dh needs --comb, --spike or --signal");
  }
  const MixedDecomposition l1 = dh_decompose_l1(x, o.solver);
  Json results{{"l1",
                Json{{"objective", l1.objective},
                     {"feasibility_residual", l1.feasibility_residual},
                     {"iterations", l1.iterations},
                     {"y", complex_array(l1.y)},
                     {"z", complex_array(l1.z)}}}};
  if (o.exhaustive) {
    const L0DecompositionResult l0 = dh_decompose_l0(x);
    Json decs = Json::array();
    for (const auto& dcm : l0.decompositions) {
      decs.push_back(Json{{"time_support", index_array(dcm.time_support)},
                          {"frequency_support", index_array(dcm.frequency_support)}});
    }
    results["l0"] = Json{{"best_total", l0.best_total},
                         {"count", l0.decompositions.size()},
                         {"decompositions", std::move(decs)}};
  } else {
    results["l0"] = nullptr;
  }
  Json config{{"n", o.n}, {"source", source}, {"signal", complex_array(x)}, {"solver", to_json(o.solver)}};
  Json bounds{{"uniqueness_threshold", 0.5 * std::sqrt(static_cast<double>(o.n))}};
  return make_report(std::move(config), std::move(results), std::move(bounds));
}

Json cmd_lacunary(const Options& o) {
  LacunaryParams p{o.nu, o.d, o.r, o.a};
  if (o.a == 0.0) p = LacunaryParams::with_default_scale(o.nu, o.d, o.r);
  const TheoremConditions tc = check_theorem_conditions(p);
  const BoundReport b = majorant_chain(p);
  const double a2 = p.a * p.a;
  constexpr double pi = std::numbers::pi;
  Json results{{"A_max", b.A_max},
               {"B_max", b.B_max},
               {"tail", b.tail},
               {"tail_constant", b.tail_constant},
               {"A_series", b.A_series},
               {"tail_exact", b.tail_exact},
               {"radius_admissible", b.radius_admissible},
               {"step_admissible", b.step_admissible},
               {"chain_holds", b.chain_holds},
               {"theorem",
                Json{{"cond_44", tc.cond_44},
                     {"cond_44_alt", tc.cond_44_alt},
                     {"cond_45", tc.cond_45},
                     {"cond_37", tc.cond_37},
                     {"cond_38", tc.cond_38}}}};
  if (o.n > 0) {
    results["band_size_for_radius"] = band_size_for_radius(o.n, p.r);
    results["sufficient_band_size"] = sufficient_band_size(o.n, p.d);
  }
  Json config{{"nu", p.nu}, {"d", p.d}, {"r", p.r}, {"a", p.a}};
  Json bounds{{"A_target", pi / (4.0 * a2)},
              {"B_target", 1.0 - 2.0 * pi / (4.0 * a2)},
              {"tail_target", pi / (8.0 * a2)}};
  return make_report(std::move(config), std::move(results), std::move(bounds));
}

Json cmd_band(const Options& o) {
  const std::size_t band = o.band != 0 ? o.band : sufficient_band_size(o.n, static_cast<double>(o.step));
  const BandRecoveryReport rep =
      band_recovery_experiment(o.n, o.step, band, o.trials, o.seed, o.solver, o.points, o.threads);
  write_csv(o.out, rep.records);
  Json results{{"successes", rep.successes},
               {"trials", rep.trials},
               {"success_rate", static_cast<double>(rep.successes) / static_cast<double>(rep.trials)},
               {"nonconverged", rep.nonconverged}};
  Json config{{"n", o.n},     {"d", o.step},       {"band_size", band}, {"points", o.points},
              {"trials", o.trials}, {"master_seed", o.seed}, {"per_trial_seeds", kSeedRule},
              {"solver", to_json(o.solver)}};
  Json bounds{{"sufficient_band_size", rep.sufficient_band},
              {"meets_sufficient_band", rep.meets_sufficient_band}};
  return make_report(std::move(config), std::move(results), std::move(bounds));
}

ExperimentConfig experiment_config(const Options& o, const CLI::App& app) {
  ExperimentConfig c;
  c.n = o.n;
  c.t_sparsity = o.t;
  if (app.count("--tau") != 0) c.tau = o.tau;
  if (app.count("--omega") != 0) c.omega_size = o.omega_size;
  c.trials = o.trials;
  c.master_seed = o.seed;
  c.m_exponent = o.m_exponent;
  c.delta = o.delta;
  c.n_phases = o.phases;
  c.solver = o.solver;
  c.threads = o.threads;
  c.validate();
  return c;
}

Json cmd_mc_iv(const Options& o, const CLI::App& app) {
  const ExperimentConfig cfg = experiment_config(o, app);
  const KernelTestReport rep = mc_condition_iv_probability(cfg);
  write_csv(o.out, rep.mc.records);
  Json results = to_json(rep.mc);
  results["holding"] = rep.holding;
  results["parseval_violations"] = rep.parseval_violations;
  results["sharpened_bound_satisfied"] = optional_json(rep.sharpened_satisfied);
  Json bounds{{"failure_bound", rep.bounds.main},
              {"failure_bound_without_cubic_term", rep.bounds.sharpened},
              {"parseval_lower_bound", rep.parseval_bound},
              {"thresholds", to_json(rep.thresholds)}};
  return make_report(to_json(cfg), std::move(results), std::move(bounds), rep.thresholds.vacuous);
}

Json cmd_mc_recovery(const Options& o, const CLI::App& app) {
  const ExperimentConfig cfg = experiment_config(o, app);
  const RecoveryMcReport rep = mc_recovery_probability(cfg);
  write_csv(o.out, rep.mc.records);
  Json results = to_json(rep.mc);
  results["nonconverged"] = rep.nonconverged;
  results["mean_omega_size"] = rep.mean_omega_size;
  Json bounds{{"thresholds", to_json(rep.thresholds)},
              {"clears_crt_22", rep.mean_omega_size >= rep.thresholds.crt_22},
              {"clears_crt_c", rep.mean_omega_size >= rep.thresholds.crt_c}};
  return make_report(to_json(cfg), std::move(results), std::move(bounds), rep.thresholds.vacuous);
}

Json cmd_mc_omega(const Options& o) {
  const ConcentrationReport rep =
      omega_concentration_check(o.tau, o.n, o.trials, o.lambda, o.seed, o.deviation, o.threads);
  write_csv(o.out, rep.mc.records);
  Json results = to_json(rep.mc);
  results["deviation"] = rep.deviation;
  results["exact_probability"] = rep.exact_probability;
  Json config{{"n", o.n},           {"tau", o.tau},     {"lambda", o.lambda}, {"trials", o.trials},
              {"master_seed", o.seed}, {"deviation_scale", to_string(o.deviation)}};
  Json bounds{{"concentration_bound", optional_json(rep.mc.theoretical_bound)},
              {"chernoff_u", rep.chernoff_u},
              {"bound_derivation_valid", rep.chernoff_u < 1.0}};
  return make_report(std::move(config), std::move(results), std::move(bounds));
}

Json cmd_failure_example(const Options& o) {
  const SupportSet band = SupportSet::interval(o.n, o.offset % std::max<std::size_t>(o.n, 1), o.band);
  FailureExample fe = [&] {
    if (!o.random_zhat) return construct_failure_example(band, o.keep);
    Xoshiro256 rng(o.seed);
    return construct_failure_example(band, random_offband_spectrum(band, rng), o.keep);
  }();
  const Spectrum xs = dft(fe.x), cs = dft(fe.competitor);
  double agreement = 0.0;
  for (std::size_t w : band) agreement = std::max(agreement, std::abs(xs[w] - cs[w]));
  Json results{{"kept", fe.kept},
               {"x_l1", l1_norm(fe.x)},
               {"competitor_l1", l1_norm(fe.competitor)},
               {"band_agreement", agreement},
               {"x", complex_array(fe.x)},
               {"competitor", complex_array(fe.competitor)}};
  if (o.solve) {
    const RecoveryReport r = solve_minimal_extension(restrict_spectrum(xs, band), o.solver, &fe.x);
    results["solver"] = Json{{"objective", r.objective},
                             {"converged", r.converged},
                             {"recovered", optional_json(r.recovered)}};
  } else {
    results["solver"] = nullptr;
  }
  Json config{{"n", o.n},
              {"band", index_array(band)},
              {"keep", o.keep},
              {"zhat", o.random_zhat ? "random" : "delta"},
              {"seed", o.seed}};
  return make_report(std::move(config), std::move(results));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse recovery by l1-minimal extension on Z_N", "minext"};
  app.require_subcommand(1);
  Options o;
  std::function<Json()> action;

  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--config", o.config_file, "key=value file; command-line flags take precedence");
    return s;
  };

  {
    auto* s = sub("recover", "Recover a signal as the l1-minimal extension of spectral samples");
    s->add_option("--n", o.n, "Group order N")->required()->check(CLI::PositiveNumber);
    s->add_option("--omega", o.omega_list, "Sampled frequencies, comma separated");
    s->add_option("--samples-file", o.samples_file, "JSON array of {omega, re, im}");
    s->add_option("--truth", o.truth, "Ground-truth signal (real parts), comma separated");
    s->add_option("--truth-im", o.truth_im, "Ground-truth imaginary parts")->needs("--truth");
    s->add_flag("--oracle", o.oracle, "Also run the exhaustive oracle (real symmetric instances)");
    add_solver_options(s, o.solver);
    s->callback([&, s] { action = [&, s] { return cmd_recover(o, *s); }; });
  }
  {
    auto* s = sub("certify", "Kernel test, certificate and recovery implication for a frequency set");
    s->add_option("--n", o.n, "Group order N")->required()->check(CLI::PositiveNumber);
    s->add_option("--omega", o.omega_list, "Frequency set, comma separated")->required();
    s->add_option("--t", o.t, "Sparsity T")->check(CLI::PositiveNumber)->capture_default_str();
    s->add_option("--support", o.support_list, "Time support for a certificate with unit signs");
    s->add_option("--trials", o.trials, "Random implication trials (0 to skip)")->capture_default_str();
    s->add_option("--seed", o.seed, "Master seed");
    s->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    add_solver_options(s, o.solver);
    s->callback([&] { action = [&] { return cmd_certify(o); }; });
  }
  {
    auto* s = sub("uncertainty", "Support-size product and sum for a signal");
    s->add_option("--n", o.n, "Group order N")->required()->check(CLI::PositiveNumber);
    s->add_flag("--comb", o.comb, "Use the Dirac comb of order sqrt(N)");
    s->add_option("--signal", o.signal, "Signal real parts, comma separated");
    s->add_option("--signal-im", o.signal_im, "Signal imaginary parts")->needs("--signal");
    s->add_option("--support", o.support_list, "Indicator of these indices");
    s->callback([&] { action = [&] { return cmd_uncertainty(o); }; });
  }
  {
    auto* s = sub("dh", "Time/frequency decomposition x = y + z");
    s->add_option("--n", o.n, "Group order N")->required()->check(CLI::PositiveNumber);
    s->add_flag("--comb", o.comb, "Use the Dirac comb of order sqrt(N)");
    s->add_option("--spike", o.spike, "Use the delta at this index");
    s->add_option("--signal", o.signal, "Signal real parts, comma separated");
    s->add_option("--signal-im", o.signal_im, "Signal imaginary parts")->needs("--signal");
    s->add_flag("--exhaustive", o.exhaustive, "Also run the exhaustive l0 search (N <= 16)");
    add_solver_options(s, o.solver);
    s->callback([&] { action = [&] { return cmd_dh(o); }; });
  }
  {
    auto* s = sub("lacunary", "Gaussian majorant chain and theorem conditions");
    s->add_option("--d", o.d, "Spectral step d")->required();
    s->add_option("--r", o.r, "Radius r in (0, 1/2)")->required();
    s->add_option("--a", o.a, "Gaussian scale (default sqrt(d/r))");
    s->add_option("--nu", o.nu, "Dimension")->capture_default_str();
    s->add_option("--n", o.n, "Also report discrete band sizes for this N");
    s->callback([&] { action = [&] { return cmd_lacunary(o); }; });
  }
  {
    auto* s = sub("band", "Recovery of step-separated signals from a band of frequencies");
    s->add_option("--n", o.n, "Group order N")->required()->check(CLI::PositiveNumber);
    s->add_option("--d", o.step, "Minimal cyclic step of the support")->required()->check(CLI::PositiveNumber);
    s->add_option("--band", o.band, "Band size (default: the sufficient size)");
    s->add_option("--points", o.points, "Support size (0 = random)");
    s->add_option("--trials", o.trials, "Trials")->capture_default_str();
    s->add_option("--seed", o.seed, "Master seed");
    s->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    s->add_option("--out", o.out, "CSV file for per-trial rows");
    add_solver_options(s, o.solver);
    s->callback([&] { action = [&] { return cmd_band(o); }; });
  }
  auto add_mc = [&](CLI::App* s) {
    s->add_option("--n", o.n, "Group order N")->required()->check(CLI::PositiveNumber);
    s->add_option("--t", o.t, "Sparsity T")->check(CLI::PositiveNumber)->capture_default_str();
    auto* tau = s->add_option("--tau", o.tau, "Bernoulli selection parameter");
    auto* om = s->add_option("--omega", o.omega_size, "Fixed |Omega|");
    tau->excludes(om);
    s->add_option("--trials", o.trials, "Trials")->capture_default_str();
    s->add_option("--seed", o.seed, "Master seed");
    s->add_option("--phases", o.phases, "Phase sectors (>= 3)")->capture_default_str();
    s->add_option("--delta", o.delta, "Threshold slack")->capture_default_str();
    s->add_option("--m", o.m_exponent, "Probability exponent M")->capture_default_str();
    s->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    s->add_option("--out", o.out, "CSV file for per-trial rows");
    add_solver_options(s, o.solver);
  };
  {
    auto* s = sub("mc-iv", "Monte Carlo probability that the kernel test fails");
    add_mc(s);
    s->callback([&, s] { action = [&, s] { return cmd_mc_iv(o, *s); }; });
  }
  {
    auto* s = sub("mc-recovery", "Monte Carlo probability of exact recovery");
    add_mc(s);
    s->callback([&, s] { action = [&, s] { return cmd_mc_recovery(o, *s); }; });
  }
  {
    auto* s = sub("mc-omega", "Concentration of |Omega| under Bernoulli selection");
    s->add_option("--n", o.n, "Group order N")->required()->check(CLI::PositiveNumber);
    s->add_option("--tau", o.tau, "Bernoulli selection parameter")->required();
    s->add_option("--lambda", o.lambda, "Deviation multiplier")->capture_default_str();
    const std::map<std::string, DeviationScale> scales{{"log", DeviationScale::log_n},
                                                       {"sqrt-log", DeviationScale::sqrt_log_n},
                                                       {"none", DeviationScale::none}};
    s->add_option("--deviation", o.deviation, "Deviation scale: log, sqrt-log or none")
        ->transform(CLI::CheckedTransformer(scales, CLI::ignore_case))
        ->default_str("log");
    s->add_option("--trials", o.trials, "Trials")->capture_default_str();
    s->add_option("--seed", o.seed, "Master seed");
    s->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    s->add_option("--out", o.out, "CSV file for per-trial rows");
    s->callback([&] { action = [&] { return cmd_mc_omega(o); }; });
  }
  {
    auto* s = sub("failure-example", "Certified instance where band-limited l1 extension fails");
    s->add_option("--n", o.n, "Group order N")->required()->check(CLI::PositiveNumber);
    s->add_option("--band", o.band, "Band size")->required()->check(CLI::PositiveNumber);
    s->add_option("--offset", o.offset, "First band frequency");
    s->add_option("--keep", o.keep, "Initial number of kept entries")->capture_default_str();
    s->add_flag("--random", o.random_zhat, "Random off-band spectrum instead of a delta");
    s->add_option("--seed", o.seed, "Seed for --random");
    s->add_flag("--solve", o.solve, "Run the solver on the band samples of x");
    add_solver_options(s, o.solver);
    s->callback([&] { action = [&] { return cmd_failure_example(o); }; });
  }

  CLI::App* active = &app;
  try {
    std::vector<std::string> args(argv, argv + argc);
    args = merge_config(std::move(args));
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
    for (CLI::App* s : app.get_subcommands()) active = s;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    for (CLI::App* s : app.get_subcommands()) active = s;
    err << active->help();
    return 2;
  }

  try {
    const Json report = action();
    out << report.dump(2) << '\n';
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return 2;
  } catch (const InadmissibleScale& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return 2;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace minext::cli
