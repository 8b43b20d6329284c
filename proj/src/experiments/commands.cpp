#include "ionjc/errors.hpp"
#include "ionjc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

namespace ionjc {

namespace {

std::string index_label(const std::string& prefix, int one_based) { return prefix + std::to_string(one_based); }

struct SweepRow {
  double rabi = 0.0;
  double delta = 0.0;
  double delta_breve = 0.0;
  double eta_breve = 0.0;
  double tau = 0.0;
  double tau_standard = 0.0;
  double infidelity_pipeline = 0.0;
  double infidelity_standard = 0.0;
  double residual = 0.0;
  bool reachable = true;
};

ModelSpec with_drive(const ModelSpec& base, double rabi, double detuning) {
  ModelSpec m = base;
  m.drives[0].rabi = rabi;
  m.drives[0].omega_l = m.omega_ge - detuning;
  return m;
}

SweepRow sweep_point(const ModelSpec& base, int mode, double rabi) {
  const auto k = static_cast<std::size_t>(mode);
  const double nu = base.nu[k];
  const double eta = base.eta(0, mode);
  SweepRow row;
  row.rabi = rabi;

  // Transformed RWA on the corrected resonance nu_k = delta_breve, or as close as it gets.
  const auto required = corrected_resonance_detuning(nu, rabi);
  row.reachable = required.has_value();
  row.delta = required.value_or(0.0);
  const ModelSpec m = with_drive(base, rabi, row.delta);
  const BalancedParams p = m.balanced()[0];
  row.delta_breve = p.delta_breve;
  row.eta_breve = p.eta_breve[k];
  row.residual = std::abs(nu - p.delta_breve);
  row.tau = std::numbers::pi * p.root / (2.0 * eta * nu);
  std::vector<ResonantPair> pairs;
  if (row.reachable) pairs.push_back({0, mode});
  const OperatorMatrix exact = exact_propagator(m, row.tau, 0.0);
  const OperatorMatrix rwa = pipeline_propagator(m, row.tau, 0.0, PipelineMode::rwa, pairs);
  row.infidelity_pipeline = propagator_infidelity(exact, rwa);

  // Standard RWA on delta = nu_k with the standard pi-pulse time.
  const ModelSpec s = with_drive(base, rabi, nu);
  row.tau_standard = std::numbers::pi / (2.0 * eta * rabi);
  const OperatorMatrix exact_s = exact_propagator(s, row.tau_standard, 0.0);
  const OperatorMatrix standard = standard_rwa_propagator(s, 0, mode, row.tau_standard, 0.0);
  row.infidelity_standard = propagator_infidelity(exact_s, standard);
  return row;
}

// Observables of a state: excited population per spin, mean occupation per mode.
void observables(const HilbertConfig& c, const CVector& psi, std::vector<double>& excited, std::vector<double>& nbar) {
  excited.assign(static_cast<std::size_t>(c.n_spins), 0.0);
  nbar.assign(static_cast<std::size_t>(c.n_modes), 0.0);
  for (Index i = 0; i < psi.size(); ++i) {
    const double w = std::norm(psi(i));
    if (w == 0.0) continue;
    const auto occ = c.occupations(i);
    for (int p = 0; p < c.n_modes; ++p) nbar[static_cast<std::size_t>(p)] += w * occ[static_cast<std::size_t>(p)];
    for (int j = 0; j < c.n_spins; ++j)
      if (c.spin_state(i, j) == 0) excited[static_cast<std::size_t>(j)] += w;
  }
}

}  // namespace

Table cmd_modes(const ExperimentConfig& config) {
  const ChainModel chain = build_chain(config);
  Eigen::MatrixXd eta;
  if (!config.drives.empty()) eta = build_model(config).eta;

  Table t;
  t.title = "ionjc modes";
  t.notes.push_back("ions=" + std::to_string(config.ions));
  t.columns = {"mode", "nu"};
  for (int j = 1; j <= chain.ions; ++j) t.columns.push_back(index_label("M_ion", j));
  for (Index d = 0; d < eta.rows(); ++d) t.columns.push_back(index_label("eta_drive", static_cast<int>(d) + 1));
  for (int p = 0; p < chain.ions; ++p) {
    std::vector<Cell> row{std::int64_t{p + 1}, chain.modes.frequencies[static_cast<std::size_t>(p)]};
    for (int j = 0; j < chain.ions; ++j) row.emplace_back(chain.modes.mode_matrix(j, p));
    for (Index d = 0; d < eta.rows(); ++d) row.emplace_back(eta(d, p));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_resonance(const ExperimentConfig& config) {
  const ModelSpec model = build_model(config);
  const ResonanceReport report = resonance_offsets(model);
  Table t;
  t.title = "ionjc resonance";
  t.notes.push_back("nearest drive=" + std::to_string(report.nearest.drive + 1) +
                    " mode=" + std::to_string(report.nearest.mode + 1));
  t.columns = {"drive", "ion", "mode", "nu", "rabi", "detuning", "delta_breve",
               "omega_minus", "omega_plus", "required_detuning", "nearest"};
  for (const ResonanceEntry& e : report.entries) {
    const LaserDrive& d = model.drives[static_cast<std::size_t>(e.drive)];
    const bool nearest = e.drive == report.nearest.drive && e.mode == report.nearest.mode;
    t.rows.push_back({std::int64_t{e.drive + 1}, std::int64_t{d.ion + 1}, std::int64_t{e.mode + 1}, e.nu, d.rabi,
                      model.detuning(e.drive), e.delta_breve, e.omega_minus, e.omega_plus,
                      e.required_detuning ? Cell{*e.required_detuning} : Cell{std::string("unreachable")},
                      std::int64_t{nearest ? 1 : 0}});
  }
  return t;
}

Table cmd_sweep_rabi(const ExperimentConfig& config, int threads) {
  const ModelSpec base = build_model(config);
  const int mode = config.sweep_mode - 1;
  if (base.eta(0, mode) == 0.0) throw ConfigError("sweep mode has zero Lamb-Dicke factor for the drive");
  const double scale = config.frequency_scale();

  const std::size_t n = config.sweep_grid.size();
  std::vector<SweepRow> rows(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        rows[i] = sweep_point(base, mode, config.sweep_grid[i] * scale);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int count = std::clamp(threads, 1, static_cast<int>(n));
  std::vector<std::thread> pool;
  for (int i = 1; i < count; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Table t;
  t.title = "ionjc sweep-rabi";
  t.notes.push_back("eta=" + format_double(base.eta(0, mode)) + " mode=" + std::to_string(config.sweep_mode) +
                    " n_max=" + std::to_string(base.config.n_max) + " guard=" + std::to_string(base.config.guard));
  t.notes.push_back("reachable=0 rows: corrected resonance needs nu_k >= 2 rabi; delta set to 0 and no resonant term kept");
  t.columns = {"rabi", "delta", "delta_breve", "eta_breve", "tau_pi", "infidelity_pipeline_rwa",
               "infidelity_standard_rwa", "omega_minus_residual", "reachable", "tau_standard"};
  for (const SweepRow& r : rows)
    t.rows.push_back({r.rabi, r.delta, r.delta_breve, r.eta_breve, r.tau, r.infidelity_pipeline, r.infidelity_standard,
                      r.residual, std::int64_t{r.reachable ? 1 : 0}, r.tau_standard});
  return t;
}

CVector initial_state(const ExperimentConfig& config, const HilbertConfig& hilbert) {
  const int n_max = hilbert.n_max;
  CVector state = CVector::Ones(1);
  for (int p = 0; p < hilbert.n_modes; ++p) {
    ModeState ms;
    if (!config.initial_modes.empty()) ms = config.initial_modes[static_cast<std::size_t>(p)];
    CVector local = CVector::Zero(n_max);
    if (ms.alpha) {
      const HilbertConfig single{1, n_max, 1, hilbert.guard};
      const CMatrix d = mode_displacement(single, 0, *ms.alpha);
      local = d.col(0);
      const double above = local.tail(hilbert.guard).squaredNorm();
      if (above > 1e-6)
        throw ConfigError("coherent amplitude too large for n_max: population " + format_double(above) +
                          " above the guard threshold for mode " + std::to_string(p + 1));
    } else {
      if (ms.fock < 0 || ms.fock >= n_max) throw ConfigError("Fock occupation outside the truncated space");
      local(ms.fock) = 1.0;
    }
    CVector next(state.size() * n_max);
    for (Index i = 0; i < state.size(); ++i) next.segment(i * n_max, n_max) = state(i) * local;
    state = next;
  }
  for (int j = 0; j < hilbert.n_spins; ++j) {
    const char s = config.initial_spins.empty() ? 'g' : config.initial_spins[static_cast<std::size_t>(j)];
    CVector next = CVector::Zero(state.size() * 2);
    for (Index i = 0; i < state.size(); ++i) next(2 * i + (s == 'e' ? 0 : 1)) = state(i);
    state = next;
  }
  return state / state.norm();
}

Table cmd_evolve(const ExperimentConfig& config) {
  const ModelSpec model = build_model(config);
  const HilbertConfig& c = model.config;
  const CVector psi0 = initial_state(config, c);
  std::vector<ResonantPair> pairs;
  for (const ResonantPair& p : config.resonant_pairs) pairs.push_back({p.drive - 1, p.mode - 1});

  std::optional<Propagator> propagator;
  try {
    propagator.emplace(model, config.method, pairs);
  } catch (const NoDriveError& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  Table t;
  t.title = "ionjc evolve";
  t.notes.push_back(std::string("method=") + method_name(config.method) + " n_max=" + std::to_string(c.n_max) +
                    " guard=" + std::to_string(c.guard));
  t.columns = {"t"};
  for (int j = 0; j < c.n_spins; ++j)
    t.columns.push_back(index_label("excited_ion", model.drives[static_cast<std::size_t>(j)].ion + 1));
  for (int p = 0; p < c.n_modes; ++p) t.columns.push_back(index_label("nbar_mode", p + 1));
  t.columns.push_back("overlap");
  t.columns.push_back("norm");

  const double time_scale = config.units == Units::nu1 ? 1.0 : config.nu1;
  std::vector<double> excited, nbar;
  for (double time : config.times) {
    const double tt = time * time_scale;
    const CVector psi = (*propagator)(tt, 0.0) * psi0;
    observables(c, psi, excited, nbar);
    std::vector<Cell> row{tt};
    for (double v : excited) row.emplace_back(v);
    for (double v : nbar) row.emplace_back(v);
    row.emplace_back(std::norm(psi0.dot(psi)));
    row.emplace_back(psi.norm());
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table run_experiment(const ExperimentConfig& config, int threads) {
  if (config.experiment == "modes") return cmd_modes(config);
  if (config.experiment == "resonance") return cmd_resonance(config);
  if (config.experiment == "sweep-rabi") return cmd_sweep_rabi(config, threads);
  if (config.experiment == "evolve") return cmd_evolve(config);
  throw ConfigError("unknown experiment \"" + config.experiment + "\"");
}

}  // namespace ionjc
