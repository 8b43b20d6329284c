#include "ionjc/propagators.hpp"

#include "ionjc/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ionjc {

namespace {

OperatorMatrix diagonal_phase(const HilbertConfig& c, const CVector& energies, double t) {
  CVector d(energies.size());
  for (Index i = 0; i < energies.size(); ++i) d(i) = std::exp(-kI * energies(i) * t);
  return {c, d.asDiagonal().toDenseMatrix(), OperatorKind::unitary};
}

// Diagonal of sum nu_p n_p + sum_j delta_j / 2 sigma_z^j.
CVector reference_energies(const ModelSpec& model) {
  const HilbertConfig& c = model.config;
  CVector e(c.dimension());
  for (Index i = 0; i < c.dimension(); ++i) {
    const auto occ = c.occupations(i);
    double v = 0.0;
    for (int p = 0; p < c.n_modes; ++p) v += model.nu[static_cast<std::size_t>(p)] * occ[static_cast<std::size_t>(p)];
    for (int j = 0; j < c.n_spins; ++j) v += 0.5 * model.detuning(j) * (c.spin_state(i, j) == 0 ? 1.0 : -1.0);
    e(i) = v;
  }
  return e;
}

void check_times(double t, double t0) {
  if (!std::isfinite(t) || !std::isfinite(t0)) throw std::invalid_argument("propagator: times must be finite");
  if (t < t0) throw std::invalid_argument("propagator: need t >= t0");
}

OperatorMatrix unitary(OperatorMatrix m) { return m.with_kind(OperatorKind::unitary); }

}  // namespace

const char* method_name(Method method) {
  switch (method) {
    case Method::exact: return "exact";
    case Method::pipeline_exact: return "pipeline_exact";
    case Method::pipeline_rwa: return "pipeline_rwa";
    case Method::standard_rwa: return "standard_rwa";
    case Method::rwa_jc: return "rwa_jc";
  }
  return "exact";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::exact, Method::pipeline_exact, Method::pipeline_rwa, Method::standard_rwa, Method::rwa_jc})
    if (name == method_name(m)) return m;
  return std::nullopt;
}

void check_resonant_pairs(const ModelSpec& model, std::span<const ResonantPair> pairs) {
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    const ResonantPair& p = pairs[a];
    if (p.drive < 0 || p.drive >= model.drive_count() || p.mode < 0 || p.mode >= model.config.n_modes)
      throw std::invalid_argument("resonant pair (" + std::to_string(p.drive + 1) + ", " + std::to_string(p.mode + 1) +
                                  ") out of range");
    for (std::size_t b = 0; b < a; ++b) {
      if (pairs[b].drive == p.drive)
        throw std::invalid_argument("overlapping resonances: drive " + std::to_string(p.drive + 1) + " used twice");
      if (pairs[b].mode == p.mode)
        throw std::invalid_argument("overlapping resonances: mode " + std::to_string(p.mode + 1) +
                                    " is resonant with two drives");
    }
  }
}

OperatorMatrix jc_block_propagator(const HilbertConfig& config, int spin, int mode, double coupling, double tau) {
  const CMatrix a = mode_ladder(config, mode, Ladder::annihilate);
  const CMatrix ad = a.adjoint();
  const CMatrix upper = a * ad;  // diagonal, top level 0
  const CMatrix lower = ad * a;  // diagonal
  const Index n = a.rows();
  const double s = coupling * tau;
  CVector cos_up(n), cos_low(n), sinc_up(n);
  for (Index i = 0; i < n; ++i) {
    const double r_up = std::sqrt(std::max(0.0, upper(i, i).real()));
    const double r_low = std::sqrt(std::max(0.0, lower(i, i).real()));
    cos_up(i) = std::cos(s * r_up);
    cos_low(i) = std::cos(s * r_low);
    sinc_up(i) = r_up == 0.0 ? s : std::sin(s * r_up) / r_up;
  }
  const CMatrix ee = cos_up.asDiagonal().toDenseMatrix();
  const CMatrix gg = cos_low.asDiagonal().toDenseMatrix();
  const CMatrix eg = sinc_up.asDiagonal() * a;
  const CMatrix ge = -ad * sinc_up.asDiagonal();
  return spin_blocks(config, spin, ee, eg, ge, gg, OperatorKind::unitary);
}

OperatorMatrix exact_propagator(const ModelSpec& model, double t, double t0) {
  return Propagator(model, Method::exact)(t, t0);
}

OperatorMatrix pipeline_propagator(const ModelSpec& model, double t, double t0, PipelineMode mode,
                                   std::optional<std::vector<ResonantPair>> pairs) {
  if (mode == PipelineMode::exact) return Propagator(model, Method::pipeline_exact)(t, t0);
  if (!pairs) throw std::invalid_argument("pipeline_propagator: RWA mode needs resonant pairs");
  return Propagator(model, Method::pipeline_rwa, *pairs)(t, t0);
}

OperatorMatrix rwa_jc_propagator(const ModelSpec& model, int drive, int mode, double t, double t0) {
  const ResonantPair pair{drive, mode};
  return rwa_jc_propagator(model, std::span(&pair, 1), t, t0);
}

OperatorMatrix rwa_jc_propagator(const ModelSpec& model, std::span<const ResonantPair> pairs, double t, double t0) {
  check_times(t, t0);
  check_resonant_pairs(model, pairs);
  const auto params = model.balanced();
  OperatorMatrix u = OperatorMatrix::identity(model.config);
  for (const ResonantPair& p : pairs) {
    const BalancedParams& b = params[static_cast<std::size_t>(p.drive)];
    const double g = b.coupling[static_cast<std::size_t>(p.mode)] * model.nu[static_cast<std::size_t>(p.mode)];
    u = jc_block_propagator(model.config, p.drive, p.mode, g, t - t0) * u;
  }
  return unitary(u);
}

OperatorMatrix standard_rwa_interaction(const ModelSpec& model, std::span<const ResonantPair> pairs, double t, double t0) {
  check_times(t, t0);
  model.validate();
  check_resonant_pairs(model, pairs);
  OperatorMatrix u = OperatorMatrix::identity(model.config);
  for (const ResonantPair& p : pairs) {
    const double g = model.eta(p.drive, p.mode) * model.drives[static_cast<std::size_t>(p.drive)].rabi;
    u = jc_block_propagator(model.config, p.drive, p.mode, g, t - t0) * u;
  }
  return unitary(u);
}

OperatorMatrix standard_rwa_propagator(const ModelSpec& model, int drive, int mode, double t, double t0) {
  const ResonantPair pair{drive, mode};
  return standard_rwa_propagator(model, std::span(&pair, 1), t, t0);
}

OperatorMatrix standard_rwa_propagator(const ModelSpec& model, std::span<const ResonantPair> pairs, double t, double t0) {
  return Propagator(model, Method::standard_rwa, {pairs.begin(), pairs.end()})(t, t0);
}

OperatorMatrix turn_on_propagator(const ModelSpec& model, double t, double t0) {
  if (!(t0 < 0.0)) throw std::invalid_argument("turn_on_propagator: need t0 < 0, use exact_propagator otherwise");
  if (t < 0.0) throw std::invalid_argument("turn_on_propagator: need t >= 0");
  const OperatorMatrix h0 = free_hamiltonian(model);
  CVector energies = h0.matrix().diagonal();
  // exp(i H0 t0) = exp(-i H0 (0 - t0)); H0 is diagonal
  return unitary(exact_propagator(model, t, 0.0) * diagonal_phase(model.config, energies, -t0));
}

double propagator_infidelity(const OperatorMatrix& u, const OperatorMatrix& v) {
  if (!(u.config() == v.config())) throw std::invalid_argument("propagator_infidelity: configurations differ");
  return guarded_infidelity(u, v);
}

struct Propagator::Cache {
  std::optional<HermitianEvolver> evolver;  // H_tilde (exact) or H_breve (pipeline_exact)
  std::optional<OperatorMatrix> transform;  // T_Delta
  std::vector<BalancedParams> params;
  CVector reference;                        // diagonal reference energies (standard_rwa)
  double offset = 0.0;
};

Propagator::Propagator(ModelSpec model, Method method, std::vector<ResonantPair> pairs)
    : model_(std::move(model)), method_(method), pairs_(std::move(pairs)), cache_(std::make_unique<Cache>()) {
  model_.validate();
  switch (method_) {
    case Method::exact:
      cache_->evolver.emplace(h_tilde(model_).matrix.matrix());
      break;
    case Method::pipeline_exact: {
      const BreveHamiltonian hb = breve_h(model_);
      cache_->evolver.emplace(hb.matrix().matrix());
      cache_->params = hb.params;
      cache_->offset = hb.diagonal.offset;
      cache_->transform = build_tdelta(model_.config, cache_->params);
      break;
    }
    case Method::pipeline_rwa: {
      check_resonant_pairs(model_, pairs_);
      cache_->params = model_.balanced();
      const BreveHamiltonian hb = breve_h(model_);
      cache_->offset = hb.diagonal.offset;
      cache_->transform = build_tdelta(model_.config, cache_->params);
      break;
    }
    case Method::standard_rwa:
      check_resonant_pairs(model_, pairs_);
      cache_->reference = reference_energies(model_);
      break;
    case Method::rwa_jc:
      check_resonant_pairs(model_, pairs_);
      model_.balanced();
      break;
  }
}

Propagator::~Propagator() = default;
Propagator::Propagator(Propagator&&) noexcept = default;
Propagator& Propagator::operator=(Propagator&&) noexcept = default;

OperatorMatrix Propagator::operator()(double t, double t0) const {
  check_times(t, t0);
  const HilbertConfig& c = model_.config;
  const double tau = t - t0;
  if (method_ == Method::rwa_jc) return rwa_jc_propagator(model_, pairs_, t, t0);
  const OperatorMatrix frame_t = rotation_frame(c, model_.drives, t);
  const OperatorMatrix frame_t0 = rotation_frame(c, model_.drives, t0);

  OperatorMatrix inner = OperatorMatrix::identity(c);
  switch (method_) {
    case Method::exact:
      inner = OperatorMatrix(c, cache_->evolver->evolve(tau), OperatorKind::unitary);
      return unitary(frame_t.adjoint() * inner * frame_t0);
    case Method::pipeline_exact:
      inner = OperatorMatrix(c, cache_->evolver->evolve(tau), OperatorKind::unitary);
      break;
    case Method::pipeline_rwa: {
      const OperatorMatrix v_t = breve_frame(model_, cache_->params, t);
      const OperatorMatrix v_t0 = breve_frame(model_, cache_->params, t0);
      inner = v_t.adjoint() * rwa_jc_propagator(model_, pairs_, t, t0) * v_t0;
      break;
    }
    case Method::standard_rwa: {
      const OperatorMatrix u_int = standard_rwa_interaction(model_, pairs_, t, t0);
      const OperatorMatrix ref_t = diagonal_phase(c, cache_->reference, t);
      const OperatorMatrix ref_t0 = diagonal_phase(c, cache_->reference, -t0);
      return unitary(frame_t.adjoint() * ref_t * u_int * ref_t0 * frame_t0);
    }
    case Method::rwa_jc:
      break;
  }
  const OperatorMatrix& tr = *cache_->transform;
  const Complex phase = std::exp(-kI * cache_->offset * tau);
  return unitary(phase * (frame_t.adjoint() * tr.adjoint() * inner * tr * frame_t0));
}

}  // namespace ionjc
