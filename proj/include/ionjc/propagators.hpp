#pragma once

// Evolution operators U(H; t, t0) in the laboratory frame, built from the
// rotating-frame Hamiltonian, and their approximations.

#include "ionjc/fock.hpp"
#include "ionjc/hamiltonians.hpp"

#include <memory>
#include <string_view>
#include <optional>
#include <vector>

namespace ionjc {

// rwa_jc is the interaction-picture closed form U(JC; t, t0) on its own, without
// the frame changes back to the laboratory frame.
enum class Method { exact, pipeline_exact, pipeline_rwa, standard_rwa, rwa_jc };
enum class PipelineMode { exact, rwa };

const char* method_name(Method method);
/// Parses "exact", "pipeline_exact", "pipeline_rwa", "standard_rwa", "rwa_jc".
std::optional<Method> parse_method(std::string_view name);

/// Throws std::invalid_argument when two pairs share a drive or a mode, or a pair is out of range.
void check_resonant_pairs(const ModelSpec& model, std::span<const ResonantPair> pairs);

/// exp(g tau (a_k sigma_+^j - a_k^dagger sigma_-^j)) from functions of the number operators:
/// [[cos(g tau sqrt(a a^dagger)), sin(g tau sqrt(a a^dagger))/sqrt(a a^dagger) a],
///  [-a^dagger sin(g tau sqrt(a a^dagger))/sqrt(a a^dagger), cos(g tau sqrt(a^dagger a))]].
/// a a^dagger is the truncated product, so the result is the exact exponential on the truncated space.
OperatorMatrix jc_block_propagator(const HilbertConfig& config, int spin, int mode, double coupling, double tau);

/// R_t^dagger exp(-i (t - t0) H_tilde) R_t0
OperatorMatrix exact_propagator(const ModelSpec& model, double t, double t0);

/// exp(-i C tau) R_t^dagger T^dagger X T R_t0 with X = exp(-i tau H_breve) (exact) or
/// V_t^dagger U(JC; t, t0) V_t0 (rwa). `pairs` is required for rwa; an empty list means
/// no slowly rotating terms survive and U(JC) = I.
OperatorMatrix pipeline_propagator(const ModelSpec& model, double t, double t0, PipelineMode mode,
                                   std::optional<std::vector<ResonantPair>> pairs = std::nullopt);

/// Interaction-picture U(JC; t, t0) for one resonant (drive j, mode k) pair, coupling eta_breve_jk nu_k / Delta_j.
OperatorMatrix rwa_jc_propagator(const ModelSpec& model, int drive, int mode, double t, double t0);
/// Tensor product over non-overlapping resonant pairs.
OperatorMatrix rwa_jc_propagator(const ModelSpec& model, std::span<const ResonantPair> pairs, double t, double t0);

/// Interaction-picture standard red-sideband propagator, coupling eta_jk Omega_j.
OperatorMatrix standard_rwa_interaction(const ModelSpec& model, std::span<const ResonantPair> pairs, double t, double t0);
/// Standard-RWA propagator mapped back to the laboratory frame:
/// R_t^dagger exp(-i H_ref t) U_int exp(i H_ref t0) R_t0, H_ref = sum nu_p n_p + sum delta_j / 2 sigma_z^j.
OperatorMatrix standard_rwa_propagator(const ModelSpec& model, int drive, int mode, double t, double t0);
OperatorMatrix standard_rwa_propagator(const ModelSpec& model, std::span<const ResonantPair> pairs, double t, double t0);

/// Laser switched on at time 0 with t0 < 0: U(H; t, 0) exp(i H0 t0), H0 the free Hamiltonian.
OperatorMatrix turn_on_propagator(const ModelSpec& model, double t, double t0);

/// 1 - |tr(P U^dagger V P)| / tr(P); throws std::invalid_argument on mismatched configs.
double propagator_infidelity(const OperatorMatrix& u, const OperatorMatrix& v);

/// Reusable propagator for one model and method. Caches the eigendecompositions,
/// so repeated calls for a time series cost one matrix product chain each.
class Propagator {
 public:
  Propagator(ModelSpec model, Method method, std::vector<ResonantPair> pairs = {});
  ~Propagator();
  Propagator(Propagator&&) noexcept;
  Propagator& operator=(Propagator&&) noexcept;

  /// U(t, t0); throws std::invalid_argument if t < t0.
  OperatorMatrix operator()(double t, double t0 = 0.0) const;

  const ModelSpec& model() const { return model_; }
  Method method() const { return method_; }

 private:
  struct Cache;
  ModelSpec model_;
  Method method_;
  std::vector<ResonantPair> pairs_;
  std::unique_ptr<Cache> cache_;
};

}  // namespace ionjc
