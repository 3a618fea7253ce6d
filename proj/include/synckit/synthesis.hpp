#pragma once

#include "synckit/linops.hpp"
#include "synckit/sysclass.hpp"

#include <optional>
#include <string>

namespace synckit {

/// Which construction produced a gain, and the interconnection family it is
/// guaranteed to synchronize over.
enum class GainBranch { hurwitz_zero, algorithm1, fullstate_pinv, riccati_delta };
enum class GuaranteeSet { all, connected, min_coupling };  // G>=0, G>0, G>=delta

std::string to_string(GainBranch branch);
std::string to_string(GuaranteeSet set);

/// Cesaro-average Gram matrix of e^{F t} for an F whose spectrum lies on the
/// imaginary axis: the limit of t^{-1} \int_0^t e^{F^T s} e^{F s} ds.
struct NeutralGram {
  Mat gram;            // P, symmetric positive definite
  double horizon = 0;  // quadrature horizon at which the estimate settled
  double residual = 0; // ||P F + F^T P||_F
};

/// Evaluates the Gram limit by windowed Gauss-Legendre quadrature at doubling
/// horizons (cap 1e5). Raises PreconditionError for off-axis eigenvalues and
/// ConvergenceError if successive estimates never agree to gram_tol/2.
NeutralGram neutral_gram(const Mat& f, double gram_tol, double eig_tol);

struct SynthDiagnostics {
  int center_dim = -1;        // n1 from the split (algorithm1 branch)
  double gram_residual = 0;   // ||P F + F^T P|| (algorithm1 branch)
  double gram_horizon = 0;
  double care_residual = 0;   // Riccati residual (riccati branch)
  Mat gram;                   // P used by the branch, when one exists
};

struct FeedbackGain {
  Mat L;
  GainBranch branch = GainBranch::hurwitz_zero;
  GuaranteeSet guarantee = GuaranteeSet::all;
  std::optional<double> delta;
  SynthDiagnostics diagnostics;
};

struct SynthOptions {
  double eig_tol = 0.0;   // 0: use default_eig_tol(A)
  double gram_tol = 1e-8;
  double care_tol = 1e-8;
};

/// L = 0 for Hurwitz dynamics; synchronizes over every interconnection.
FeedbackGain synth_hurwitz(const SystemPair& pair, const SynthOptions& opt = {});

/// Gain for neutrally stable detectable pairs, valid over all connected
/// interconnections: split off the axis part F, form its Gram limit P, and
/// take L = U P^{-1} (C U)^T (L = 0 when there is no axis part).
FeedbackGain synth_algorithm1(const SystemPair& pair, const SynthOptions& opt = {});

/// L = (C^T C)^{-1} C^T for full-column-rank C (so L C = I), valid over all
/// connected interconnections when A has no unstable eigenvalue.
FeedbackGain synth_fullstate(const SystemPair& pair, const SynthOptions& opt = {});

/// L = max(1, 1/delta) P C^T with P the Riccati solution; valid over
/// connected interconnections with coupling rate at least delta.
FeedbackGain synth_riccati(const SystemPair& pair, double delta,
                           const SynthOptions& opt = {});

/// Dispatches to the branch with the widest guarantee the pair admits.
/// Raises NoGuaranteeError when no branch applies.
FeedbackGain synth_auto(const SystemPair& pair,
                        std::optional<double> delta = std::nullopt,
                        const SynthOptions& opt = {});

/// Input-coupled dual: K = L^T where L is synthesized for (B^T, A^T).
/// Intended for arrays dx_i = A x_i + B u_i with state coupling.
struct DualGain {
  Mat K;
  GainBranch branch;
  GuaranteeSet guarantee;
  std::optional<double> delta;
};

DualGain dualize(const Mat& a, const Mat& b,
                 std::optional<double> delta = std::nullopt,
                 const SynthOptions& opt = {});

}  // namespace synckit
