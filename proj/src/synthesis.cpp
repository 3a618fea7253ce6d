#include "synckit/synthesis.hpp"

#include "synckit/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace synckit {

namespace {

// 12-point Gauss-Legendre nodes/weights on [0, 1].
constexpr int kGlPoints = 12;
constexpr std::array<double, kGlPoints> kGlNode = {
    0.009219682876640378, 0.047941371814762571, 0.115048662902847656,
    0.206341022856691276, 0.316084250500909903, 0.437383295744265542,
    0.562616704255734458, 0.683915749499090097, 0.793658977143308724,
    0.884951337097152344, 0.952058628185237429, 0.990780317123359622};
constexpr std::array<double, kGlPoints> kGlWeight = {
    0.023587668193255914, 0.053469662997659215, 0.080039164271673113,
    0.101583713361532961, 0.116746268269177404, 0.124573522906701393,
    0.124573522906701393, 0.116746268269177404, 0.101583713361532961,
    0.080039164271673113, 0.053469662997659215, 0.023587668193255914};

// sin^4 taper: kills the oscillatory part of the Cesaro integrand like
// (omega T)^{-5} while passing the constant part through the normalization.
double taper(double s) {
  const double u = std::sin(std::numbers::pi * s);
  return u * u * u * u;
}

// Windowed average of e^{F^T s} e^{F s} over [0, T] by composite
// Gauss-Legendre panels. The propagator advances panel by panel and is
// re-anchored periodically to stop roundoff accumulation.
Mat windowed_gram_average(const Mat& f, double horizon, double panel_width) {
  const int n = static_cast<int>(f.rows());
  const long panels =
      std::max<long>(8, static_cast<long>(std::ceil(horizon / panel_width)));
  const double w = horizon / static_cast<double>(panels);

  std::array<Mat, kGlPoints> node_step;
  for (int k = 0; k < kGlPoints; ++k) node_step[k] = expm(f, w * kGlNode[k]);
  const Mat panel_step = expm(f, w);

  Mat acc = Mat::Zero(n, n);
  double weight_acc = 0.0;
  Mat prop = Mat::Identity(n, n);
  for (long j = 0; j < panels; ++j) {
    if (j > 0 && j % 512 == 0) prop = expm(f, w * static_cast<double>(j));
    const double t0 = w * static_cast<double>(j);
    for (int k = 0; k < kGlPoints; ++k) {
      const Mat e = prop * node_step[k];
      const double wt =
          kGlWeight[k] * w * taper((t0 + w * kGlNode[k]) / horizon);
      acc.noalias() += wt * (e.transpose() * e);
      weight_acc += wt;
    }
    prop = (prop * panel_step).eval();
  }
  return acc / weight_acc;
}

FeedbackGain make_gain(Mat l, GainBranch branch, GuaranteeSet guarantee) {
  FeedbackGain g;
  g.L = std::move(l);
  g.branch = branch;
  g.guarantee = guarantee;
  return g;
}

double resolve_eig_tol(const SynthOptions& opt, const Mat& a) {
  return opt.eig_tol > 0.0 ? opt.eig_tol : default_eig_tol(a);
}

}  // namespace

std::string to_string(GainBranch branch) {
  switch (branch) {
    case GainBranch::hurwitz_zero: return "hurwitz_zero";
    case GainBranch::algorithm1: return "algorithm1";
    case GainBranch::fullstate_pinv: return "fullstate_pinv";
    case GainBranch::riccati_delta: return "riccati_delta";
  }
  return "unknown";
}

std::string to_string(GuaranteeSet set) {
  switch (set) {
    case GuaranteeSet::all: return "G>=0";
    case GuaranteeSet::connected: return "G>0";
    case GuaranteeSet::min_coupling: return "G>=delta";
  }
  return "unknown";
}

NeutralGram neutral_gram(const Mat& f, double gram_tol, double eig_tol) {
  if (f.rows() != f.cols()) {
    throw DimensionError("neutral_gram: matrix must be square");
  }
  if (gram_tol <= 0.0) {
    throw ValidationError("neutral_gram: gram_tol must be positive");
  }
  const int n = static_cast<int>(f.rows());
  if (n == 0) return {Mat(0, 0), 0.0, 0.0};

  const Spectrum sp = eig(f);
  double omega_max = 0.0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(sp.eigenvalues[i].real()) > eig_tol) {
      throw PreconditionError(
          "neutral_gram: eigenvalue off the imaginary axis, Re = " +
          std::to_string(sp.eigenvalues[i].real()));
    }
    omega_max = std::max(omega_max, std::abs(sp.eigenvalues[i].imag()));
  }

  const double panel_width = 1.0 / (1.0 + omega_max);
  const double horizon_cap = 1e5;
  double horizon = 64.0;
  Mat prev = windowed_gram_average(f, horizon, panel_width);
  Mat gram;
  bool converged = false;
  while (2.0 * horizon <= horizon_cap) {
    horizon *= 2.0;
    Mat cur = windowed_gram_average(f, horizon, panel_width);
    if ((cur - prev).norm() <= 0.5 * gram_tol) {
      gram = cur;
      converged = true;
      break;
    }
    prev = std::move(cur);
  }
  if (!converged) {
    throw ConvergenceError(
        "neutral_gram: estimates still moving at the horizon cap " +
        std::to_string(horizon_cap));
  }

  gram = 0.5 * (gram + gram.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw ConvergenceError("neutral_gram: estimate is not positive definite");
  }
  const double residual = (gram * f + f.transpose() * gram).norm();
  if (residual > gram_tol * std::max(1.0, gram.norm())) {
    throw ConvergenceError("neutral_gram: commutation residual " +
                           std::to_string(residual) + " exceeds tolerance");
  }
  return {std::move(gram), horizon, residual};
}

FeedbackGain synth_hurwitz(const SystemPair& pair, const SynthOptions& opt) {
  const double tol = resolve_eig_tol(opt, pair.A);
  if (!is_hurwitz(pair.A, tol)) {
    throw PreconditionError("synth_hurwitz: A is not Hurwitz");
  }
  return make_gain(Mat::Zero(pair.state_dim(), pair.output_dim()),
                   GainBranch::hurwitz_zero, GuaranteeSet::all);
}

FeedbackGain synth_algorithm1(const SystemPair& pair, const SynthOptions& opt) {
  const double tol = resolve_eig_tol(opt, pair.A);
  if (!is_neutrally_stable(pair.A, tol)) {
    throw PreconditionError("synth_algorithm1: A is not neutrally stable");
  }
  if (!is_detectable(pair, tol)) {
    throw PreconditionError("synth_algorithm1: pair is not detectable");
  }

  const CenterStableSplit split = split_center_stable(pair.A, tol);
  FeedbackGain gain = make_gain(Mat::Zero(pair.state_dim(), pair.output_dim()),
                                GainBranch::algorithm1, GuaranteeSet::connected);
  gain.diagnostics.center_dim = split.center_dim();
  if (split.center_dim() == 0) {
    return gain;  // no axis part: zero gain already synchronizes
  }

  const NeutralGram ng = neutral_gram(split.center_block, opt.gram_tol, tol);
  const Mat cu = pair.C * split.center_basis;  // m x n1
  // L = U P^{-1} (C U)^T via an SPD solve
  Eigen::LDLT<Mat> ldlt(ng.gram);
  if (ldlt.info() != Eigen::Success) {
    throw NumericalError("synth_algorithm1: Gram matrix solve failed");
  }
  gain.L = split.center_basis * ldlt.solve(cu.transpose());
  gain.diagnostics.gram_residual = ng.residual;
  gain.diagnostics.gram_horizon = ng.horizon;
  gain.diagnostics.gram = ng.gram;
  return gain;
}

FeedbackGain synth_fullstate(const SystemPair& pair, const SynthOptions& opt) {
  const int n = pair.state_dim();
  if (numerical_rank(pair.C) < n) {
    throw PreconditionError("synth_fullstate: C is not full column rank");
  }
  const double tol = resolve_eig_tol(opt, pair.A);
  if (eig(pair.A).abscissa > tol) {
    throw PreconditionError(
        "synth_fullstate: A has an eigenvalue with positive real part");
  }
  const Mat ctc = pair.C.transpose() * pair.C;
  Eigen::LDLT<Mat> ldlt(ctc);
  if (ldlt.info() != Eigen::Success) {
    throw NumericalError("synth_fullstate: normal equations solve failed");
  }
  return make_gain(ldlt.solve(pair.C.transpose()), GainBranch::fullstate_pinv,
                   GuaranteeSet::connected);
}

FeedbackGain synth_riccati(const SystemPair& pair, double delta,
                           const SynthOptions& opt) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ValidationError("synth_riccati: delta must be positive");
  }
  const Mat p = solve_care(pair.C, pair.A, opt.care_tol);
  FeedbackGain gain =
      make_gain(std::max(1.0, 1.0 / delta) * p * pair.C.transpose(),
                GainBranch::riccati_delta, GuaranteeSet::min_coupling);
  gain.delta = delta;
  gain.diagnostics.care_residual =
      (pair.A * p + p * pair.A.transpose() +
       Mat::Identity(pair.state_dim(), pair.state_dim()) -
       p * pair.C.transpose() * pair.C * p)
          .norm();
  gain.diagnostics.gram = p;
  return gain;
}

FeedbackGain synth_auto(const SystemPair& pair, std::optional<double> delta,
                        const SynthOptions& opt) {
  const double tol = resolve_eig_tol(opt, pair.A);
  const ClassReport report = classify(pair, tol);

  if (report.hurwitz) return synth_hurwitz(pair, opt);
  if (report.neutrally_stable && report.detectable) {
    return synth_algorithm1(pair, opt);
  }
  if (report.no_unstable_modes && report.full_column_rank) {
    return synth_fullstate(pair, opt);
  }
  if (report.detectable && delta.has_value()) {
    return synth_riccati(pair, *delta, opt);
  }

  std::string why;
  if (report.detectable) {
    why = "pair is detectable but not neutrally stable; pass delta for a "
          "minimum-coupling guarantee";
  } else if (report.full_column_rank) {
    why = "C is full column rank but A has unstable eigenvalues";
  } else {
    why = "pair is neither detectable nor full column rank; no gain can "
          "synchronize it over any interconnection family";
  }
  throw NoGuaranteeError("synth_auto: no branch applies (" + why + ")");
}

DualGain dualize(const Mat& a, const Mat& b, std::optional<double> delta,
                 const SynthOptions& opt) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw DimensionError("dualize: A must be square");
  }
  if (b.rows() != a.rows() || b.cols() < 1) {
    throw DimensionError("dualize: B must have as many rows as A");
  }
  const SystemPair transposed(b.transpose(), a.transpose());
  const FeedbackGain l = synth_auto(transposed, delta, opt);
  return {l.L.transpose(), l.branch, l.guarantee, l.delta};
}

}  // namespace synckit
