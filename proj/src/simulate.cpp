#include "synckit/simulate.hpp"

#include "synckit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace synckit {

namespace {

void validate_spec(const ArraySpec& spec) {
  const int n = spec.state_dim();
  if (spec.a.rows() != spec.a.cols() || n < 1) {
    throw ValidationError("array spec: A must be square");
  }
  if (spec.coupling.rows() != n || spec.coupling.cols() != n) {
    throw ValidationError("array spec: coupling matrix must match A in size");
  }
  if (spec.x0.size() != static_cast<Eigen::Index>(spec.nodes()) * n) {
    throw ValidationError("array spec: x0 has length " +
                          std::to_string(spec.x0.size()) + ", expected " +
                          std::to_string(spec.nodes() * n));
  }
  if (!spec.a.allFinite() || !spec.coupling.allFinite() || !spec.x0.allFinite()) {
    throw ValidationError("array spec: inputs must be finite");
  }
}

double max_pairwise_gap(const Eigen::Ref<const Vec>& stacked, int p, int n) {
  double worst = 0.0;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      worst = std::max(worst,
                       (stacked.segment(i * n, n) - stacked.segment(j * n, n)).norm());
    }
  }
  return worst;
}

Vec rk4_step(const Mat& m, const Vec& x, double h) {
  const Vec k1 = m * x;
  const Vec k2 = m * (x + 0.5 * h * k1);
  const Vec k3 = m * (x + 0.5 * h * k2);
  const Vec k4 = m * (x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Substep size targeting a total RK4 error near `err_target` relative to the
// trajectory scale. The live-mode bound controls the defect accumulated over
// the whole horizon; the radius bound keeps the per-step error of
// fast-decaying modes below the target (h |lambda| <= 0.2 puts the one-step
// defect near 3e-6).
double rk4_substep(double t_end, double radius, double live_rate,
                   double err_target) {
  const double w = live_rate + 0.05;
  const double accuracy =
      std::pow(30.0 * err_target / (std::max(t_end, 1e-9) * std::pow(w, 5)), 0.25);
  return 0.8 * std::min(accuracy, 0.25 / (radius + 0.05));
}

}  // namespace

double default_t_end(const Interconnection& g) {
  if (g.is_connected() && g.node_count() > 1) {
    const GammaSpectrum sp = spectrum(g);
    if (sp.zero_simple()) {
      const double rate = std::abs(sp.lambda2_re());
      if (rate > 0.0) return 20.0 / rate;
    }
  }
  return 20.0;
}

Mat build_closed_loop(const ArraySpec& spec) {
  validate_spec(spec);
  const int p = spec.nodes();
  return kron(Mat::Identity(p, p), spec.a) + kron(spec.graph.gamma(), spec.coupling);
}

Mat predicted_sync_trajectory(const Mat& a, const Vec& r, const Vec& x0,
                              const Vec& times) {
  const int n = static_cast<int>(a.rows());
  if (a.rows() != a.cols() || n < 1) {
    throw DimensionError("predicted_sync_trajectory: A must be square");
  }
  const int p = static_cast<int>(r.size());
  if (x0.size() != static_cast<Eigen::Index>(p) * n) {
    throw DimensionError("predicted_sync_trajectory: x0 length must be p*n");
  }
  // (r^T (x) e^{At}) x0 = e^{At} (sum_i r_i x0_i)
  Vec v0 = Vec::Zero(n);
  for (int i = 0; i < p; ++i) v0 += r[i] * x0.segment(i * n, n);

  Mat out(times.size(), n);
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    out.row(k) = (expm(a, times[k]) * v0).transpose();
  }
  return out;
}

ArrayTrajectory simulate_array(const ArraySpec& spec, double t_end, int steps,
                               double int_tol) {
  validate_spec(spec);
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw ValidationError("simulate_array: t_end must be positive");
  }
  if (steps < 2) {
    throw ValidationError("simulate_array: need at least 2 steps");
  }
  if (!(int_tol > 0.0)) {
    throw ValidationError("simulate_array: int_tol must be positive");
  }

  const int p = spec.nodes();
  const int n = spec.state_dim();
  const int dim = p * n;
  const Mat closed = build_closed_loop(spec);
  const double dt = t_end / steps;

  ArrayTrajectory traj;
  traj.state_dim = n;
  traj.nodes = p;
  traj.times = Vec::LinSpaced(steps + 1, 0.0, t_end);
  traj.states.resize(steps + 1, dim);
  traj.sync_error.resize(steps + 1);

  const Mat stepper = expm(closed, dt);
  Vec x = spec.x0;
  traj.states.row(0) = x.transpose();
  traj.sync_error[0] = max_pairwise_gap(x, p, n);
  for (int k = 1; k <= steps; ++k) {
    x = stepper * x;
    if (!x.allFinite()) {
      throw NumericalError("simulate_array: state overflow at t = " +
                           std::to_string(traj.times[k]));
    }
    traj.states.row(k) = x.transpose();
    traj.sync_error[k] = max_pairwise_gap(x, p, n);
  }

  // RK4 consistency pass over the same grid. Per-step defects accumulate
  // over the horizon for every mode that does not decay away, so the
  // T-scaled accuracy bound covers the live modes (growing, sustained, or
  // slower than e^{-10} over the run); fast-decaying modes only need the
  // per-step radius bound.
  const Spectrum closed_spectrum = eig(closed);
  const double radius = closed_spectrum.eigenvalues.cwiseAbs().maxCoeff();
  double live_rate = 0.0;
  for (int i = 0; i < closed_spectrum.size(); ++i) {
    const Complex ev = closed_spectrum.eigenvalues[i];
    if (ev.real() >= -10.0 / t_end) {
      live_rate = std::max(live_rate, std::abs(ev));
    }
  }
  const double h = rk4_substep(t_end, radius, live_rate, 0.3 * int_tol);
  const long total_sub =
      std::clamp<long>(static_cast<long>(std::ceil(t_end / h)), steps, 4000000L);
  const int sub = std::max(1, static_cast<int>((total_sub + steps - 1) / steps));
  Vec y = spec.x0;
  double worst_gap = 0.0;
  double scale = spec.x0.norm();
  for (int k = 1; k <= steps; ++k) {
    for (int s = 0; s < sub; ++s) y = rk4_step(closed, y, dt / sub);
    worst_gap = std::max(worst_gap, (y - traj.states.row(k).transpose()).norm());
    scale = std::max(scale, traj.states.row(k).norm());
  }
  if (worst_gap > 10.0 * int_tol * std::max(scale, 1e-300)) {
    throw NumericalError(
        "simulate_array: matrix-exponential and RK4 trajectories disagree by " +
        std::to_string(worst_gap / scale) + " (relative)");
  }

  // predicted limit trajectory when the graph supports one
  if (p > 1) {
    const GammaSpectrum gs = spectrum(spec.graph);
    if (gs.zero_simple()) {
      traj.predicted =
          predicted_sync_trajectory(spec.a, gs.left_vector(), spec.x0, traj.times);
      Vec tracking(steps + 1);
      for (int k = 0; k <= steps; ++k) {
        double worst = 0.0;
        for (int i = 0; i < p; ++i) {
          worst = std::max(
              worst, (traj.states.row(k).segment(i * n, n) - traj.predicted->row(k))
                         .norm());
        }
        tracking[k] = worst;
      }
      traj.tracking_error = std::move(tracking);
    }
  }
  return traj;
}

SyncSummary sync_metrics(const ArrayTrajectory& traj, double decay_tol) {
  if (traj.sync_error.size() < 2) {
    throw ValidationError("sync_metrics: trajectory too short");
  }
  SyncSummary out;
  out.decay_tol = decay_tol;
  out.initial_sync = traj.sync_error[0];
  out.final_sync = traj.sync_error[traj.sync_error.size() - 1];
  out.decayed = out.final_sync <= decay_tol * out.initial_sync;
  if (traj.tracking_error) {
    out.final_tracking = (*traj.tracking_error)[traj.tracking_error->size() - 1];
  }

  // log-linear fit of the pairwise gap over the last half of the grid
  const Eigen::Index count = traj.sync_error.size();
  const Eigen::Index start = count / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  Eigen::Index m = 0;
  bool fit_ok = true;
  for (Eigen::Index k = start; k < count; ++k) {
    if (!(traj.sync_error[k] > 0.0)) {
      fit_ok = false;
      break;
    }
    const double xv = traj.times[k];
    const double yv = std::log(traj.sync_error[k]);
    sx += xv; sy += yv; sxx += xv * xv; sxy += xv * yv;
    ++m;
  }
  if (fit_ok && m >= 3) {
    const double denom = m * sxx - sx * sx;
    if (denom > 0.0) out.rate = (m * sxy - sx * sy) / denom;
  }
  return out;
}

}  // namespace synckit
