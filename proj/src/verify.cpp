#include "synckit/verify.hpp"

#include "synckit/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace synckit {

namespace {

// Pulls an initial condition out of the most unstable closed-loop mode so a
// counterexample simulation actually exhibits the divergence it reports.
Vec unstable_mode_state(const Mat& closed) {
  Eigen::EigenSolver<Mat> solver(closed);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("demo: closed-loop eigensolver failed");
  }
  Eigen::Index worst = 0;
  solver.eigenvalues().real().maxCoeff(&worst);
  const CVec v = solver.eigenvectors().col(worst);
  Vec x = v.real();
  if (x.norm() < 1e-8) x = v.imag();
  return x / x.norm();
}

}  // namespace

SpectralVerdict spectral_sync_test(const Mat& a, const Mat& coupling,
                                   const Interconnection& g, double margin) {
  if (a.rows() != a.cols() || coupling.rows() != a.rows() ||
      coupling.cols() != a.cols()) {
    throw DimensionError("spectral_sync_test: A and M must be square and equal");
  }
  if (margin < 0.0) {
    throw ValidationError("spectral_sync_test: margin must be nonnegative");
  }

  const GammaSpectrum gs = spectrum(g);
  const double zero_tol = gs.zero_tol();

  SpectralVerdict verdict;
  verdict.margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < gs.eigenvalues().size(); ++i) {
    const Complex lambda = gs.eigenvalues()[i];
    if (std::abs(lambda) <= zero_tol) continue;
    BlockRecord rec;
    rec.lambda = lambda;
    rec.abscissa = shifted_abscissa(a, lambda, coupling);
    rec.hurwitz = rec.abscissa < -margin;
    verdict.margin = std::min(verdict.margin, std::abs(rec.abscissa));
    verdict.all_hurwitz = verdict.all_hurwitz && rec.hurwitz;
    verdict.blocks.push_back(rec);
  }
  return verdict;
}

std::optional<RingInstability> ring_instability_search(const Mat& c, const Mat& a,
                                                       const Mat& l, int p_max) {
  if (p_max < 2) {
    throw ValidationError("ring_instability_search: p_max must be at least 2");
  }
  if (l.rows() != a.rows() || l.cols() != c.rows() || c.cols() != a.cols()) {
    throw DimensionError("ring_instability_search: incompatible L, C, A shapes");
  }
  const Mat coupling = l * c;
  for (int p = 2; p <= p_max; ++p) {
    const SpectralVerdict verdict =
        spectral_sync_test(a, coupling, Interconnection::ring(p), 0.0);
    for (const auto& rec : verdict.blocks) {
      if (rec.abscissa > 1e-9) {
        return RingInstability{p, rec.lambda, rec.abscissa};
      }
    }
  }
  return std::nullopt;
}

ShiftCheckResult riccati_shift_check(const Mat& c, const Mat& a,
                                     const std::vector<double>& sigmas,
                                     const std::vector<double>& omegas) {
  if (sigmas.empty()) {
    throw ValidationError("riccati_shift_check: need at least one sigma sample");
  }
  for (double s : sigmas) {
    if (s < 1.0) {
      throw PreconditionError("riccati_shift_check: sigma " + std::to_string(s) +
                              " is below 1");
    }
  }
  const Mat p = solve_care(c, a);
  const Mat pct_c = p * c.transpose() * c;

  ShiftCheckResult out;
  out.worst_abscissa = -std::numeric_limits<double>::infinity();
  std::vector<double> omega_list = omegas;
  if (omega_list.empty()) omega_list.push_back(0.0);
  for (double sigma : sigmas) {
    for (double omega : omega_list) {
      const double abscissa =
          shifted_abscissa(a, Complex(-sigma, -omega), pct_c);
      out.worst_abscissa = std::max(out.worst_abscissa, abscissa);
      if (abscissa >= 0.0) out.all_hurwitz = false;
    }
  }
  return out;
}

CounterexampleReport demo_statement(char id, const DemoOptions& opt) {
  switch (id) {
    case 'e': {
      // single integrators over the totally disconnected two-node graph:
      // the coupling never acts and distinct states persist
      SystemPair pair(Mat::Ones(1, 1), Mat::Zero(1, 1));
      Interconnection graph = Interconnection::from_matrix(Mat::Zero(2, 2));
      const Mat gain = Mat::Ones(1, 1);
      Vec x0(2);
      x0 << 1.0, 2.0;
      ArraySpec spec{pair.A, gain * pair.C, graph, x0};
      ArrayTrajectory traj = simulate_array(spec, 20.0, opt.steps);
      SyncSummary summary = sync_metrics(traj);
      SpectralVerdict verdict = spectral_sync_test(pair.A, gain * pair.C, graph);
      return CounterexampleReport{
          .statement = 'e',
          .pair = pair,
          .graph = graph,
          .gain = gain,
          .witness = "pairwise gap stays at its initial value on a "
                     "disconnected interconnection",
          .witness_value = summary.final_sync,
          .ring = std::nullopt,
          .verdict = verdict,
          .trajectory = std::move(traj),
          .summary = summary};
    }
    case 'f': {
      // critically unstable but detectable pair: every gain fails on a long
      // enough directed ring
      Mat c(1, 2);
      c << 1.0, 0.0;
      Mat a(2, 2);
      a << 0.0, 1.0, 0.0, 0.0;
      SystemPair pair(c, a);
      Mat gain(2, 1);
      gain << 2.0, 1.0;
      if (opt.gain) gain = *opt.gain;

      const auto hit = ring_instability_search(c, a, gain, opt.p_max);
      if (!hit) {
        throw NumericalError(
            "demo f: no unstable ring found up to p_max = " +
            std::to_string(opt.p_max));
      }
      Interconnection graph = Interconnection::ring(hit->p);
      const Mat coupling = gain * c;
      ArraySpec spec{a, coupling, graph, Vec::Zero(2 * hit->p)};
      spec.x0 = unstable_mode_state(build_closed_loop(spec));
      ArrayTrajectory traj = simulate_array(spec, 50.0, opt.steps);
      SyncSummary summary = sync_metrics(traj);
      SpectralVerdict verdict = spectral_sync_test(a, coupling, graph);
      return CounterexampleReport{
          .statement = 'f',
          .pair = pair,
          .graph = graph,
          .gain = gain,
          .witness = "closed-loop mode with positive real part on the ring",
          .witness_value = hit->abscissa,
          .ring = hit,
          .verdict = verdict,
          .trajectory = std::move(traj),
          .summary = summary};
    }
    case 'g': {
      // scalar unstable plant with full state output: a weak leader edge
      // cannot hold the pair together
      SystemPair pair(Mat::Ones(1, 1), Mat::Ones(1, 1));
      const double eps = opt.epsilon;
      Interconnection graph =
          Interconnection::from_weighted_edges(2, {{1, 2, eps}});
      const Mat gain = Mat::Ones(1, 1);  // 1 - eps * L > 0
      Vec x0(2);
      x0 << 1.0, 2.0;
      ArraySpec spec{pair.A, gain * pair.C, graph, x0};
      ArrayTrajectory traj = simulate_array(spec, 5.0, opt.steps);
      SyncSummary summary = sync_metrics(traj);
      SpectralVerdict verdict = spectral_sync_test(pair.A, gain * pair.C, graph);
      return CounterexampleReport{
          .statement = 'g',
          .pair = pair,
          .graph = graph,
          .gain = gain,
          .witness = "pairwise gap grows like exp((1 - eps L) t)",
          .witness_value = summary.rate.value_or(0.0),
          .ring = std::nullopt,
          .verdict = verdict,
          .trajectory = std::move(traj),
          .summary = summary};
    }
    case 'h': {
      // the zero pair: the coupling term vanishes for every gain, so no
      // minimum coupling rate helps
      SystemPair pair(Mat::Zero(1, 1), Mat::Zero(1, 1));
      Interconnection graph = Interconnection::ring(2);  // |Re lambda2| = 2
      Vec x0(2);
      x0 << 1.0, 2.0;
      double worst_ratio = 0.0;
      Mat last_gain = Mat::Zero(1, 1);
      ArrayTrajectory last_traj;
      SyncSummary last_summary;
      for (double l : {-2.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
        last_gain = Mat::Constant(1, 1, l);
        ArraySpec spec{pair.A, last_gain * pair.C, graph, x0};
        last_traj = simulate_array(spec, 20.0, opt.steps);
        last_summary = sync_metrics(last_traj);
        worst_ratio = std::max(
            worst_ratio, last_summary.final_sync / last_summary.initial_sync);
      }
      SpectralVerdict verdict =
          spectral_sync_test(pair.A, last_gain * pair.C, graph);
      return CounterexampleReport{
          .statement = 'h',
          .pair = pair,
          .graph = graph,
          .gain = last_gain,
          .witness = "states stay frozen for every sampled gain",
          .witness_value = worst_ratio,
          .ring = std::nullopt,
          .verdict = verdict,
          .trajectory = std::move(last_traj),
          .summary = last_summary};
    }
    default:
      throw ValidationError(std::string("demo_statement: unknown statement '") +
                            id + "', expected e, f, g or h");
  }
}

}  // namespace synckit
