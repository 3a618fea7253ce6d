#pragma once

#include "synckit/interconnect.hpp"
#include "synckit/linops.hpp"

#include <optional>

namespace synckit {

/// A coupled array dx = (I_p (x) A + Gamma (x) M) x. M is the per-pair
/// coupling matrix: L C for output feedback, H^T H or B K for the other
/// array types handled by this toolkit.
struct ArraySpec {
  Mat a;                  // n x n node dynamics
  Mat coupling;           // n x n coupling matrix M
  Interconnection graph;  // p nodes
  Vec x0;                 // stacked initial state, length p*n

  int state_dim() const { return static_cast<int>(a.rows()); }
  int nodes() const { return graph.node_count(); }
};

/// Sampled trajectory of the stacked state with per-time synchronization
/// metrics. `states` holds one row per grid time.
struct ArrayTrajectory {
  Vec times;
  Mat states;                     // (steps+1) x (p*n)
  Vec sync_error;                 // max over i<j of |x_i - x_j|
  std::optional<Vec> tracking_error;  // max_i |x_i - xbar|, needs connected graph
  std::optional<Mat> predicted;   // xbar rows, when available
  int state_dim = 0;
  int nodes = 0;
};

/// Decay summary of a trajectory: a run counts as synchronized when the
/// final pairwise error is below decay_tol times the initial one.
struct SyncSummary {
  double initial_sync = 0.0;
  double final_sync = 0.0;
  bool decayed = false;
  std::optional<double> rate;            // log-linear slope over the last half
  std::optional<double> final_tracking;
  double decay_tol = 0.0;
};

Mat build_closed_loop(const ArraySpec& spec);

/// Exact sampling via the matrix exponential on a uniform grid, with a
/// fixed-step RK4 consistency check on the same grid (disagreement beyond
/// 10x int_tol raises NumericalError). When the graph's zero eigenvalue is
/// simple the predicted limit trajectory and tracking error are attached.
ArrayTrajectory simulate_array(const ArraySpec& spec, double t_end, int steps,
                               double int_tol = 1e-5);

/// xbar(t_k) = (r^T (x) e^{A t_k}) x0, one row per grid time.
Mat predicted_sync_trajectory(const Mat& a, const Vec& r, const Vec& x0,
                              const Vec& times);

SyncSummary sync_metrics(const ArrayTrajectory& traj, double decay_tol = 1e-6);

/// Default horizon: 20 / |Re lambda2| for a connected graph, else 20.
double default_t_end(const Interconnection& g);

}  // namespace synckit
