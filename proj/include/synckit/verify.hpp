#pragma once

#include "synckit/interconnect.hpp"
#include "synckit/linops.hpp"
#include "synckit/simulate.hpp"
#include "synckit/sysclass.hpp"

#include <optional>
#include <string>
#include <vector>

namespace synckit {

/// Stability record of one coupled mode A + lambda M.
struct BlockRecord {
  Complex lambda;
  double abscissa = 0.0;
  bool hurwitz = false;
};

/// The array synchronizes iff A + lambda M is Hurwitz at every nonzero
/// eigenvalue lambda of Gamma; `margin` is the distance of the closest
/// tested mode to the stability boundary.
struct SpectralVerdict {
  std::vector<BlockRecord> blocks;
  bool all_hurwitz = true;
  double margin = 0.0;
};

SpectralVerdict spectral_sync_test(const Mat& a, const Mat& coupling,
                                   const Interconnection& g, double margin = 0.0);

/// Smallest directed-ring size on which the closed loop A + lambda L C goes
/// unstable, together with the offending eigenvalue.
struct RingInstability {
  int p = 0;
  Complex lambda;
  double abscissa = 0.0;
};

std::optional<RingInstability> ring_instability_search(const Mat& c, const Mat& a,
                                                       const Mat& l, int p_max);

/// Samples sigma/omega and checks that A - (sigma + j omega) P C^T C stays
/// Hurwitz with P from the Riccati equation; all sigma must be >= 1.
struct ShiftCheckResult {
  bool all_hurwitz = true;
  double worst_abscissa = 0.0;
};

ShiftCheckResult riccati_shift_check(const Mat& c, const Mat& a,
                                     const std::vector<double>& sigmas,
                                     const std::vector<double>& omegas);

/// Executable reproduction of one of the four non-synchronizability
/// statements (ids 'e', 'f', 'g', 'h').
struct CounterexampleReport {
  char statement = '?';
  SystemPair pair;
  Interconnection graph;
  Mat gain;
  std::string witness;     // what demonstrates the failure
  double witness_value = 0.0;
  std::optional<RingInstability> ring;  // statement f only
  SpectralVerdict verdict;
  ArrayTrajectory trajectory;
  SyncSummary summary;
};

struct DemoOptions {
  std::optional<Mat> gain;  // statement f: override the default L = (2, 1)^T
  int p_max = 200;          // statement f: search bound
  double epsilon = 0.1;     // statement g: leader-edge weight
  int steps = 500;
};

CounterexampleReport demo_statement(char id, const DemoOptions& opt = {});

}  // namespace synckit
