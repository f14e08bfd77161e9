#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tangentlab/classical.hpp"
#include "tangentlab/evolve.hpp"
#include "tangentlab/random_matrix.hpp"
#include "tangentlab/tangent.hpp"

namespace tangentlab {

enum class RecordingPolicy { off, on_entry, at_rate };

// Parameters of the environment model: Poisson-timed unitary kicks generated
// by Gaussian-unitary-ensemble draws, plus an optional recording rule that
// reinitializes the state to its retraction whenever it is found inside the
// epsilon tube around the chart family.
struct RMConfig {
  int subspace_dim = 0;  // 0: kick the full truncated space
  double v = 1.0;        // GUE entry scale
  double lambda = 0.0;   // kick strength
  double tau = 1.0;      // kick duration (only lambda*tau enters the unitary)
  double nu = 1.0;       // event rate
  double epsilon = 0.1;  // tube radius (Fubini-Study, radians)
  RecordingPolicy recording = RecordingPolicy::off;
  double recording_rate = 0.0;  // for RecordingPolicy::at_rate
  std::uint64_t seed = 1;

  void validate() const {
    if (!(v > 0.0)) throw ConfigError("rm: v must be positive");
    if (lambda < 0.0) throw ConfigError("rm: lambda must be non-negative");
    if (!(tau > 0.0)) throw ConfigError("rm: tau must be positive");
    if (!(nu > 0.0)) throw ConfigError("rm: nu must be positive");
    if (!(epsilon > 0.0 && epsilon < 0.7853981633974483))
      throw ConfigError("rm: epsilon must lie in (0, pi/4)");
    if (recording == RecordingPolicy::at_rate && !(recording_rate > 0.0))
      throw ConfigError("rm: recording_rate must be positive for at-rate policy");
  }
};

struct WalkSample {
  double t = 0.0;
  double d_fs = 0.0;  // distance to the retracted chart point (upper bound on
                      // the distance to the chart family)
  int events = 0;     // bit 0: kick since previous sample; bit 1: recording
  double a = 0.0;     // retraction chart coordinates
  double p = 0.0;
  double a_oracle = 0.0;  // classical reference trajectory
  double p_oracle = 0.0;
};

struct WalkRecord {
  std::vector<WalkSample> samples;
  bool truncated = false;
  std::string truncation_reason;
  int kick_count = 0;
  int recording_count = 0;
  double norm_drift = 0.0;  // max | |psi| - 1 | seen along the walk
};

struct WalkSummary {
  double residence_fraction = 0.0;  // fraction of samples with d_fs < epsilon
  double mean_sojourn = 0.0;        // mean duration of maximal inside runs
  int excursions = 0;               // inside -> outside transitions
  double max_chart_deviation = 0.0; // max |a - a_oracle|
  double median_d_fs = 0.0;
  double final_d_fs = 0.0;
};

// One walker: exact unitary evolution under h_sys between Poisson(nu) kick
// events, with the chosen recording policy, sampled every record_dt.  The
// classical reference trajectory integrates `oracle` from the same initial
// chart.  The walk is truncated (not failed) if the retraction leaves the
// grid interior.
WalkRecord run_rm_walk(const ParticleChart& chart0, const HamiltonianSpec& h_sys,
                       const NewtonParams& oracle, const RMConfig& rm, double record_dt,
                       double t_end, const GridPtr& grid);

WalkSummary residence_stats(const WalkRecord& record, double epsilon);

// Independent walkers with per-walker seeds mixed from rm.seed.  Walkers
// share nothing, so `threads` > 1 fans them out without changing any
// result: outputs land in per-walker slots.
std::vector<WalkSummary> run_rm_ensemble(const ParticleChart& chart0,
                                         const HamiltonianSpec& h_sys,
                                         const NewtonParams& oracle, const RMConfig& rm,
                                         int walkers, double record_dt, double t_end,
                                         const GridPtr& grid,
                                         std::vector<WalkRecord>* records = nullptr,
                                         int threads = 1);

}  // namespace tangentlab
