#include "tangentlab/rm_walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace tangentlab {

namespace {

struct OracleIntegrator {
  ClassicalState state;
  NewtonParams params;
  double dt;

  void advance_to(double t) {
    while (state.t + dt <= t + 1e-12) state = newton_step(state, params, dt);
    const double rest = t - state.t;
    if (rest > 1e-12) state = newton_step(state, params, rest);
  }
};

}  // namespace

WalkRecord run_rm_walk(const ParticleChart& chart0, const HamiltonianSpec& h_sys,
                       const NewtonParams& oracle, const RMConfig& rm, double record_dt,
                       double t_end, const GridPtr& grid) {
  rm.validate();
  WalkRecord record;

  const SpectralPropagator prop(h_sys);
  const int full_dim = static_cast<int>(grid->total_points());
  const bool use_subspace = rm.subspace_dim > 0 && rm.subspace_dim < full_dim;
  Eigen::MatrixXcd basis;
  if (use_subspace) basis = prop.low_energy_basis(rm.subspace_dim);
  const int kick_dim = use_subspace ? rm.subspace_dim : full_dim;

  Rng rng(rm.seed);
  QuantumState psi = particle_state(chart0, grid);

  OracleIntegrator orc{ClassicalState{0.0, chart0.a, chart0.p, {}, {}}, oracle,
                       std::min(record_dt / 16.0, 1e-2)};

  double t = 0.0;
  double next_kick = rng.exponential(rm.nu);
  double next_record_event = (rm.recording == RecordingPolicy::at_rate)
                                 ? rng.exponential(rm.recording_rate)
                                 : std::numeric_limits<double>::infinity();

  const int n_samples = static_cast<int>(std::llround(t_end / record_dt));
  int pending_events = 0;

  auto apply_kick = [&]() {
    const Eigen::MatrixXcd h_rand = sample_gue(kick_dim, rm.v, rng);
    psi = use_subspace ? kick_in_subspace(psi, basis, h_rand, rm.lambda, rm.tau)
                       : kick(psi, h_rand, rm.lambda, rm.tau);
    ++record.kick_count;
    pending_events |= 1;
  };

  auto apply_recording = [&]() {
    const Retraction<ParticleChart> r = retract(psi, chart0);
    if (r.residual < rm.epsilon) {
      psi = build_state(r.chart, grid);
      ++record.recording_count;
      pending_events |= 2;
    }
  };

  for (int k = 0; k <= n_samples; ++k) {
    const double t_sample = k * record_dt;
    try {
      // Process events in time order up to the sample point.
      for (;;) {
        const double t_event = std::min(next_kick, next_record_event);
        if (t_event > t_sample) break;
        psi = prop.advance(psi, t_event - t);
        t = t_event;
        if (next_kick <= next_record_event) {
          apply_kick();
          if (rm.recording == RecordingPolicy::on_entry) apply_recording();
          next_kick = t + rng.exponential(rm.nu);
        } else {
          apply_recording();
          next_record_event = t + rng.exponential(rm.recording_rate);
        }
      }
      psi = prop.advance(psi, t_sample - t);
      t = t_sample;
      record.norm_drift = std::max(record.norm_drift, std::abs(psi.norm() - 1.0));

      const Retraction<ParticleChart> r = retract(psi, chart0);
      orc.advance_to(t_sample);

      WalkSample s;
      s.t = t_sample;
      s.d_fs = r.residual;
      s.events = pending_events;
      s.a = r.chart.a;
      s.p = r.chart.p;
      s.a_oracle = orc.state.a;
      s.p_oracle = orc.state.p;
      record.samples.push_back(s);
      pending_events = 0;
    } catch (const DomainError& e) {
      record.truncated = true;
      record.truncation_reason = e.what();
      break;
    }
  }
  return record;
}

WalkSummary residence_stats(const WalkRecord& record, double epsilon) {
  WalkSummary s;
  if (record.samples.empty()) return s;

  int inside_count = 0;
  int excursions = 0;
  double sojourn_total = 0.0;
  int sojourn_runs = 0;
  bool inside_prev = false;
  double run_start = 0.0;
  std::vector<double> dvals;
  dvals.reserve(record.samples.size());

  for (std::size_t i = 0; i < record.samples.size(); ++i) {
    const auto& smp = record.samples[i];
    const bool inside = smp.d_fs < epsilon;
    dvals.push_back(smp.d_fs);
    if (inside) ++inside_count;
    if (inside && !inside_prev) run_start = smp.t;
    if (!inside && inside_prev) {
      sojourn_total += smp.t - run_start;
      ++sojourn_runs;
      ++excursions;
    }
    s.max_chart_deviation = std::max(s.max_chart_deviation, std::abs(smp.a - smp.a_oracle));
    inside_prev = inside;
  }
  if (inside_prev) {
    sojourn_total += record.samples.back().t - run_start;
    ++sojourn_runs;
  }

  s.residence_fraction = static_cast<double>(inside_count) / static_cast<double>(record.samples.size());
  s.mean_sojourn = sojourn_runs > 0 ? sojourn_total / sojourn_runs : 0.0;
  s.excursions = excursions;
  std::sort(dvals.begin(), dvals.end());
  s.median_d_fs = dvals[dvals.size() / 2];
  s.final_d_fs = record.samples.back().d_fs;
  return s;
}

std::vector<WalkSummary> run_rm_ensemble(const ParticleChart& chart0,
                                         const HamiltonianSpec& h_sys,
                                         const NewtonParams& oracle, const RMConfig& rm,
                                         int walkers, double record_dt, double t_end,
                                         const GridPtr& grid,
                                         std::vector<WalkRecord>* records, int threads) {
  std::vector<WalkSummary> out(static_cast<std::size_t>(walkers));
  std::vector<WalkRecord> recs(static_cast<std::size_t>(walkers));

  auto worker = [&](int begin, int step) {
    for (int w = begin; w < walkers; w += step) {
      RMConfig cfg = rm;
      cfg.seed = Rng::mix(rm.seed, static_cast<std::uint64_t>(w));
      recs[static_cast<std::size_t>(w)] =
          run_rm_walk(chart0, h_sys, oracle, cfg, record_dt, t_end, grid);
      out[static_cast<std::size_t>(w)] =
          residence_stats(recs[static_cast<std::size_t>(w)], rm.epsilon);
    }
  };

  threads = std::max(1, std::min(threads, walkers));
  if (threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    for (auto& th : pool) th.join();
  }

  if (records) *records = std::move(recs);
  return out;
}

}  // namespace tangentlab
