#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <tangentlab/evolve.hpp>
#include <tangentlab/rm_walk.hpp>
#include <tangentlab/systems.hpp>

#include "oracles.hpp"

using namespace tangentlab;

namespace {

// Normative desk configuration: unit-frequency trap, ground-width packet,
// 64-level environment window, kicks calibrated to ~0.02 per-event
// displacement, 200 expected events over the run.
struct WalkSetup {
  ParticleChart chart{1.0, 0.0, std::sqrt(0.5), 1.0};
  GridPtr grid = make_grid({symmetric_axis("x", 9.0, 160)});
  HamiltonianSpec h = particle_hamiltonian(grid, 1.0, Polynomial{0.0, 0.0, 0.5});
  NewtonParams oracle{1.0, Polynomial{0.0, 0.0, 0.5}, 0.0};
  RMConfig rm;

  WalkSetup() {
    rm.subspace_dim = 64;
    rm.v = 1.0;
    rm.lambda = 0.0025;
    rm.tau = 1.0;
    rm.nu = 20.0;
    rm.epsilon = 0.1;
    rm.seed = 4242;
  }
};

}  // namespace

TEST_CASE("config validation") {
  RMConfig rm;
  rm.epsilon = 1.0;  // >= pi/4
  CHECK_THROWS_AS(rm.validate(), ConfigError);
  rm.epsilon = 0.1;
  rm.nu = -1.0;
  CHECK_THROWS_AS(rm.validate(), ConfigError);
}

TEST_CASE("without kicks a matched packet stays on the chart") {
  // Grid-resolved check of the claim itself: on a fine axis the matched
  // packet stays within 1e-4 of the chart family for a full period and its
  // center tracks the classical oscillator.
  const ParticleChart chart{1.0, 0.0, std::sqrt(0.5), 1.0};
  auto fine = make_grid({symmetric_axis("x", 8.5, 2048)});
  const HamiltonianSpec h = particle_hamiltonian(fine, 1.0, Polynomial{0.0, 0.0, 0.5});
  CrankNicolson cn(h, 2e-3);
  QuantumState psi = particle_state(chart, fine);
  double worst_d = 0.0, worst_a = 0.0;
  for (int step = 1; step <= 3141; ++step) {
    psi = cn.step(psi, (step - 1) * 2e-3, step);
    if (step % 20 == 0) {
      const double t = step * 2e-3;
      const auto r = retract(psi, chart);
      worst_d = std::max(worst_d, r.residual);
      worst_a = std::max(worst_a, std::abs(r.chart.a - std::cos(t)));
    }
  }
  CHECK(worst_d < 1e-4);
  CHECK(worst_a < 1e-4);
}

TEST_CASE("walk without kicks stays inside the grid-dispersion envelope") {
  // On the production walk grid the sampled packet dephases at O(spacing^2);
  // the envelope below is the measured dispersion rate with 2x headroom and
  // sits two orders of magnitude under the tube radius epsilon = 0.1.
  WalkSetup s;
  s.rm.lambda = 0.0;
  const WalkRecord rec = run_rm_walk(s.chart, s.h, s.oracle, s.rm, 0.05, 5.0, s.grid);
  REQUIRE(!rec.truncated);
  for (const auto& smp : rec.samples) {
    CHECK(smp.d_fs < 6e-3 * smp.t + 1e-4);
    CHECK(std::abs(smp.a - smp.a_oracle) < 6e-3 * smp.t + 1e-4);
  }
  CHECK(rec.norm_drift < 1e-8);
}

TEST_CASE("kicks without recording diffuse away from the chart family") {
  WalkSetup s;
  s.rm.recording = RecordingPolicy::off;
  std::vector<double> med_early, med_mid, med_late;
  for (int w = 0; w < 12; ++w) {
    RMConfig cfg = s.rm;
    cfg.seed = Rng::mix(s.rm.seed, static_cast<std::uint64_t>(w));
    const WalkRecord rec = run_rm_walk(s.chart, s.h, s.oracle, cfg, 0.05, 10.0, s.grid);
    REQUIRE(!rec.truncated);
    const std::size_t n = rec.samples.size();
    med_early.push_back(rec.samples[n / 4].d_fs);
    med_mid.push_back(rec.samples[n / 2].d_fs);
    med_late.push_back(rec.samples[n - 1].d_fs);
    CHECK(rec.norm_drift < 1e-8);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  const double m1 = median(med_early), m2 = median(med_mid), m3 = median(med_late);
  CHECK(m1 < m2);
  CHECK(m2 < m3);
}

TEST_CASE("recording confines the walk and tracks the classical oracle") {
  WalkSetup s;
  const int walkers = 16;

  s.rm.recording = RecordingPolicy::off;
  const auto off = run_rm_ensemble(s.chart, s.h, s.oracle, s.rm, walkers, 0.02, 10.0, s.grid);
  s.rm.recording = RecordingPolicy::on_entry;
  const auto on = run_rm_ensemble(s.chart, s.h, s.oracle, s.rm, walkers, 0.02, 10.0, s.grid);

  double f_off = 0.0, f_on = 0.0;
  int on_inside = 0;
  double dev_on = 0.0, dev_off = 0.0;
  for (int i = 0; i < walkers; ++i) {
    f_off += off[i].residence_fraction / walkers;
    f_on += on[i].residence_fraction / walkers;
    if (on[i].median_d_fs < s.rm.epsilon) ++on_inside;
    dev_on = std::max(dev_on, on[i].max_chart_deviation);
    dev_off = std::max(dev_off, off[i].max_chart_deviation);
  }
  CHECK(f_on - f_off > 0.3);
  CHECK(on_inside == walkers);
  // Recording keeps the chart trajectory closer to the classical run.
  CHECK(dev_on < dev_off);
  // Residence contrast also shows in the per-walker effect size.
  int better = 0;
  for (int i = 0; i < walkers; ++i)
    if (on[i].residence_fraction - off[i].residence_fraction > 0.3) ++better;
  CHECK(better >= walkers * 3 / 4);
}

TEST_CASE("recording events project onto the chart family") {
  // The projection property itself: after reinitialization the distance to
  // the family is the retraction residual of a chart state.
  WalkSetup s;
  const QuantumState psi = particle_state(s.chart, s.grid);
  Rng rng(9);
  QuantumState kicked = psi;
  for (int i = 0; i < 3; ++i) {
    const SpectralPropagator prop(s.h);
    kicked = prop.advance(kick_in_subspace(kicked, prop.low_energy_basis(64),
                                           sample_gue(64, 1.0, rng), 0.002, 1.0),
                          0.3);
  }
  const auto r = retract(kicked, s.chart);
  const QuantumState recorded = build_state(r.chart, s.grid);
  const auto r2 = retract(recorded, s.chart);
  CHECK(r2.residual < 1e-7);
}

TEST_CASE("walks are bit-reproducible from the seed") {
  WalkSetup s;
  s.rm.recording = RecordingPolicy::on_entry;
  const WalkRecord a = run_rm_walk(s.chart, s.h, s.oracle, s.rm, 0.05, 3.0, s.grid);
  const WalkRecord b = run_rm_walk(s.chart, s.h, s.oracle, s.rm, 0.05, 3.0, s.grid);
  REQUIRE(a.samples.size() == b.samples.size());
  CHECK(a.kick_count == b.kick_count);
  CHECK(a.recording_count == b.recording_count);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].d_fs == b.samples[i].d_fs);
    CHECK(a.samples[i].a == b.samples[i].a);
    CHECK(a.samples[i].events == b.samples[i].events);
  }
}

TEST_CASE("residence statistics on synthetic records") {
  WalkRecord rec;
  SUBCASE("all inside") {
    for (int i = 0; i < 10; ++i) rec.samples.push_back({0.1 * i, 0.01, 0, 0, 0, 0, 0});
    const WalkSummary s = residence_stats(rec, 0.1);
    CHECK(s.residence_fraction == 1.0);
    CHECK(s.excursions == 0);
  }
  SUBCASE("alternating halves") {
    for (int i = 0; i < 10; ++i)
      rec.samples.push_back({0.1 * i, i % 2 == 0 ? 0.01 : 0.5, 0, 0, 0, 0, 0});
    const WalkSummary s = residence_stats(rec, 0.1);
    CHECK(s.residence_fraction == 0.5);
    CHECK(s.excursions == 5);
  }
}

TEST_CASE("at-rate recording policy also confines the walk") {
  WalkSetup s;
  s.rm.recording = RecordingPolicy::at_rate;
  s.rm.recording_rate = 20.0;
  const WalkRecord rec = run_rm_walk(s.chart, s.h, s.oracle, s.rm, 0.05, 5.0, s.grid);
  REQUIRE(!rec.truncated);
  const WalkSummary sum = residence_stats(rec, s.rm.epsilon);
  CHECK(sum.residence_fraction > 0.9);
  CHECK(rec.recording_count > 0);
}
