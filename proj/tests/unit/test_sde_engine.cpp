#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "gidp/errors.hpp"
#include "gidp/sde_engine.hpp"
#include "support/stat_tests.hpp"

using namespace gidp;

namespace {

EnsembleConfig ensemble(std::size_t n, std::size_t steps, double t_final, std::vector<double> times,
                        std::uint64_t seed = 11, int workers = 1) {
  EnsembleConfig c;
  c.n_trajectories = n;
  c.n_steps = steps;
  c.t_final = t_final;
  c.snapshot_times = std::move(times);
  c.seed = seed;
  c.workers = workers;
  return c;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

}  // namespace

TEST_CASE("Euler step arithmetic") {
  GidpSpec bm;
  bm.mu0 = 2.0;
  bm.sigma0 = 3.0;
  CHECK(step(1.0, 0.1, bm, 0.0) == doctest::Approx(1.2).epsilon(1e-15));

  GidpSpec geo;
  geo.drift_kind = CoefficientKind::Linear;
  geo.diffusion_kind = CoefficientKind::Linear;
  geo.mu0 = 0.1;
  geo.sigma0 = 0.2;
  geo.x0 = 10.0;
  CHECK(step(10.0, 0.01, geo, 0.05) == doctest::Approx(10.11).epsilon(1e-14));

  CHECK_THROWS_AS(step(1e308, 1.0, bm, 1e308), OverflowError);
}

TEST_CASE("make_process") {
  const auto bm = make_process(ProcessKind::BM, {0.0, 0.0, 0.1, 3.0});
  CHECK(bm.drift_kind == CoefficientKind::Constant);
  CHECK(bm.diffusion_kind == CoefficientKind::Constant);
  CHECK(is_gaussian(bm.noise));
  CHECK(scale(bm.noise) == 1.0);

  ProcessParams p;
  p.x0 = 80;
  p.mu0 = 0.105;
  p.sigma0 = 0.1;
  p.alpha = 1.9;
  p.beta = 0.5;
  const auto glf = make_process(ProcessKind::GLF, p);
  CHECK(glf.drift_kind == CoefficientKind::Linear);
  CHECK(glf.diffusion_kind == CoefficientKind::Linear);
  const auto s = std::get<StableNoiseParams>(glf.noise);
  CHECK(s.alpha == 1.9);
  CHECK(s.beta == 0.5);
  CHECK(s.nu == 0.0);
  CHECK(s.rho == 1.0);

  ProcessParams bad = p;
  bad.alpha = 2.5;
  CHECK_THROWS_AS(make_process(ProcessKind::LF, bad), DomainError);

  ProcessParams gbm{60, 0, 0.2, 0.1, 2.0, 0.0, 2.0};
  CHECK(make_process(ProcessKind::GBM, gbm).sigma0 == doctest::Approx(0.2));

  ProcessParams neg{-1.0, 0, 0.1, 0.1};
  CHECK_THROWS_AS(make_process(ProcessKind::GBM, neg), DomainError);
  CHECK_THROWS_AS(parse_process_kind("OU"), DomainError);
}

TEST_CASE("Gaussian increment sd scales with sqrt(dt)") {
  NoiseSampler sampler(GaussianNoiseParams{});
  RandomStream rng(3);
  const double dt = 0.25;
  std::vector<double> inc(100000);
  for (auto& d : inc) d = std::sqrt(dt) * sampler(rng);
  const double v = variance(inc);
  const double se = dt * std::sqrt(2.0 / (inc.size() - 1));
  CHECK(std::abs(v - dt) < 3 * se);
}

TEST_CASE("increment variance regression over dt has slope sigma0^2") {
  const auto spec = make_process(ProcessKind::BM, {0.0, 0.0, 0.0, 1.5});
  std::vector<double> dts, vars;
  for (const double dt : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
    const auto r = simulate_ensemble(spec, ThresholdRule::none(), ensemble(20000, 1, dt, {dt}, 5));
    dts.push_back(dt);
    vars.push_back(variance(r.snapshots[0].values));
  }
  const double mx = mean(dts), my = mean(vars);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    sxy += (dts[i] - mx) * (vars[i] - my);
    sxx += (dts[i] - mx) * (dts[i] - mx);
    syy += (vars[i] - my) * (vars[i] - my);
  }
  const double slope = sxy / sxx;
  const double r2 = sxy * sxy / (sxx * syy);
  CHECK(slope == doctest::Approx(2.25).epsilon(0.03));
  CHECK(r2 >= 0.999);
}

TEST_CASE("zero noise gives the deterministic line exactly") {
  const auto spec = make_process(ProcessKind::BM, {1.0, 0.0, 0.5, 0.0});
  const auto r = simulate_ensemble(spec, ThresholdRule::none(), ensemble(16, 8, 4.0, {1.0, 4.0}));
  for (const auto& snap : r.snapshots) {
    for (double v : snap.values) CHECK(v == doctest::Approx(1.0 + 0.5 * snap.t).epsilon(1e-14));
  }
}

TEST_CASE("unrestricted BM mean and unrestricted GBM mean") {
  const std::size_t n = 20000;
  const auto bm = make_process(ProcessKind::BM, {2.0, 0.0, 0.1, 3.0});
  const auto r = simulate_ensemble(bm, ThresholdRule::none(), ensemble(n, 250, 25.0, {25.0}));
  CHECK(std::abs(mean(r.snapshots[0].values) - 4.5) < 3 * 3.0 * 5.0 / std::sqrt(double(n)));

  const auto gbm = make_process(ProcessKind::GBM, {60.0, 0.0, 0.205, 0.08});
  const auto g = simulate_ensemble(gbm, ThresholdRule::none(), ensemble(n, 2000, 10.0, {10.0}));
  const double m = mean(g.snapshots[0].values);
  const double se = std::sqrt(variance(g.snapshots[0].values) / n);
  // Euler bias of x0 e^{mu t}: relative (mu dt)^2 t/(2 dt), far below se here.
  CHECK(std::abs(m - 60.0 * std::exp(0.205 * 10.0)) < 3 * se);
}

TEST_CASE("path-wise threshold: survivors above x_V, absorbed paths stay at zero") {
  const auto bm = make_process(ProcessKind::BM, {2.0, 0.0, 0.1, 3.0});
  const auto r = simulate_ensemble(bm, ThresholdRule::absorb_to_zero(1.0),
                                   ensemble(4000, 1000, 100.0, {12.5, 25, 50, 100}));
  std::vector<std::uint8_t> was_dead(4000, 0);
  for (const auto& snap : r.snapshots) {
    std::size_t alive = 0;
    for (std::size_t i = 0; i < snap.values.size(); ++i) {
      if (snap.alive[i]) {
        ++alive;
        CHECK(snap.values[i] >= 1.0);
        CHECK_FALSE(was_dead[i]);
      } else {
        CHECK(snap.values[i] == 0.0);
        was_dead[i] = 1;
      }
    }
    CHECK(alive == snap.n_alive);
  }
  CHECK(r.snapshots.back().n_alive < r.snapshots.front().n_alive);
}

TEST_CASE("at-snapshot threshold conditions on the value at observation") {
  const auto bm = make_process(ProcessKind::BM, {2.0, 0.0, 0.1, 3.0});
  const auto cfg = ensemble(4000, 1000, 100.0, {25, 100});
  const auto free = simulate_ensemble(bm, ThresholdRule::none(), cfg);
  const auto cond = simulate_ensemble(bm, ThresholdRule::absorb_to_zero(1.0, AbsorptionTiming::AtSnapshot), cfg);
  for (std::size_t s = 0; s < cfg.snapshot_times.size(); ++s) {
    for (std::size_t i = 0; i < 4000; ++i) {
      const double x = free.snapshots[s].values[i];
      CHECK(bool(cond.snapshots[s].alive[i]) == (x >= 1.0));
      CHECK(cond.snapshots[s].values[i] == (x >= 1.0 ? x : 0.0));
    }
  }
}

TEST_CASE("results do not depend on worker count") {
  ProcessParams p{5.0, 0.0, 0.5, 0.4, 1.8, 0.9};
  const auto lf = make_process(ProcessKind::LF, p);
  const auto cfg1 = ensemble(3001, 200, 10.0, {2.5, 10.0}, 77, 1);
  auto cfg4 = cfg1;
  cfg4.workers = 4;
  const auto a = simulate_ensemble(lf, ThresholdRule::absorb_to_zero(-1.0), cfg1);
  const auto b = simulate_ensemble(lf, ThresholdRule::absorb_to_zero(-1.0), cfg4);
  for (std::size_t s = 0; s < a.snapshots.size(); ++s) {
    CHECK(snapshot_csv(a.snapshots[s]) == snapshot_csv(b.snapshots[s]));
  }
  // Observer mode walks the grid step by step but draws the same streams.
  const auto c = simulate_ensemble(lf, ThresholdRule::absorb_to_zero(-1.0), cfg4,
                                   [](std::size_t, double, std::span<const double>,
                                      std::span<const std::uint8_t>) {});
  CHECK(snapshot_csv(a.snapshots[1]) == snapshot_csv(c.snapshots[1]));
  auto other = cfg1;
  other.seed = 78;
  CHECK(snapshot_csv(simulate_ensemble(lf, ThresholdRule::none(), other).snapshots[0]) !=
        snapshot_csv(a.snapshots[0]));
}

TEST_CASE("observer sees every grid step") {
  const auto bm = make_process(ProcessKind::BM, {0.0, 1.0, 0.0, 1.0});
  std::vector<double> ts;
  simulate_ensemble(bm, ThresholdRule::none(), ensemble(10, 20, 3.0, {3.0}),
                    [&](std::size_t, double t, std::span<const double> v, std::span<const std::uint8_t>) {
                      CHECK(v.size() == 10);
                      ts.push_back(t);
                    });
  REQUIRE(ts.size() == 20);
  CHECK(ts.front() == doctest::Approx(1.1));
  CHECK(ts.back() == doctest::Approx(3.0));
}

TEST_CASE("stable self-similarity of drift-free LF") {
  ProcessParams p{0.0, 0.0, 0.0, 1.0, 1.5, 0.5};
  const auto lf = make_process(ProcessKind::LF, p);
  const std::size_t n = 20000;
  const auto r = simulate_ensemble(lf, ThresholdRule::none(), ensemble(n, 400, 4.0, {1.0, 4.0}));
  std::vector<double> a = r.snapshots[0].values;
  std::vector<double> b = r.snapshots[1].values;
  for (double& x : b) x /= std::pow(4.0, 1.0 / 1.5);
  CHECK(testing::ks_two_sample(a, b) < testing::ks_critical_two(n, n));
}

TEST_CASE("snapshot alignment and configuration errors") {
  const auto bm = make_process(ProcessKind::BM, {0.0, 0.0, 0.0, 1.0});
  const auto steps = snapshot_steps(0.0, ensemble(1, 10, 1.0, {0.1, 0.52, 1.0}));
  CHECK(steps == std::vector<std::size_t>{1, 5, 10});
  CHECK_THROWS_AS(snapshot_steps(0.0, ensemble(1, 10, 1.0, {0.5, 0.3})), DomainError);
  CHECK_THROWS_AS(snapshot_steps(0.0, ensemble(1, 10, 1.0, {1.5})), DomainError);
  CHECK_THROWS_AS(simulate_ensemble(bm, ThresholdRule::none(), ensemble(0, 10, 1.0, {1.0})), DomainError);
}

TEST_CASE("overflow names the lowest failing trajectory") {
  GidpSpec spec;
  spec.drift_kind = CoefficientKind::Linear;
  spec.diffusion_kind = CoefficientKind::Linear;
  spec.mu0 = 500.0;
  spec.sigma0 = 0.0;
  spec.x0 = 1.0;
  try {
    simulate_ensemble(spec, ThresholdRule::none(), ensemble(8, 1000, 10.0, {10.0}, 1, 2));
    FAIL("expected OverflowError");
  } catch (const OverflowError& e) {
    CHECK(e.trajectory() == 0);
    CHECK(e.step() < 1000);
  }
}

TEST_CASE("snapshot CSV and metadata") {
  Snapshot s;
  s.values = {1.5, 0.0};
  s.alive = {1, 0};
  CHECK(snapshot_csv(s) == "id,value,alive\n0,1.5,1\n1,0,0\n");
  const auto bm = make_process(ProcessKind::BM, {2.0, 0.0, 0.1, 3.0});
  const auto r = simulate_ensemble(bm, ThresholdRule::absorb_to_zero(1.0), ensemble(10, 10, 1.0, {1.0}));
  const auto meta = snapshot_metadata_json(r, {{"snapshots/t_1.csv", snapshot_csv(r.snapshots[0])}});
  CHECK(meta.find("\"seed\"") != std::string::npos);
  CHECK(meta.find("snapshots/t_1.csv") != std::string::npos);
}
