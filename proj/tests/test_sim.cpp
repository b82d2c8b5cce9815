#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "subcomp/sim.hpp"
#include "test_util.hpp"

using namespace subcomp;

TEST_CASE("Wilson 95% interval: frozen values and basic shape") {
  auto [lo0, hi0] = wilson_interval_95(0, 100);
  CHECK(lo0 <= 1e-15);
  CHECK(hi0 == doctest::Approx(0.03699349820698568).epsilon(1e-12));
  auto [lo5, hi5] = wilson_interval_95(5, 100);
  CHECK(lo5 == doctest::Approx(0.02154367915436796).epsilon(1e-12));
  CHECK(hi5 == doctest::Approx(0.11175046923191913).epsilon(1e-12));
  auto [loA, hiA] = wilson_interval_95(100, 100);
  CHECK(loA == doctest::Approx(0.9630065017930143).epsilon(1e-12));
  CHECK(hiA == 1.0);
  auto [loH, hiH] = wilson_interval_95(1, 2);
  CHECK(loH == doctest::Approx(0.09453120573423074).epsilon(1e-12));
  CHECK(hiH == doctest::Approx(0.9054687942657693).epsilon(1e-12));
  CHECK_THROWS_AS(wilson_interval_95(0, 0), std::invalid_argument);
}

TEST_CASE("a full-rank square encoder never fails") {
  const JointDist d = make_family(Example1Family{0.1, 0.2});
  const Subspace w = Subspace::span(d.field(), 4, {{1, 1, 1, 1}});
  SimConfig cfg;
  cfg.n = 6;
  cfg.trials = 50;
  cfg.seed = 5;
  const SimResult r = simulate_cc_with_matrix(d, w, cfg, FieldMatrix::identity(d.field(), 6));
  CHECK(r.failures == 0);
  CHECK(r.empirical_pe == 0.0);
  CHECK(r.coset.min_size == 1);
  CHECK(r.coset.max_size == 1);
  CHECK(r.k == 6);
}

TEST_CASE("uniform sources make every coset word tie: certain failure") {
  const JointDist d = make_family(UniformFamily{2, 2});
  const Subspace w = Subspace::full(d.field(), 2);
  SimConfig cfg;
  cfg.n = 2;
  cfg.k = 1;
  cfg.trials = 40;
  cfg.seed = 9;
  const SimResult r = simulate_cc(d, w, cfg);
  CHECK(r.failures == r.trials);
  CHECK(r.empirical_pe == 1.0);
  CHECK(r.coset.min_size >= 4);  // q^((n-k)s) = 16 for full-rank draws... at least 2^(1*2)

  SimConfig zero = cfg;
  zero.k = 0;
  const SimResult rz = simulate_cc(d, w, zero);
  CHECK(rz.k == 0);
  CHECK(rz.failures == rz.trials);
  CHECK(rz.coset.min_size == 16);  // the whole space q^(n*m)
}

TEST_CASE("trivial side information reproduces the plain scheme") {
  const JointDist d = make_family(OptSsFamily{4, 0.11});
  const Subspace w = Subspace::span(d.field(), 4, {{1, 1, 0, 0}, {0, 0, 1, 1}});
  SimConfig cfg;
  cfg.n = 10;
  cfg.rate_bits = 0.7;
  cfg.trials = 200;
  cfg.seed = 17;
  const SimResult plain = simulate_cc(d, w, cfg);
  const SimResult with0 = simulate_cc_side_info(d, w, Subspace::zero(d.field(), 4), cfg);
  CHECK(plain.failures == with0.failures);
  CHECK(plain.k == with0.k);
  CHECK(plain.coset.max_size == with0.coset.max_size);
}

TEST_CASE("genie side information conditions on the known blocks") {
  const JointDist d = make_family(OptSsFamily{4, 0.11});
  const Subspace w = Subspace::full(d.field(), 4);
  const Subspace s = Subspace::span(d.field(), 4, {{1, 1, 0, 0}, {0, 0, 1, 1}});
  SimConfig cfg;
  cfg.n = 8;
  cfg.rate_bits = 1.0;
  cfg.trials = 100;
  cfg.seed = 23;
  const SimResult r = simulate_cc_side_info(d, w, s, cfg);
  CHECK(r.trials == 100);
  CHECK(r.empirical_pe >= 0.0);
  CHECK(r.empirical_pe <= 1.0);
  CHECK(r.ci_lo <= r.empirical_pe);
  CHECK(r.empirical_pe <= r.ci_hi);

  CHECK_THROWS_AS(simulate_cc_side_info(d, w, w, cfg), std::invalid_argument);
  const Subspace not_inside = Subspace::span(d.field(), 4, {{1, 0, 0, 0}});
  const Subspace small = Subspace::span(d.field(), 4, {{1, 1, 0, 0}});
  CHECK_THROWS_AS(simulate_cc_side_info(d, small, not_inside, cfg), std::invalid_argument);
}

TEST_CASE("single-stage nested run equals the common code stage by stage") {
  const JointDist d = make_family(OptSsFamily{2, 0.11});
  const Subspace w = Subspace::span(d.field(), 2, {{1, 1}});
  SimConfig cfg;
  cfg.n = 14;
  cfg.trials = 300;
  cfg.seed = 31;
  cfg.stage_rates_bits = {0.65};
  const NestedSimResult nested = simulate_nested(d, w, cfg);
  REQUIRE(nested.stages.size() == 1);
  CHECK(nested.target_link == 1);

  SimConfig flat = cfg;
  flat.stage_rates_bits.clear();
  flat.rate_bits = 0.65;
  const SimResult cc = simulate_cc(d, w, flat);
  CHECK(nested.stages[0].failures == cc.failures);
  CHECK(nested.stages[0].k == cc.k);
  CHECK(nested.end_to_end.failures == cc.failures);
}

TEST_CASE("multi-stage nested run respects the union bound") {
  const JointDist d = make_family(Example1Family{0.1, 0.2});
  const Subspace w = Subspace::span(d.field(), 4, {{1, 1, 1, 1}});
  SimConfig cfg;
  cfg.n = 12;
  cfg.trials = 250;
  cfg.seed = 37;
  const NestedSimResult r = simulate_nested(d, w, cfg);
  REQUIRE(r.stages.size() == 2);
  CHECK(r.target_link == 2);
  long stage_sum = 0, stage_max = 0;
  for (const SimResult& s : r.stages) {
    stage_sum += s.failures;
    stage_max = std::max(stage_max, s.failures);
  }
  CHECK(r.end_to_end.failures <= stage_sum);
  CHECK(r.end_to_end.failures >= stage_max);
  // Stacked encoders: row counts never decrease.
  for (size_t l = 1; l < r.stage_k.size(); ++l) CHECK(r.stage_k[l] >= r.stage_k[l - 1]);
  CHECK(r.end_to_end.k == r.stage_k.back());
}

TEST_CASE("identical configurations reproduce identical results") {
  const JointDist d = make_family(OptSsFamily{2, 0.2});
  const Subspace w = Subspace::span(d.field(), 2, {{1, 1}});
  SimConfig cfg;
  cfg.n = 10;
  cfg.rate_bits = 0.8;
  cfg.trials = 150;
  cfg.seed = 77;
  const SimResult a = simulate_cc(d, w, cfg);
  const SimResult b = simulate_cc(d, w, cfg);
  CHECK(a.failures == b.failures);
  CHECK(a.empirical_pe == b.empirical_pe);
  CHECK(a.ci_lo == b.ci_lo);
  CHECK(a.coset.mean_size == b.coset.mean_size);

  SimConfig other = cfg;
  other.seed = 78;
  const SimResult c = simulate_cc(d, w, other);
  CHECK((a.failures != c.failures || a.coset.mean_size != c.coset.mean_size));
}

TEST_CASE("fixed-matrix mode keeps one encoder for the whole run") {
  const JointDist d = make_family(OptSsFamily{2, 0.2});
  const Subspace w = Subspace::span(d.field(), 2, {{1, 1}});
  SimConfig cfg;
  cfg.n = 12;
  cfg.rate_bits = 0.7;
  cfg.trials = 120;
  cfg.seed = 41;
  cfg.matrix_mode = MatrixMode::FixedPerRun;
  const SimResult r = simulate_cc(d, w, cfg);
  CHECK(r.coset.min_size == r.coset.max_size);  // same nullspace every trial
}

TEST_CASE("row-count resolution from rates") {
  const JointDist d = make_family(UniformFamily{2, 2});
  const Subspace w = Subspace::span(d.field(), 2, {{1, 1}});
  SimConfig cfg;
  cfg.n = 10;
  cfg.trials = 5;
  cfg.seed = 1;

  cfg.rate_bits = 2.0;  // above log2(q): clamps to k = n
  CHECK(simulate_cc(d, w, cfg).k == 10);

  cfg.rate_bits = 0.0;
  CHECK(simulate_cc(d, w, cfg).k == 0);

  cfg.rate_bits = 0.35;
  CHECK(simulate_cc(d, w, cfg).k == 4);  // ceil(3.5)

  cfg.k = 7;  // explicit k wins over the rate
  CHECK(simulate_cc(d, w, cfg).k == 7);

  cfg.k.reset();
  cfg.rate_bits.reset();
  CHECK_THROWS_AS(simulate_cc(d, w, cfg), std::invalid_argument);
}

TEST_CASE("oversized cosets are rejected up front") {
  const JointDist d = make_family(UniformFamily{2, 2});
  const Subspace w = Subspace::full(d.field(), 2);
  SimConfig cfg;
  cfg.n = 40;
  cfg.k = 0;
  cfg.trials = 1;
  CHECK_THROWS_AS(simulate_cc(d, w, cfg), budget_error);
}

TEST_CASE("empirical annihilation probability matches the power law") {
  const FieldOrder f2(2);
  const long matrices = 20000;
  for (const auto& [k, n, nu] : std::vector<std::tuple<int, int, size_t>>{
           {3, 5, 2}, {2, 4, 1}, {4, 6, 2}}) {
    const FieldMatrix delta = random_matrix_of_rank(f2, size_t(n), nu, nu, 99 + k);
    const double expected = std::pow(2.0, -double(k) * double(nu));
    const double emp = empirical_annihilation_probability(f2, k, n, delta, matrices, 7);
    const double sigma = std::sqrt(expected * (1 - expected) / double(matrices));
    CHECK(std::abs(emp - expected) <= 3 * sigma);
  }
  const FieldMatrix delta = random_matrix_of_rank(f2, 4, 2, 2, 5);
  CHECK_THROWS_AS(empirical_annihilation_probability(f2, 0, 4, delta, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("rank-conditioned matrices have exactly the requested rank") {
  for (unsigned q : {2u, 3u}) {
    const FieldOrder f(q);
    for (size_t rank = 0; rank <= 3; ++rank) {
      const FieldMatrix m = random_matrix_of_rank(f, 4, 3, rank, 1000 + rank);
      CHECK(rank_of(m) == rank);
    }
  }
  const FieldMatrix a = random_matrix_of_rank(FieldOrder(2), 4, 4, 2, 5);
  const FieldMatrix b = random_matrix_of_rank(FieldOrder(2), 4, 4, 2, 5);
  CHECK(a == b);  // deterministic in the seed
  CHECK_THROWS_AS(random_matrix_of_rank(FieldOrder(2), 2, 3, 3, 1), std::invalid_argument);
}

TEST_CASE("rate sweeps cover the grid and report the trend") {
  const JointDist d = make_family(OptSsFamily{2, 0.11});
  const Subspace w = Subspace::span(d.field(), 2, {{1, 1}});
  SimConfig base;
  base.trials = 200;
  base.seed = 3;
  const SweepTable t = rate_sweep(d, w, "cc", {8, 12}, {0.3, 0.6, 0.9}, base);
  REQUIRE(t.rows.size() == 6);
  CHECK(t.rows[0].n == 8);
  CHECK(t.rows[3].n == 12);
  CHECK(t.rows[0].rate_bits == 0.3);
  CHECK(t.rows[2].rate_bits == 0.9);
  CHECK(t.monotone_fraction >= 0.0);
  CHECK(t.monotone_fraction <= 1.0);
  const std::string csv = sweep_csv(t);
  CHECK(csv.rfind("scheme,n,k,rate_bits,trials,failures,pe,ci_lo,ci_hi\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK_THROWS_AS(rate_sweep(d, w, "ss", {8}, {0.5}, base), std::invalid_argument);
  CHECK_THROWS_AS(rate_sweep(d, w, "cc", {}, {0.5}, base), std::invalid_argument);
}
