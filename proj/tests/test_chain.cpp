#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "subcomp/chain.hpp"
#include "subcomp/dist.hpp"
#include "subcomp/sim.hpp"
#include "test_util.hpp"

using namespace subcomp;
using testutil::h2;

TEST_CASE("chain of the two-parameter mixture: three strictly finer links") {
  const JointDist d = make_family(Example1Family{0.1, 0.2});
  const SubspaceChain chain = decompose(d);
  const FieldOrder f2(2);
  REQUIRE(chain.length() == 3);
  CHECK(chain.links[0].subspace == Subspace::span(f2, 4, {{1, 1, 0, 0}, {0, 1, 1, 0}}));
  CHECK(chain.links[1].subspace ==
        Subspace::span(f2, 4, {{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}}));
  CHECK(chain.links[2].subspace == Subspace::full(f2, 4));
  CHECK(chain.links[0].cond_norm_entropy_bits == doctest::Approx(h2(0.1)).epsilon(1e-9));
  CHECK(chain.links[1].cond_norm_entropy_bits == doctest::Approx(h2(0.2)).epsilon(1e-9));
  CHECK(chain.links[2].cond_norm_entropy_bits == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(chain.link(0).is_zero());
  CHECK(chain.link(3).is_full());
}

TEST_CASE("chain of the cumulative-sum family has two links") {
  const JointDist d = make_family(OptSsFamily{4, 0.11});
  const SubspaceChain chain = decompose(d);
  const FieldOrder f2(2);
  REQUIRE(chain.length() == 2);
  CHECK(chain.links[0].subspace == Subspace::span(f2, 4, {{1, 1, 0, 0}, {0, 0, 1, 1}}));
  CHECK(chain.links[0].cond_norm_entropy_bits == doctest::Approx(h2(0.11)).epsilon(1e-9));
  CHECK(chain.links[1].subspace.is_full());
  CHECK(chain.links[1].cond_norm_entropy_bits == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("uniform law collapses the chain to a single link") {
  const JointDist d = make_family(UniformFamily{3, 2});
  const SubspaceChain chain = decompose(d);
  REQUIRE(chain.length() == 1);
  CHECK(chain.links[0].subspace.is_full());
  CHECK(chain.links[0].cond_norm_entropy_bits == doctest::Approx(std::log2(3.0)).epsilon(1e-9));
}

TEST_CASE("least-entropy set: known members and closure under sums") {
  const JointDist d = make_family(Example1Family{0.1, 0.2});
  const FieldOrder f2(2);
  const auto s0 = min_entropy_set(d, Subspace::zero(f2, 4));
  CHECK(s0.size() == 3);
  CHECK(s0.count(Subspace::span(f2, 4, {{1, 1, 0, 0}})) == 1);
  CHECK(s0.count(Subspace::span(f2, 4, {{0, 1, 1, 0}})) == 1);
  CHECK(s0.count(Subspace::span(f2, 4, {{1, 1, 0, 0}, {0, 1, 1, 0}})) == 1);

  const JointDist u = make_family(UniformFamily{2, 3});
  const auto su = min_entropy_set(u, Subspace::zero(FieldOrder(2), 3));
  CHECK(su.size() == 15);  // every nonzero subspace ties at log2 q

  // Closure under addition on random instances.
  std::mt19937_64 rng(7);
  int checked = 0;
  for (uint64_t seed = 1; seed <= 12; ++seed) {
    const JointDist r = testutil::random_positive_dist(2, 3, seed);
    const Subspace w0 = testutil::random_subspace(rng, r.field(), 3, rng() % 3);
    if (w0.is_full()) continue;
    const auto s = min_entropy_set(r, w0);
    for (const Subspace& a : s)
      for (const Subspace& b : s) {
        CHECK(s.count(subspace_sum(a, b)) == 1);
        ++checked;
      }
  }
  CHECK(checked > 0);
}

TEST_CASE("the next link is the sum of the least-entropy set") {
  const JointDist d = make_family(Example1Family{0.1, 0.2});
  const FieldOrder f2(2);
  const Subspace w1 = next_link(d, Subspace::zero(f2, 4));
  CHECK(w1 == Subspace::span(f2, 4, {{1, 1, 0, 0}, {0, 1, 1, 0}}));
  const Subspace w2 = next_link(d, w1);
  CHECK(w2 == Subspace::span(f2, 4, {{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}}));
  CHECK_THROWS_AS(next_link(d, Subspace::full(f2, 4)), std::invalid_argument);
}

TEST_CASE("chain structure holds on random positive distributions") {
  for (uint64_t seed = 21; seed <= 32; ++seed) {
    const unsigned q = seed % 2 ? 2 : 3;
    const size_t m = 2 + seed % 3;
    const JointDist d = testutil::random_positive_dist(q, m, seed);
    SubspaceEntropyCache cache(d);
    ChainOptions opts;
    const SubspaceChain chain = decompose(cache, opts);
    REQUIRE(chain.length() >= 1);
    CHECK(chain.links.back().subspace.is_full());
    for (size_t j = 1; j <= chain.length(); ++j) {
      CHECK(chain.link(j).contains(chain.link(j - 1)));
      CHECK(chain.link(j).dim() > chain.link(j - 1).dim());
      // The stored values are the normalized conditional entropies.
      CHECK(chain.links[j - 1].cond_norm_entropy_bits ==
            doctest::Approx(cache.ncond(chain.link(j), chain.link(j - 1))).epsilon(1e-12));
      if (j >= 2)
        CHECK(chain.links[j - 1].cond_norm_entropy_bits >
              chain.links[j - 2].cond_norm_entropy_bits);
    }
    // first_link_containing is the minimal covering index.
    for (const Subspace& w : enumerate_subspaces(d.field(), m)) {
      if (w.is_zero()) continue;
      const size_t j0 = chain.first_link_containing(w);
      CHECK(chain.link(j0).contains(w));
      if (j0 >= 2) CHECK_FALSE(chain.link(j0 - 1).contains(w));
    }
  }
}

TEST_CASE("independent-mixture fast path agrees with the generic chain") {
  std::mt19937_64 rng(1234);
  int instances = 0;
  for (uint64_t seed = 1; instances < 30; ++seed) {
    const size_t m = 2 + seed % 3;
    const FieldOrder f2(2);
    const FieldMatrix g = random_matrix_of_rank(f2, m, m, m, seed * 13 + 5);
    std::vector<std::vector<double>> marginals;
    std::vector<double> ents;
    std::vector<double> ps;
    for (size_t i = 0; i < m; ++i) {
      double p;
      if (!ps.empty() && rng() % 3 == 0) {
        p = ps[rng() % ps.size()];  // force ties between components
      } else {
        p = 0.05 + 0.4 * (double(rng() >> 11) * 0x1.0p-53);
      }
      ps.push_back(p);
      marginals.push_back({1.0 - p, p});
      ents.push_back(h2(p));
    }
    const JointDist d = make_family(IndependentMixFamily{g, marginals});
    const SubspaceChain generic = decompose(d);
    const SubspaceChain fast = decompose_independent(g, ents);
    REQUIRE(generic.length() == fast.length());
    for (size_t j = 0; j < generic.length(); ++j) {
      CHECK(generic.links[j].subspace == fast.links[j].subspace);
      CHECK(generic.links[j].cond_norm_entropy_bits ==
            doctest::Approx(fast.links[j].cond_norm_entropy_bits).epsilon(1e-9));
    }
    ++instances;
  }
}

TEST_CASE("fast path validates its inputs") {
  FieldOrder f2(2);
  const auto singular = FieldMatrix::from_rows(f2, {{1, 1}, {1, 1}}, 2);
  CHECK_THROWS_AS(decompose_independent(singular, {0.5, 0.6}), std::invalid_argument);
  const auto g = FieldMatrix::identity(f2, 2);
  CHECK_THROWS_AS(decompose_independent(g, {0.5}), std::invalid_argument);        // count
  CHECK_THROWS_AS(decompose_independent(g, {0.5, 0.0}), std::invalid_argument);   // zero entropy
}

TEST_CASE("degenerate sources are rejected with a certificate") {
  FieldOrder f2(2);
  const JointDist deg(f2, 2, {0.5, 0.0, 0.0, 0.5});
  CHECK_THROWS_AS(decompose(deg), std::invalid_argument);
  CHECK_THROWS_AS(min_entropy_set(deg, Subspace::zero(f2, 2)), std::invalid_argument);
}
