#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "alliance/error.hpp"
#include "alliance/metrics.hpp"
#include "helpers.hpp"
#include "oracles/walk_enumeration.hpp"

using namespace alliance;
using testing::graph_of;

TEST_CASE("objective arithmetic") {
  const auto a = objective(0.636, -2.426, 0.7, 0.3);
  CHECK(a.objective == doctest::Approx(-1.1730).epsilon(1e-4));
  CHECK(std::fabs(a.objective - (-0.7 * 0.636 + 0.3 * -2.426)) < 1e-15);
  const auto b = objective(0.8073, -8.7856, 0.25, 0.75);
  CHECK(std::fabs(b.objective - (-6.791)) < 5e-4);
  CHECK_THROWS_AS(objective(0.5, -1.0, -0.1, 0.3), ConfigError);
}

TEST_CASE("pairwise_sum is exact on integers and order-shape stable") {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(pairwise_sum(v) == 500500.0);
  CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
}

TEST_CASE("exact HHI on hand-built segments") {
  const auto g = graph_of({{"A", "B", "x", 1.0}, {"A", "B", "y", 1.0}, {"B", "A", "x", 5.0}});
  const auto s = AlliancePartition::singletons(2);
  CHECK(hhi_segment_exact(g, s, 0, 1) == doctest::Approx(0.5));
  CHECK(hhi_segment_exact(g, s, 1, 0) == 1.0);
  CHECK(hhi_segment_exact(g, AlliancePartition::single_alliance(2), 0, 1) == doctest::Approx(1.0));
  CHECK(hhi_mean_exact(g, s) == doctest::Approx(0.75));
  CHECK_THROWS_AS(hhi_segment_exact(g, s, 0, 0), DataError);
  CHECK_THROWS_AS(hhi_mean_exact(g, AlliancePartition::singletons(3)), IntegrityError);
}

TEST_CASE("HHI estimate from counts") {
  const std::vector<CarrierIndex> draws{0, 0, 1, 2};
  const AlliancePartition p({0, 1, 1}, 2);
  CHECK(hhi_segment_estimate(draws, p) == doctest::Approx(0.5));
  CHECK_THROWS_AS(hhi_segment_estimate(std::span<const CarrierIndex>{}, p), ConfigError);
}

TEST_CASE("depth recursion equals walk enumeration when walks cannot truncate") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto g = testing::small_random_graph(seed, 5, 14, 3);
    std::mt19937_64 rng(seed);
    const auto p = testing::random_partition(3, 2, rng);
    for (std::uint32_t L : {1u, 2u}) {
      const auto exact = mpc_exact(g, p, L);
      const auto oracle = oracle::enumerate_walks(g, p, L);
      for (std::size_t r = 0; r < exact.root_count(); ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
          CHECK(exact.carrier_at(c, r) == doctest::Approx(oracle.carrier_at(c, r).mean).epsilon(1e-12));
        }
        for (std::size_t k = 0; k < 2; ++k) {
          CHECK(exact.alliance_at(k, r) == doctest::Approx(oracle.alliance_at(k, r).mean).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("depth recursion keeps the 1/depth factor at every level") {
  // Two-airport single-carrier cycle: every step is carrier x, so each walk's
  // indicator fraction is 1, while the recursion gives p(x|i,3) = 2/3.
  const auto g = graph_of({{"A", "B", "x", 1.0}, {"B", "A", "x", 1.0}});
  const auto p = AlliancePartition::singletons(1);
  CHECK(mpc_exact(g, p, 1).carrier_at(0, 0) == doctest::Approx(1.0));
  CHECK(mpc_exact(g, p, 2).carrier_at(0, 0) == doctest::Approx(1.0));
  CHECK(mpc_exact(g, p, 3).carrier_at(0, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(oracle::enumerate_walks(g, p, 3).carrier_at(0, 0).mean == doctest::Approx(1.0));
}

TEST_CASE("alliance penetration is the sum of its members' penetration") {
  const auto g = testing::small_random_graph(9, 10, 80, 4);
  const AlliancePartition p({0, 1, 0, 1}, 2);
  const auto t = mpc_exact(g, p, 3);
  for (std::size_t r = 0; r < t.root_count(); ++r) {
    CHECK(t.alliance_at(0, r) == doctest::Approx(t.carrier_at(0, r) + t.carrier_at(2, r)).epsilon(1e-12));
  }
}

TEST_CASE("MPC floor applies below epsilon") {
  const auto g = graph_of({{"A", "B", "x", 1.0}, {"B", "A", "x", 1.0}, {"A", "B", "y", 1e-9}});
  const auto t = mpc_exact(g, AlliancePartition::singletons(2), 1);
  CHECK(t.floored[1] == 1);
  CHECK(t.w_carrier[1] == std::log(kEpsilonFloor));
  CHECK(t.floored[0] == 0);
}

TEST_CASE("estimators: kernels match references bit for bit across thread counts") {
  const auto g = testing::small_random_graph(4, 25, 500, 6);
  SamplingConfig cfg;
  cfg.n_walks = 13;
  cfg.walk_length = 3;
  cfg.n_segment_samples = 21;
  cfg.seed = 5;
  const auto r = draw_realization(g, cfg);
  std::mt19937_64 rng(1);
  const auto p = testing::random_partition(6, 3, rng);
  const auto ref_h = reference::hhi_segments_estimate(r.segments, p);
  const auto ref_m = reference::mpc_estimate(r.walks, p);
  for (int threads : {1, 4}) {
    testing::with_threads(threads, [&] {
      CHECK(hhi_segments_estimate(r.segments, p) == ref_h);
      const auto m = mpc_estimate(r.walks, p);
      CHECK(m.p_carrier == ref_m.p_carrier);
      CHECK(m.p_alliance == ref_m.p_alliance);
      CHECK(m.w_carrier == ref_m.w_carrier);
      CHECK(estimate_objective(p, r, 0.7, 0.3).objective ==
            objective(pairwise_sum(ref_h) / ref_h.size(), ref_m.mpc_term(), 0.7, 0.3).objective);
      return 0;
    });
  }
}

TEST_CASE("walk estimator normalises truncated walks per walk") {
  // A -> B only: every walk from A has one step even with L = 3.
  const auto g = graph_of({{"A", "B", "x", 1.0}});
  SamplingConfig cfg;
  cfg.n_walks = 10;
  cfg.walk_length = 3;
  cfg.n_segment_samples = 1;
  const auto w = sample_walks(g, cfg);
  const auto t = mpc_estimate(w, AlliancePartition::singletons(1));
  CHECK(t.carrier_at(0, 0) == doctest::Approx(1.0));
  CHECK(t.w_carrier[0] == doctest::Approx(0.0));
}

TEST_CASE("estimated objective is invariant under alliance relabelling") {
  const auto g = testing::small_random_graph(6, 15, 300, 5);
  SamplingConfig cfg;
  cfg.seed = 3;
  const auto r = draw_realization(g, cfg);
  const AlliancePartition p({0, 1, 2, 0, 1}, 3);
  const auto q = p.relabeled({2, 0, 1});
  CHECK(estimate_objective(p, r, 0.7, 0.3).objective ==
        doctest::Approx(estimate_objective(q, r, 0.7, 0.3).objective).epsilon(1e-14));
  CHECK(exact_objective(g, p, 2, 0.7, 0.3).objective ==
        doctest::Approx(exact_objective(g, q, 2, 0.7, 0.3).objective).epsilon(1e-14));
}
