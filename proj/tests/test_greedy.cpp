#include <doctest.h>

#include <chrono>
#include <random>

#include "alliance/error.hpp"
#include "alliance/greedy.hpp"
#include "alliance/metrics.hpp"
#include "helpers.hpp"

using namespace alliance;

namespace {

Realization toy_realization(std::uint64_t seed, std::uint32_t carriers = 6) {
  const auto g = testing::small_random_graph(seed, 20, 2000, carriers);
  SamplingConfig cfg;
  cfg.seed = seed;
  return draw_realization(g, cfg);
}

// Blocks made only of the first `group` carriers gain by merging; any merge
// touching another carrier loses. Gains depend only on the two blocks.
class GroupStub final : public MergeObjective {
 public:
  GroupStub(std::size_t n, std::size_t group) : label_(n), pure_(n), group_(group) {
    for (std::size_t i = 0; i < n; ++i) {
      label_[i] = static_cast<std::uint32_t>(i);
      pure_[i] = i < group;
    }
  }
  AlliancePartition initial_partition() const override {
    return AlliancePartition::singletons(label_.size());
  }
  double value() const override { return value_; }
  double gain(std::uint32_t p, std::uint32_t q) const override { return pure_[p] && pure_[q] ? 1.0 : -1.0; }
  void merge(std::uint32_t p, std::uint32_t q) override {
    value_ += gain(p, q);
    pure_[p] = pure_[p] && pure_[q];
  }
  double standalone(std::uint32_t p) const override { return pure_[p] ? 1.0 : 0.0; }

 private:
  std::vector<std::uint32_t> label_;
  std::vector<bool> pure_;
  std::size_t group_;
  double value_ = 0.0;
};

}  // namespace

TEST_CASE("no merge improves when only concentration is penalised") {
  const auto r = toy_realization(1);
  const auto t = greedy_partition(r, 6, r.segments.segment_count(), 0.7, 0.0);
  CHECK(t.completed_merges() == 0);
  CHECK(t.partition.alliance_count() == 6);
}

TEST_CASE("greedy bookkeeping and monotone trace") {
  for (std::uint64_t seed : {1, 2, 3, 4}) {
    const auto r = toy_realization(seed);
    const auto t = greedy_partition(r, 6, r.segments.segment_count(), 0.7, 0.3);
    CHECK(t.partition.alliance_count() == 6 - t.completed_merges());
    double prev = t.initial_objective;
    for (const auto& s : t.steps) {
      CHECK(s.objective > prev);
      prev = s.objective;
    }
    CHECK(t.final_objective() == doctest::Approx(estimate_objective(t.partition, r, 0.7, 0.3).objective).epsilon(1e-12));
    CHECK(t.initial_objective ==
          doctest::Approx(estimate_objective(AlliancePartition::singletons(6), r, 0.7, 0.3).objective).epsilon(1e-12));
  }
}

TEST_CASE("incremental greedy follows the naive re-evaluating greedy") {
  for (std::uint64_t seed : {5, 6, 7, 8, 9}) {
    for (double beta : {0.25, 0.7}) {
      const auto r = toy_realization(seed, 8);
      const auto fast = greedy_partition(r, 8, r.segments.segment_count(), beta, 1.0 - beta);
      const auto slow = reference::greedy_partition(r, 8, beta, 1.0 - beta);
      REQUIRE(fast.completed_merges() == slow.completed_merges());
      for (std::size_t i = 0; i < fast.steps.size(); ++i) {
        CHECK(fast.steps[i].p == slow.steps[i].p);
        CHECK(fast.steps[i].q == slow.steps[i].q);
        CHECK(fast.steps[i].objective == doctest::Approx(slow.steps[i].objective).epsilon(1e-12));
      }
      CHECK(fast.partition == slow.partition);
    }
  }
}

TEST_CASE("greedy is identical across thread counts") {
  const auto r = toy_realization(11, 8);
  const auto one = testing::with_threads(1, [&] { return greedy_partition(r, 8, r.segments.segment_count(), 0.7, 0.3); });
  const auto four = testing::with_threads(4, [&] { return greedy_partition(r, 8, r.segments.segment_count(), 0.7, 0.3); });
  REQUIRE(one.steps.size() == four.steps.size());
  for (std::size_t i = 0; i < one.steps.size(); ++i) CHECK(one.steps[i].objective == four.steps[i].objective);
  CHECK(one.partition == four.partition);
}

TEST_CASE("pair sampling with every pair as a candidate is the exhaustive greedy") {
  const auto r = toy_realization(12, 8);
  const auto full = greedy_partition(r, 8, r.segments.segment_count(), 0.7, 0.3);
  const auto sampled = greedy_pair_sampling(r, 8, r.segments.segment_count(), 0.7, 0.3, 28);
  CHECK(full.partition == sampled.partition);
  CHECK(full.completed_merges() == sampled.completed_merges());
}

TEST_CASE("pair sampling with one candidate terminates and never worsens") {
  const auto r = toy_realization(13, 8);
  const auto t = greedy_pair_sampling(r, 8, r.segments.segment_count(), 0.7, 0.3, 1);
  CHECK(t.partition.alliance_count() == 8 - t.completed_merges());
  CHECK(t.final_objective() >= t.initial_objective);
  CHECK_THROWS_AS(greedy_pair_sampling(r, 8, r.segments.segment_count(), 0.7, 0.3, 0), ConfigError);
}

TEST_CASE("forced merge run on a stub objective") {
  GroupStub stub(580, 366);
  const auto start = std::chrono::steady_clock::now();
  const auto t = greedy_merge(stub);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(t.completed_merges() == 365);
  CHECK(t.partition.alliance_count() == 215);
  CHECK(t.initial_alliance_count == 580);
  CHECK(secs < 1.0);
}

TEST_CASE("max_merges caps the run") {
  GroupStub stub(20, 10);
  GreedyOptions o;
  o.max_merges = 3;
  const auto t = greedy_merge(stub, o);
  CHECK(t.completed_merges() == 3);
  CHECK(t.partition.alliance_count() == 17);
}

TEST_CASE("greedy from a non-singleton start") {
  const auto r = toy_realization(14);
  const AlliancePartition start({0, 0, 1, 1, 2, 2}, 3);
  EstimatedObjective obj(r, 6, r.segments.segment_count(), 0.7, 0.3, start);
  CHECK(obj.value() == doctest::Approx(estimate_objective(start, r, 0.7, 0.3).objective).epsilon(1e-12));
  const auto t = greedy_merge(obj);
  CHECK(t.initial_alliance_count == 3);
  CHECK(t.partition.alliance_count() == 3 - t.completed_merges());
}
