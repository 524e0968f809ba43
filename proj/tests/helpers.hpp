#pragma once

#include <omp.h>

#include <filesystem>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "alliance/config.hpp"
#include "alliance/graph.hpp"
#include "alliance/instance.hpp"
#include "alliance/partition.hpp"

namespace testing {

inline alliance::MultiAttributeGraph graph_of(std::initializer_list<alliance::ScheduleRecord> rows) {
  const std::vector<alliance::ScheduleRecord> v(rows);
  return alliance::MultiAttributeGraph::build(v);
}

inline alliance::GeneratorSpec toy_spec(std::uint64_t seed) {
  alliance::GeneratorSpec s;
  s.n_airports = 20;
  s.n_segment_records = 2000;
  s.n_carriers = 6;
  s.seed = seed;
  return s;
}

inline alliance::MultiAttributeGraph small_random_graph(std::uint64_t seed, std::uint32_t airports,
                                                        std::uint32_t records, std::uint32_t carriers) {
  alliance::GeneratorSpec s;
  s.n_airports = airports;
  s.n_segment_records = records;
  s.n_carriers = carriers;
  s.seed = seed;
  return alliance::generate_instance(s);
}

inline alliance::AlliancePartition random_partition(std::size_t carriers, std::uint32_t k, std::mt19937_64& rng) {
  std::vector<std::uint32_t> a(carriers);
  std::uniform_int_distribution<std::uint32_t> d(0, k - 1);
  for (auto& x : a) x = d(rng);
  return alliance::AlliancePartition(a, k);
}

// Runs f with the OpenMP team size pinned, restoring the previous value.
template <typename F>
auto with_threads(int n, F&& f) {
  const int before = omp_get_max_threads();
  omp_set_num_threads(n);
  struct Restore {
    int n;
    ~Restore() { omp_set_num_threads(n); }
  } restore{before};
  return f();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("alliance_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing
