#pragma once

#include <cstdint>
#include <vector>

#include "alliance/config.hpp"
#include "alliance/graph.hpp"
#include "alliance/partition.hpp"

namespace alliance {

/// Random schedule records: each picks a uniform ordered airport pair, a
/// uniform carrier and a log-uniform ASM weight. While some airport has no
/// outgoing record, a record whose origin has another outgoing record is
/// re-drawn from that airport; every pick counts against retry_cap, and
/// exhausting it throws DataError listing the uncovered airports.
std::vector<ScheduleRecord> generate_records(const GeneratorSpec& spec);
MultiAttributeGraph generate_instance(const GeneratorSpec& spec);

/// Seeded stand-in for existing alliances: half of the carriers (rounded up)
/// are dealt round-robin into `alliances` blocks in shuffled order, the rest
/// stay singletons. Labels are canonical.
AlliancePartition baseline_partition(std::size_t carrier_count, std::uint32_t alliances, std::uint64_t seed);

}  // namespace alliance
