#include "alliance/partition.hpp"

#include <algorithm>
#include <string>

#include "alliance/error.hpp"

namespace alliance {

AlliancePartition::AlliancePartition(std::vector<std::uint32_t> alliance_of, std::uint32_t alliance_count)
    : alliance_of_(std::move(alliance_of)), alliance_count_(alliance_count) {
  if (alliance_count_ == 0 && !alliance_of_.empty()) throw ConfigError("partition needs K >= 1");
  for (std::size_t c = 0; c < alliance_of_.size(); ++c) {
    if (alliance_of_[c] >= alliance_count_) {
      throw ConfigError("carrier " + std::to_string(c) + " assigned to alliance " +
                        std::to_string(alliance_of_[c] + 1) + " > K=" + std::to_string(alliance_count_));
    }
  }
}

AlliancePartition AlliancePartition::singletons(std::size_t carriers) {
  std::vector<std::uint32_t> a(carriers);
  for (std::size_t c = 0; c < carriers; ++c) a[c] = static_cast<std::uint32_t>(c);
  return AlliancePartition(std::move(a), static_cast<std::uint32_t>(carriers));
}

AlliancePartition AlliancePartition::single_alliance(std::size_t carriers) {
  return AlliancePartition(std::vector<std::uint32_t>(carriers, 0), 1);
}

AlliancePartition AlliancePartition::from_blocks(const std::vector<std::uint8_t>& rgs) {
  std::vector<std::uint32_t> a(rgs.begin(), rgs.end());
  std::uint32_t k = 0;
  for (auto b : a) k = std::max(k, b + 1);
  return AlliancePartition(std::move(a), k);
}

std::vector<std::vector<CarrierIndex>> AlliancePartition::members() const {
  std::vector<std::vector<CarrierIndex>> out(alliance_count_);
  for (CarrierIndex c = 0; c < alliance_of_.size(); ++c) out[alliance_of_[c]].push_back(c);
  return out;
}

std::uint32_t AlliancePartition::occupied_count() const {
  std::vector<bool> seen(alliance_count_, false);
  std::uint32_t n = 0;
  for (auto a : alliance_of_) {
    if (!seen[a]) {
      seen[a] = true;
      ++n;
    }
  }
  return n;
}

AlliancePartition AlliancePartition::merged(std::uint32_t into, std::uint32_t absorbed) const {
  if (into >= alliance_count_ || absorbed >= alliance_count_) throw ConfigError("merge: alliance out of range");
  AlliancePartition out = *this;
  for (auto& a : out.alliance_of_) {
    if (a == absorbed) a = into;
  }
  return out;
}

AlliancePartition AlliancePartition::canonical() const {
  std::vector<std::uint32_t> relabel(alliance_count_, kNoIndex);
  std::vector<std::uint32_t> a(alliance_of_.size());
  std::uint32_t next = 0;
  for (std::size_t c = 0; c < alliance_of_.size(); ++c) {
    auto& r = relabel[alliance_of_[c]];
    if (r == kNoIndex) r = next++;
    a[c] = r;
  }
  return AlliancePartition(std::move(a), std::max<std::uint32_t>(next, alliance_of_.empty() ? 0 : 1));
}

AlliancePartition AlliancePartition::relabeled(const std::vector<std::uint32_t>& perm) const {
  if (perm.size() != alliance_count_) throw ConfigError("relabel: permutation size mismatch");
  std::vector<std::uint32_t> a(alliance_of_.size());
  for (std::size_t c = 0; c < a.size(); ++c) a[c] = perm[alliance_of_[c]];
  return AlliancePartition(std::move(a), alliance_count_);
}

}  // namespace alliance
