#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "recollab/errors.hpp"

namespace recollab {

/// Dense actor index assigned at ingestion, in first-seen order.
using ActorId = std::uint32_t;

/// One timestamped multi-actor event. Actor ids are sorted and duplicate-free;
/// duplicate mentions in the input collapse silently.
struct PublicationRecord {
  std::string id;
  std::int64_t time = 0;
  std::vector<ActorId> actors;

  bool operator==(const PublicationRecord&) const = default;
};

/// Event list in input order plus the label<->id bijection.
struct Corpus {
  std::vector<PublicationRecord> records;
  std::vector<std::string> actor_labels;
  std::unordered_map<std::string, ActorId> actor_ids;

  ActorId intern(const std::string& label);
  const std::string& label(ActorId id) const;
  std::optional<ActorId> find_actor(const std::string& label) const;
  std::size_t actor_count() const { return actor_labels.size(); }
};

/// Canonical identity of a distinct actor subset: sorted, unique, size >= 2.
struct HyperedgeKey {
  std::vector<ActorId> members;

  static HyperedgeKey from_actors(std::vector<ActorId> actors);
  std::size_t cardinality() const { return members.size(); }
  bool operator==(const HyperedgeKey&) const = default;
};

struct HyperedgeKeyHash {
  std::size_t operator()(const HyperedgeKey& key) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (ActorId a : key.members) {
      h ^= a;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Contiguous indexing of distinct actor subsets seen in the training window.
/// Frozen after the training scan; lookups on unseen keys then return nullopt
/// instead of allocating.
class HyperedgeRegistry {
 public:
  std::uint32_t insert(const HyperedgeKey& key);
  std::optional<std::uint32_t> lookup(const HyperedgeKey& key) const;
  const HyperedgeKey& key(std::uint32_t index) const;
  std::size_t size() const { return keys_.size(); }
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

 private:
  std::unordered_map<HyperedgeKey, std::uint32_t, HyperedgeKeyHash> index_;
  std::vector<HyperedgeKey> keys_;
  bool frozen_ = false;
};

/// Contiguous indexing of distinct unordered actor pairs from the training
/// clique expansions. Pairs are stored smaller id first.
class EdgeRegistry {
 public:
  std::uint32_t insert(ActorId a, ActorId b);
  std::optional<std::uint32_t> lookup(ActorId a, ActorId b) const;
  const std::pair<ActorId, ActorId>& pair(std::uint32_t index) const;
  std::size_t size() const { return pairs_.size(); }
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

 private:
  static std::uint64_t pack(ActorId a, ActorId b);

  std::unordered_map<std::uint64_t, std::uint32_t> index_;
  std::vector<std::pair<ActorId, ActorId>> pairs_;
  bool frozen_ = false;
};

/// Half-open tiling of the training window into N_t snapshots of equal width:
/// snapshot t covers [origin + t*width, origin + (t+1)*width).
struct SnapshotScheme {
  std::int64_t origin = 0;
  std::int64_t width = 1;
  std::uint32_t count = 0;

  std::int64_t end() const { return origin + width * static_cast<std::int64_t>(count); }
};

/// Snapshot index of a time point; throws if outside the covered window.
std::uint32_t snapshot_of(std::int64_t time, const SnapshotScheme& scheme);

/// Inclusive training and test windows; the gap between them is discarded.
struct SplitSpec {
  std::int64_t train_start = 0;
  std::int64_t train_end = 0;
  std::int64_t test_start = 0;
  std::int64_t test_end = 0;

  void validate() const;
  bool operator==(const SplitSpec&) const = default;
};

}  // namespace recollab
