#include "recollab/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace recollab {

ActorId Corpus::intern(const std::string& label) {
  auto it = actor_ids.find(label);
  if (it != actor_ids.end()) return it->second;
  const auto id = static_cast<ActorId>(actor_labels.size());
  actor_labels.push_back(label);
  actor_ids.emplace(label, id);
  return id;
}

const std::string& Corpus::label(ActorId id) const {
  if (id >= actor_labels.size()) throw std::out_of_range("actor id out of range");
  return actor_labels[id];
}

std::optional<ActorId> Corpus::find_actor(const std::string& label) const {
  auto it = actor_ids.find(label);
  if (it == actor_ids.end()) return std::nullopt;
  return it->second;
}

HyperedgeKey HyperedgeKey::from_actors(std::vector<ActorId> actors) {
  std::sort(actors.begin(), actors.end());
  actors.erase(std::unique(actors.begin(), actors.end()), actors.end());
  if (actors.size() < 2) throw std::invalid_argument("hyperedge needs at least two distinct actors");
  return HyperedgeKey{std::move(actors)};
}

std::uint32_t HyperedgeRegistry::insert(const HyperedgeKey& key) {
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  if (frozen_) throw std::invalid_argument("hyperedge registry is frozen");
  const auto idx = static_cast<std::uint32_t>(keys_.size());
  keys_.push_back(key);
  index_.emplace(key, idx);
  return idx;
}

std::optional<std::uint32_t> HyperedgeRegistry::lookup(const HyperedgeKey& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const HyperedgeKey& HyperedgeRegistry::key(std::uint32_t index) const {
  if (index >= keys_.size()) throw std::out_of_range("hyperedge index out of range");
  return keys_[index];
}

std::uint64_t EdgeRegistry::pack(ActorId a, ActorId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::uint32_t EdgeRegistry::insert(ActorId a, ActorId b) {
  if (a == b) throw std::invalid_argument("edge endpoints must differ");
  const auto packed = pack(a, b);
  auto it = index_.find(packed);
  if (it != index_.end()) return it->second;
  if (frozen_) throw std::invalid_argument("edge registry is frozen");
  const auto idx = static_cast<std::uint32_t>(pairs_.size());
  pairs_.emplace_back(std::min(a, b), std::max(a, b));
  index_.emplace(packed, idx);
  return idx;
}

std::optional<std::uint32_t> EdgeRegistry::lookup(ActorId a, ActorId b) const {
  auto it = index_.find(pack(a, b));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::pair<ActorId, ActorId>& EdgeRegistry::pair(std::uint32_t index) const {
  if (index >= pairs_.size()) throw std::out_of_range("edge index out of range");
  return pairs_[index];
}

std::uint32_t snapshot_of(std::int64_t time, const SnapshotScheme& scheme) {
  if (scheme.width <= 0) throw std::invalid_argument("snapshot width must be positive");
  if (time < scheme.origin || time >= scheme.end())
    throw std::invalid_argument("time " + std::to_string(time) +
                                " outside the snapshot window [" +
                                std::to_string(scheme.origin) + ", " +
                                std::to_string(scheme.end()) + ")");
  return static_cast<std::uint32_t>((time - scheme.origin) / scheme.width);
}

void SplitSpec::validate() const {
  if (!(train_start <= train_end && train_end < test_start && test_start <= test_end))
    throw ConfigError("invalid split: need train_start <= train_end < test_start <= test_end");
}

}  // namespace recollab
