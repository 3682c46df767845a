#include "recollab/loader.hpp"

#include <cmath>
#include <unordered_map>

#include "recollab/errors.hpp"

namespace recollab {

double multiplicity(WeightRule rule, std::uint64_t occurrences) {
  if (occurrences == 0) throw std::invalid_argument("multiplicity needs at least one occurrence");
  switch (rule) {
    case WeightRule::count:
      return static_cast<double>(occurrences);
    case WeightRule::log:
      // Offset keeps a single occurrence from vanishing at ln(1) = 0.
      return 1.0 + std::log(static_cast<double>(occurrences));
  }
  throw std::invalid_argument("unknown weight rule");
}

std::vector<std::pair<ActorId, ActorId>> clique_expand(const HyperedgeKey& key) {
  std::vector<std::pair<ActorId, ActorId>> pairs;
  pairs.reserve(key.members.size() * (key.members.size() - 1) / 2);
  for (std::size_t a = 0; a + 1 < key.members.size(); ++a)
    for (std::size_t b = a + 1; b < key.members.size(); ++b)
      pairs.emplace_back(key.members[a], key.members[b]);
  return pairs;
}

namespace {

// Occurrence counts per (hyperedge, snapshot). Two passes: the log rule needs
// the final count before any cell is emitted.
std::unordered_map<std::uint64_t, std::uint64_t>
count_occurrences(const std::vector<PublicationRecord>& train,
                  const HyperedgeRegistry& registry, const SnapshotScheme& scheme) {
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  for (const auto& record : train) {
    const auto index = registry.lookup(HyperedgeKey{record.actors});
    if (!index)
      throw std::invalid_argument("record \"" + record.id +
                                  "\": actor set missing from the training registry");
    const std::uint64_t t = snapshot_of(record.time, scheme);
    counts[(static_cast<std::uint64_t>(*index) << 32) | t] += 1;
  }
  return counts;
}

}  // namespace

SparseTensor3 load_hypergraph_tensor(const std::vector<PublicationRecord>& train,
                                     const HyperedgeRegistry& registry,
                                     std::size_t n_actors,
                                     const SnapshotScheme& scheme, WeightRule rule) {
  const auto counts = count_occurrences(train, registry, scheme);
  std::vector<TensorEntry> entries;
  for (const auto& [key, occurrences] : counts) {
    const auto k = static_cast<std::uint32_t>(key >> 32);
    const auto t = static_cast<std::uint32_t>(key & 0xffffffffULL);
    const auto& hyperedge = registry.key(k);
    const double cell = multiplicity(rule, occurrences) /
                        static_cast<double>(hyperedge.cardinality());
    for (ActorId j : hyperedge.members) entries.push_back({k, j, t, cell});
  }
  return SparseTensor3::from_entries(registry.size(), n_actors, scheme.count,
                                     std::move(entries));
}

SparseTensor3 load_graph_tensor(const std::vector<PublicationRecord>& train,
                                const HyperedgeRegistry& h_registry,
                                const EdgeRegistry& e_registry,
                                std::size_t n_actors,
                                const SnapshotScheme& scheme, WeightRule rule) {
  const auto counts = count_occurrences(train, h_registry, scheme);
  std::vector<TensorEntry> entries;
  for (const auto& [key, occurrences] : counts) {
    const auto k = static_cast<std::uint32_t>(key >> 32);
    const auto t = static_cast<std::uint32_t>(key & 0xffffffffULL);
    const auto& hyperedge = h_registry.key(k);
    // The dyad inherits the source hyperedge's weight m/s_k, not a dyadic one.
    const double cell = multiplicity(rule, occurrences) /
                        static_cast<double>(hyperedge.cardinality());
    for (const auto& [a, b] : clique_expand(hyperedge)) {
      const auto edge = e_registry.lookup(a, b);
      if (!edge)
        throw std::invalid_argument("clique pair missing from the edge registry");
      entries.push_back({*edge, a, t, cell});
      entries.push_back({*edge, b, t, cell});
    }
  }
  // from_entries sums the contributions of hyperedges sharing a pair.
  return SparseTensor3::from_entries(e_registry.size(), n_actors, scheme.count,
                                     std::move(entries));
}

}  // namespace recollab
