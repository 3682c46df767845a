#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "recollab/sparse_tensor.hpp"
#include "recollab/types.hpp"

namespace recollab {

/// Per-snapshot multiplicity of a hyperedge from its occurrence count c:
/// count keeps m = c, log compresses to m = 1 + ln(c).
enum class WeightRule { count, log };

double multiplicity(WeightRule rule, std::uint64_t occurrences);

/// All s(s-1)/2 unordered pairs of a hyperedge, smaller id first,
/// lexicographically sorted.
std::vector<std::pair<ActorId, ActorId>> clique_expand(const HyperedgeKey& key);

/// Hypergraph incidence tensor of dims (N_h, N_a, N_t): for every hyperedge k
/// occurring c >= 1 times in snapshot t, each member column j holds m(c)/s_k.
SparseTensor3 load_hypergraph_tensor(const std::vector<PublicationRecord>& train,
                                     const HyperedgeRegistry& registry,
                                     std::size_t n_actors,
                                     const SnapshotScheme& scheme,
                                     WeightRule rule);

/// Clique-expanded graph tensor of dims (N_g, N_a, N_t): the same occurrences
/// spread over each clique pair's row, still weighted by the source
/// hyperedge's m(c)/s_k; co-resident hyperedges sharing a pair accumulate.
SparseTensor3 load_graph_tensor(const std::vector<PublicationRecord>& train,
                                const HyperedgeRegistry& h_registry,
                                const EdgeRegistry& e_registry,
                                std::size_t n_actors,
                                const SnapshotScheme& scheme,
                                WeightRule rule);

}  // namespace recollab
