#pragma once

#include <cstdint>

#include "recollab/types.hpp"

namespace recollab {

/// Knobs for the planted-group corpus generator. Each planted group is a
/// random actor subset that re-occurs across snapshots at an average rate of
/// recurrence_rate; on top of that, every pair inside a planted group also
/// fires as an independent dyadic record at background_pair_rate per snapshot,
/// so pair activity alone cannot tell groups apart.
struct SyntheticParams {
  std::uint32_t n_actors = 0;
  std::uint32_t n_planted_groups = 0;
  std::uint32_t group_size_min = 3;
  std::uint32_t group_size_max = 5;
  double background_pair_rate = 0.0;
  double recurrence_rate = 0.0;
  std::uint32_t n_snapshots = 0;

  void validate() const;
};

/// Deterministic in (params, seed). Snapshot t emits records at time t,
/// so the corpus covers times [0, n_snapshots).
Corpus generate_synthetic(const SyntheticParams& params, std::uint64_t seed);

}  // namespace recollab
