#include "recollab/synthetic.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "recollab/errors.hpp"
#include "recollab/rng.hpp"

namespace recollab {

void SyntheticParams::validate() const {
  if (n_snapshots == 0) throw ConfigError("n_snapshots must be positive");
  if (group_size_min < 2) throw ConfigError("group sizes must be at least 2");
  if (group_size_min > group_size_max) throw ConfigError("group_size_min exceeds group_size_max");
  if (n_planted_groups > 0 && group_size_max > n_actors)
    throw ConfigError("group size exceeds the number of actors");
  if (background_pair_rate < 0.0 || background_pair_rate > 1.0)
    throw ConfigError("background_pair_rate must lie in [0,1]");
  if (recurrence_rate < 0.0 || recurrence_rate > 1.0)
    throw ConfigError("recurrence_rate must lie in [0,1]");
}

namespace {

struct PlantedGroup {
  std::vector<std::uint32_t> members;                   // sorted actor indices
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  double rate = 0.0;
};

// Per-group activity rate with mean recurrence_rate. Spreading the rates out
// makes a group's past activity informative about its future, while the
// per-snapshot marginal stays Bernoulli(recurrence_rate); rate 1 and rate 0
// remain exact.
double draw_group_rate(Rng& rng, double recurrence_rate) {
  const double lo = std::max(0.0, 2.0 * recurrence_rate - 1.0);
  const double hi = std::min(1.0, 2.0 * recurrence_rate);
  return lo + (hi - lo) * rng.next_u01();
}

std::vector<std::uint32_t> draw_members(Rng& rng, std::uint32_t n_actors, std::uint32_t size) {
  std::set<std::uint32_t> chosen;
  while (chosen.size() < size)
    chosen.insert(static_cast<std::uint32_t>(rng.next_below(n_actors)));
  return {chosen.begin(), chosen.end()};
}

}  // namespace

Corpus generate_synthetic(const SyntheticParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);

  std::vector<PlantedGroup> groups(params.n_planted_groups);
  for (auto& group : groups) {
    const std::uint32_t span = params.group_size_max - params.group_size_min + 1;
    const auto size = params.group_size_min + static_cast<std::uint32_t>(rng.next_below(span));
    group.members = draw_members(rng, params.n_actors, size);
    for (std::size_t a = 0; a + 1 < group.members.size(); ++a)
      for (std::size_t b = a + 1; b < group.members.size(); ++b)
        group.pairs.emplace_back(group.members[a], group.members[b]);
    group.rate = draw_group_rate(rng, params.recurrence_rate);
  }

  Corpus corpus;
  auto actor_label = [](std::uint32_t idx) { return "a" + std::to_string(idx); };
  for (std::uint32_t t = 0; t < params.n_snapshots; ++t) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (rng.bernoulli(groups[g].rate)) {
        PublicationRecord record;
        record.id = "g" + std::to_string(g) + "-t" + std::to_string(t);
        record.time = t;
        for (std::uint32_t m : groups[g].members)
          record.actors.push_back(corpus.intern(actor_label(m)));
        std::sort(record.actors.begin(), record.actors.end());
        corpus.records.push_back(std::move(record));
      }
      for (std::size_t p = 0; p < groups[g].pairs.size(); ++p) {
        if (!rng.bernoulli(params.background_pair_rate)) continue;
        PublicationRecord record;
        record.id = "g" + std::to_string(g) + "-p" + std::to_string(p) + "-t" + std::to_string(t);
        record.time = t;
        record.actors.push_back(corpus.intern(actor_label(groups[g].pairs[p].first)));
        record.actors.push_back(corpus.intern(actor_label(groups[g].pairs[p].second)));
        std::sort(record.actors.begin(), record.actors.end());
        corpus.records.push_back(std::move(record));
      }
    }
  }
  return corpus;
}

}  // namespace recollab
