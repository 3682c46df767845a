#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "recollab/corpus.hpp"
#include "recollab/errors.hpp"
#include "recollab/synthetic.hpp"
#include "recollab/types.hpp"

using namespace recollab;

namespace {

Corpus tiny_corpus() {
  return parse_corpus_string(
      R"({"id":"r1","time":3,"actors":["carol","alice","bob"]})"
      "\n"
      R"({"id":"r2","time":5,"actors":["alice","dave"]})"
      "\n");
}

}  // namespace

TEST_CASE("parsing interns actors in first-seen order") {
  const Corpus corpus = tiny_corpus();
  REQUIRE(corpus.records.size() == 2);
  CHECK(corpus.actor_labels == std::vector<std::string>{"carol", "alice", "bob", "dave"});
  CHECK(corpus.records[0].id == "r1");
  CHECK(corpus.records[0].time == 3);
  // Members are stored in id order, not input order.
  CHECK(corpus.records[0].actors == std::vector<ActorId>{0, 1, 2});
  CHECK(corpus.records[1].actors == std::vector<ActorId>{1, 3});
  CHECK(corpus.find_actor("dave") == ActorId{3});
  CHECK(!corpus.find_actor("eve").has_value());
}

TEST_CASE("parsing skips blank lines and keeps line numbers in errors") {
  const Corpus corpus = parse_corpus_string(
      "\n" R"({"id":"r1","time":0,"actors":["x","y"]})" "\n\n");
  CHECK(corpus.records.size() == 1);

  CHECK_THROWS_WITH_AS(parse_corpus_string("\n\nnot json\n"),
                       doctest::Contains("line 3"), ParseError);
}

TEST_CASE("parsing rejects malformed records with the field name") {
  CHECK_THROWS_WITH_AS(parse_corpus_string(R"({"time":0,"actors":["x","y"]})"),
                       doctest::Contains("\"id\""), ParseError);
  CHECK_THROWS_WITH_AS(parse_corpus_string(R"({"id":"r","actors":["x","y"]})"),
                       doctest::Contains("\"time\""), ParseError);
  CHECK_THROWS_WITH_AS(parse_corpus_string(R"({"id":"r","time":0})"),
                       doctest::Contains("\"actors\""), ParseError);
  CHECK_THROWS_WITH_AS(parse_corpus_string(R"({"id":"r","time":1.5,"actors":["x"]})"),
                       doctest::Contains("integer"), ParseError);
  CHECK_THROWS_WITH_AS(parse_corpus_string(R"({"id":"r","time":0,"actors":[1]})"),
                       doctest::Contains("strings"), ParseError);
  CHECK_THROWS_WITH_AS(parse_corpus_string(R"({"id":"r","time":0,"actors":[]})"),
                       doctest::Contains("empty actor list"), ParseError);
  CHECK_THROWS_AS(parse_corpus_string(R"(["not","an","object"])"), ParseError);
}

TEST_CASE("duplicate actor mentions collapse") {
  const Corpus corpus =
      parse_corpus_string(R"({"id":"r","time":0,"actors":["x","y","x","x"]})");
  CHECK(corpus.records[0].actors == std::vector<ActorId>{0, 1});
}

TEST_CASE("serialize then parse reproduces records, actor table, and order") {
  const Corpus corpus = tiny_corpus();
  const Corpus reparsed = parse_corpus_string(serialize_corpus_string(corpus));
  CHECK(reparsed.records == corpus.records);
  CHECK(reparsed.actor_labels == corpus.actor_labels);
  CHECK(serialize_corpus_string(reparsed) == serialize_corpus_string(corpus));
}

TEST_CASE("round trip holds for a generated corpus") {
  SyntheticParams params;
  params.n_actors = 30;
  params.n_planted_groups = 8;
  params.background_pair_rate = 0.4;
  params.recurrence_rate = 0.6;
  params.n_snapshots = 6;
  const Corpus corpus = generate_synthetic(params, 11);
  REQUIRE(!corpus.records.empty());
  const Corpus reparsed = parse_corpus_string(serialize_corpus_string(corpus));
  CHECK(reparsed.records == corpus.records);
  CHECK(reparsed.actor_labels == corpus.actor_labels);
}

TEST_CASE("preprocess drops records with fewer than two actors") {
  Corpus corpus = parse_corpus_string(
      R"({"id":"solo","time":0,"actors":["x"]})" "\n"
      R"({"id":"pair","time":0,"actors":["x","y"]})" "\n"
      R"({"id":"dupes","time":0,"actors":["z","z"]})" "\n");
  const auto kept = preprocess(corpus.records);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].id == "pair");
}

TEST_CASE("split boundaries are inclusive and the gap is discarded") {
  std::vector<PublicationRecord> records;
  for (std::int64_t t : {1990, 1995, 1996, 1999, 2000, 2001})
    records.push_back({"t" + std::to_string(t), t, {0, 1}});
  const SplitSpec spec{1990, 1995, 2000, 2001};

  const auto [train, test] = split_records(records, spec);
  REQUIRE(train.size() == 2);
  CHECK(train[1].time == 1995);  // record at train_end lands on the train side
  REQUIRE(test.size() == 2);
  CHECK(test[0].time == 2000);
  // 1996 and 1999 fall between the windows and are gone.
}

TEST_CASE("split covering every record discards nothing") {
  std::vector<PublicationRecord> records;
  for (std::int64_t t : {0, 1, 2, 3})
    records.push_back({"t" + std::to_string(t), t, {0, 1}});
  const auto [train, test] = split_records(records, SplitSpec{0, 1, 2, 3});
  CHECK(train.size() + test.size() == records.size());
}

TEST_CASE("split with an empty training side fails") {
  std::vector<PublicationRecord> records{{"r", 50, {0, 1}}};
  CHECK_THROWS_AS(split_records(records, SplitSpec{0, 10, 20, 60}), ComputeError);
}

TEST_CASE("split spec validation enforces window ordering") {
  CHECK_THROWS_AS((SplitSpec{5, 4, 6, 7}.validate()), ConfigError);
  CHECK_THROWS_AS((SplitSpec{0, 5, 5, 7}.validate()), ConfigError);
  CHECK_THROWS_AS((SplitSpec{0, 5, 6, 5}.validate()), ConfigError);
  CHECK_NOTHROW((SplitSpec{0, 5, 6, 6}.validate()));
}

TEST_CASE("hyperedge keys canonicalize and reject degenerate sets") {
  const auto key = HyperedgeKey::from_actors({4, 2, 4, 9});
  CHECK(key.members == std::vector<ActorId>{2, 4, 9});
  CHECK(key.cardinality() == 3);
  CHECK_THROWS_AS(HyperedgeKey::from_actors({7, 7}), std::invalid_argument);
}

TEST_CASE("registries index training hyperedges and all clique pairs") {
  std::vector<PublicationRecord> train{
      {"r1", 0, {0, 1, 2}}, {"r2", 1, {0, 1}}, {"r3", 2, {0, 1, 2}}};
  const auto [hyperedges, edges] = build_registries(train);

  CHECK(hyperedges.size() == 2);
  CHECK(edges.size() == 3);
  CHECK(hyperedges.frozen());
  CHECK(edges.frozen());

  // Every training record maps to exactly one index.
  for (const auto& record : train)
    CHECK(hyperedges.lookup(HyperedgeKey{record.actors}).has_value());

  // A size-s hyperedge contributes exactly s(s-1)/2 pairs.
  for (std::uint32_t i = 0; i < hyperedges.size(); ++i) {
    const auto& members = hyperedges.key(i).members;
    std::size_t present = 0;
    for (std::size_t a = 0; a + 1 < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        present += edges.lookup(members[a], members[b]).has_value() ? 1 : 0;
    CHECK(present == members.size() * (members.size() - 1) / 2);
  }
}

TEST_CASE("frozen registries answer unknown keys without allocating") {
  const auto [hyperedges, edges] = build_registries({{"r", 0, {0, 1}}});
  CHECK(!hyperedges.lookup(HyperedgeKey{{0, 2}}).has_value());
  CHECK(!edges.lookup(0, 2).has_value());
  CHECK(hyperedges.size() == 1);
  CHECK(edges.size() == 1);

  HyperedgeRegistry hcopy = hyperedges;
  CHECK(hcopy.insert(HyperedgeKey{{0, 1}}) == 0);  // existing key is fine
  CHECK_THROWS_AS(hcopy.insert(HyperedgeKey{{0, 2}}), std::invalid_argument);
  EdgeRegistry ecopy = edges;
  CHECK_THROWS_AS(ecopy.insert(1, 2), std::invalid_argument);
}

TEST_CASE("registries demand preprocessed records") {
  CHECK_THROWS_WITH_AS(build_registries({{"solo", 0, {3}}}), doctest::Contains("solo"),
                       std::invalid_argument);
}

TEST_CASE("snapshot assignment is half-open on each boundary") {
  const SnapshotScheme scheme{2000, 2, 3};  // covers [2000, 2006)
  CHECK(snapshot_of(2000, scheme) == 0);
  CHECK(snapshot_of(2001, scheme) == 0);
  CHECK(snapshot_of(2002, scheme) == 1);  // left edge of the next snapshot
  CHECK(snapshot_of(2005, scheme) == 2);
  CHECK_THROWS_AS(snapshot_of(2006, scheme), std::invalid_argument);
  CHECK_THROWS_AS(snapshot_of(1999, scheme), std::invalid_argument);
}

TEST_CASE("synthetic generation is deterministic in the seed") {
  SyntheticParams params;
  params.n_actors = 40;
  params.n_planted_groups = 10;
  params.background_pair_rate = 0.5;
  params.recurrence_rate = 0.5;
  params.n_snapshots = 8;
  const std::string a = serialize_corpus_string(generate_synthetic(params, 99));
  const std::string b = serialize_corpus_string(generate_synthetic(params, 99));
  const std::string c = serialize_corpus_string(generate_synthetic(params, 100));
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("recurrence rate one makes every group fire in every snapshot") {
  SyntheticParams params;
  params.n_actors = 30;
  params.n_planted_groups = 6;
  params.background_pair_rate = 0.0;
  params.recurrence_rate = 1.0;
  params.n_snapshots = 5;
  const Corpus corpus = generate_synthetic(params, 3);
  CHECK(corpus.records.size() == 6u * 5u);
  std::set<std::string> seen;
  for (const auto& record : corpus.records) seen.insert(record.id);
  CHECK(seen.size() == corpus.records.size());
}

TEST_CASE("no groups and no background yields an empty corpus") {
  SyntheticParams params;
  params.n_actors = 10;
  params.n_planted_groups = 0;
  params.background_pair_rate = 0.0;
  params.recurrence_rate = 0.0;
  params.n_snapshots = 4;
  CHECK(generate_synthetic(params, 1).records.empty());
}

TEST_CASE("planted group sizes stay inside the requested range") {
  SyntheticParams params;
  params.n_actors = 50;
  params.n_planted_groups = 25;
  params.group_size_min = 3;
  params.group_size_max = 5;
  params.background_pair_rate = 0.0;
  params.recurrence_rate = 1.0;
  params.n_snapshots = 1;
  const Corpus corpus = generate_synthetic(params, 17);
  REQUIRE(corpus.records.size() == 25);
  for (const auto& record : corpus.records) {
    CHECK(record.actors.size() >= 3);
    CHECK(record.actors.size() <= 5);
  }
}

TEST_CASE("every within-group pair also fires as an independent dyad") {
  SyntheticParams params;
  params.n_actors = 20;
  params.n_planted_groups = 3;
  params.group_size_min = 3;
  params.group_size_max = 3;
  params.background_pair_rate = 1.0;
  params.recurrence_rate = 1.0;
  params.n_snapshots = 2;
  const Corpus corpus = generate_synthetic(params, 5);
  // Per snapshot: 3 group records + 3 pairs per group.
  CHECK(corpus.records.size() == 2u * (3u + 3u * 3u));
  std::size_t dyads = 0;
  for (const auto& record : corpus.records)
    if (record.actors.size() == 2) ++dyads;
  CHECK(dyads == 2u * 9u);
}

TEST_CASE("synthetic parameter validation") {
  SyntheticParams params;
  params.n_actors = 4;
  params.n_planted_groups = 1;
  params.group_size_min = 3;
  params.group_size_max = 6;
  params.recurrence_rate = 0.5;
  params.n_snapshots = 2;
  CHECK_THROWS_AS(generate_synthetic(params, 0), ConfigError);  // size > actors
  params.group_size_max = 4;
  CHECK_NOTHROW(generate_synthetic(params, 0));
  params.background_pair_rate = 1.5;
  CHECK_THROWS_AS(generate_synthetic(params, 0), ConfigError);
  params.background_pair_rate = 0.0;
  params.n_snapshots = 0;
  CHECK_THROWS_AS(generate_synthetic(params, 0), ConfigError);
}
