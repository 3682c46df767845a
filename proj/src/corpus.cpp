#include "recollab/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "recollab/errors.hpp"

namespace recollab {

namespace {

using nlohmann::json;

[[noreturn]] void line_error(std::size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

void parse_line(const std::string& line, std::size_t line_no, Corpus& corpus) {
  json node;
  try {
    node = json::parse(line);
  } catch (const json::exception& e) {
    line_error(line_no, std::string("malformed record: ") + e.what());
  }
  if (!node.is_object()) line_error(line_no, "record must be a JSON object");

  for (const char* field : {"id", "time", "actors"})
    if (!node.contains(field)) line_error(line_no, std::string("missing field \"") + field + "\"");

  if (!node["id"].is_string()) line_error(line_no, "field \"id\" must be a string");
  if (!node["time"].is_number_integer()) line_error(line_no, "field \"time\" must be an integer");
  if (!node["actors"].is_array()) line_error(line_no, "field \"actors\" must be an array");

  PublicationRecord record;
  record.id = node["id"].get<std::string>();
  record.time = node["time"].get<std::int64_t>();
  for (const auto& actor : node["actors"]) {
    if (!actor.is_string()) line_error(line_no, "field \"actors\" must contain strings");
    record.actors.push_back(corpus.intern(actor.get<std::string>()));
  }
  if (record.actors.empty()) line_error(line_no, "empty actor list");

  // Duplicate mentions collapse; member order is canonicalized to id order.
  std::sort(record.actors.begin(), record.actors.end());
  record.actors.erase(std::unique(record.actors.begin(), record.actors.end()),
                      record.actors.end());
  corpus.records.push_back(std::move(record));
}

}  // namespace

Corpus parse_corpus(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    parse_line(line, line_no, corpus);
  }
  return corpus;
}

Corpus parse_corpus_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_corpus(in);
}

Corpus parse_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path);
  return parse_corpus(in);
}

void serialize_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& record : corpus.records) {
    json node;
    node["id"] = record.id;
    node["time"] = record.time;
    json actors = json::array();
    for (ActorId a : record.actors) actors.push_back(corpus.label(a));
    node["actors"] = std::move(actors);
    out << node.dump() << '\n';
  }
}

std::string serialize_corpus_string(const Corpus& corpus) {
  std::ostringstream out;
  serialize_corpus(corpus, out);
  return out.str();
}

void save_corpus_file(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write corpus file: " + path);
  serialize_corpus(corpus, out);
  if (!out.flush()) throw IoError("short write to corpus file: " + path);
}

std::vector<PublicationRecord> preprocess(std::vector<PublicationRecord> records) {
  std::erase_if(records, [](const PublicationRecord& r) { return r.actors.size() < 2; });
  return records;
}

std::pair<std::vector<PublicationRecord>, std::vector<PublicationRecord>>
split_records(const std::vector<PublicationRecord>& records, const SplitSpec& spec) {
  spec.validate();
  std::vector<PublicationRecord> train, test;
  for (const auto& record : records) {
    if (record.time >= spec.train_start && record.time <= spec.train_end)
      train.push_back(record);
    else if (record.time >= spec.test_start && record.time <= spec.test_end)
      test.push_back(record);
  }
  if (train.empty()) throw ComputeError("split produced an empty training partition");
  return {std::move(train), std::move(test)};
}

std::pair<HyperedgeRegistry, EdgeRegistry>
build_registries(const std::vector<PublicationRecord>& train) {
  HyperedgeRegistry hyperedges;
  EdgeRegistry edges;
  for (const auto& record : train) {
    if (record.actors.size() < 2)
      throw std::invalid_argument("record \"" + record.id + "\": registries need preprocessed records");
    hyperedges.insert(HyperedgeKey{record.actors});
    for (std::size_t a = 0; a + 1 < record.actors.size(); ++a)
      for (std::size_t b = a + 1; b < record.actors.size(); ++b)
        edges.insert(record.actors[a], record.actors[b]);
  }
  hyperedges.freeze();
  edges.freeze();
  return {std::move(hyperedges), std::move(edges)};
}

}  // namespace recollab
