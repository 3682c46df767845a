#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "recollab/types.hpp"

namespace recollab {

/// Parse a line-delimited JSON corpus: one {"id","time","actors"} object per
/// line, UTF-8. Actor labels are interned in first-seen order; record order
/// is preserved. Blank lines are skipped.
Corpus parse_corpus(std::istream& in);
Corpus parse_corpus_string(std::string_view text);
Corpus parse_corpus_file(const std::string& path);

/// Inverse of parse_corpus: one JSON object per line, actors listed by
/// ascending id so that reparsing reproduces the actor table exactly.
void serialize_corpus(const Corpus& corpus, std::ostream& out);
std::string serialize_corpus_string(const Corpus& corpus);
void save_corpus_file(const Corpus& corpus, const std::string& path);

/// Drop records with fewer than two actors; everything else is untouched.
std::vector<PublicationRecord> preprocess(std::vector<PublicationRecord> records);

/// Partition records into (train, test) by the split windows (both ends
/// inclusive); records in neither window are discarded. Throws if the
/// training side comes out empty.
std::pair<std::vector<PublicationRecord>, std::vector<PublicationRecord>>
split_records(const std::vector<PublicationRecord>& records, const SplitSpec& spec);

/// Scan preprocessed training records once and index every distinct actor set
/// plus every distinct pair from their clique expansions. Both registries are
/// returned frozen.
std::pair<HyperedgeRegistry, EdgeRegistry>
build_registries(const std::vector<PublicationRecord>& train);

}  // namespace recollab
