#include "recollab.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "recollab/corpus.hpp"
#include "recollab/errors.hpp"
#include "recollab/eval.hpp"
#include "recollab/pipeline.hpp"
#include "recollab/synthetic.hpp"

struct recollab_corpus {
  recollab::Corpus corpus;
};

struct recollab_result {
  std::optional<recollab::PredictResult> predict;
  std::optional<recollab::EvaluateResult> evaluate;
  recollab::Corpus labels;  // actor table only, for rendering members
};

namespace {

thread_local std::string g_last_error;

recollab_status fail(recollab_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename F>
recollab_status guard(F&& f) {
  try {
    const recollab_status status = f();
    if (status == RECOLLAB_OK) g_last_error.clear();
    return status;
  } catch (const recollab::ParseError& e) {
    return fail(RECOLLAB_ERR_PARSE, e.what());
  } catch (const recollab::ConfigError& e) {
    return fail(RECOLLAB_ERR_CONFIG, e.what());
  } catch (const recollab::ComputeError& e) {
    return fail(RECOLLAB_ERR_COMPUTE, e.what());
  } catch (const recollab::IoError& e) {
    return fail(RECOLLAB_ERR_IO, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(RECOLLAB_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(RECOLLAB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(RECOLLAB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(RECOLLAB_ERR_COMPUTE, e.what());
  }
}

char* dup_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

recollab::Corpus labels_only(const recollab::Corpus& corpus) {
  recollab::Corpus out;
  out.actor_labels = corpus.actor_labels;
  return out;
}

recollab::PipelineConfig config_from(const char* config_json) {
  if (!config_json || !*config_json) return recollab::PipelineConfig{};
  return recollab::PipelineConfig::from_json(nlohmann::json::parse(config_json));
}

}  // namespace

extern "C" {

const char* recollab_status_name(recollab_status status) {
  switch (status) {
    case RECOLLAB_OK: return "ok";
    case RECOLLAB_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case RECOLLAB_ERR_PARSE: return "parse_error";
    case RECOLLAB_ERR_CONFIG: return "config_error";
    case RECOLLAB_ERR_COMPUTE: return "compute_error";
    case RECOLLAB_ERR_IO: return "io_error";
    case RECOLLAB_ERR_NOT_FOUND: return "not_found";
  }
  return "unknown";
}

const char* recollab_last_error(void) { return g_last_error.c_str(); }

recollab_status recollab_corpus_open(const char* path, recollab_corpus** out_corpus) {
  return guard([&]() -> recollab_status {
    if (!path || !out_corpus)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT, "null argument to recollab_corpus_open");
    *out_corpus = new recollab_corpus{recollab::parse_corpus_file(path)};
    return RECOLLAB_OK;
  });
}

recollab_status recollab_corpus_parse(const char* data, size_t length,
                                      recollab_corpus** out_corpus) {
  return guard([&]() -> recollab_status {
    if (!data || !out_corpus)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT, "null argument to recollab_corpus_parse");
    *out_corpus =
        new recollab_corpus{recollab::parse_corpus_string(std::string_view(data, length))};
    return RECOLLAB_OK;
  });
}

recollab_status recollab_corpus_synth(const char* params_json,
                                      recollab_corpus** out_corpus) {
  return guard([&]() -> recollab_status {
    if (!params_json || !out_corpus)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT, "null argument to recollab_corpus_synth");
    const nlohmann::json doc = nlohmann::json::parse(params_json);
    if (!doc.is_object()) throw recollab::ConfigError("synth params must be a JSON object");
    recollab::SyntheticParams params;
    std::uint64_t seed = 0;
    for (const auto& [key, value] : doc.items()) {
      if (key == "n_actors")
        params.n_actors = value.get<std::uint32_t>();
      else if (key == "n_planted_groups")
        params.n_planted_groups = value.get<std::uint32_t>();
      else if (key == "group_size_min")
        params.group_size_min = value.get<std::uint32_t>();
      else if (key == "group_size_max")
        params.group_size_max = value.get<std::uint32_t>();
      else if (key == "background_pair_rate")
        params.background_pair_rate = value.get<double>();
      else if (key == "recurrence_rate")
        params.recurrence_rate = value.get<double>();
      else if (key == "n_snapshots")
        params.n_snapshots = value.get<std::uint32_t>();
      else if (key == "seed")
        seed = value.get<std::uint64_t>();
      else
        throw recollab::ConfigError("unknown synth param: " + key);
    }
    *out_corpus = new recollab_corpus{recollab::generate_synthetic(params, seed)};
    return RECOLLAB_OK;
  });
}

recollab_status recollab_corpus_save(const recollab_corpus* corpus, const char* path) {
  return guard([&]() -> recollab_status {
    if (!corpus || !path)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT, "null argument to recollab_corpus_save");
    recollab::write_file_atomic(path, recollab::serialize_corpus_string(corpus->corpus));
    return RECOLLAB_OK;
  });
}

recollab_status recollab_corpus_stats(const recollab_corpus* corpus, char** out_json) {
  return guard([&]() -> recollab_status {
    if (!corpus || !out_json)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT, "null argument to recollab_corpus_stats");
    nlohmann::json doc = {{"records", corpus->corpus.records.size()},
                          {"actors", corpus->corpus.actor_count()},
                          {"time_min", nullptr},
                          {"time_max", nullptr}};
    if (!corpus->corpus.records.empty()) {
      std::int64_t lo = corpus->corpus.records.front().time;
      std::int64_t hi = lo;
      for (const auto& record : corpus->corpus.records) {
        lo = std::min(lo, record.time);
        hi = std::max(hi, record.time);
      }
      doc["time_min"] = lo;
      doc["time_max"] = hi;
    }
    *out_json = dup_string(doc.dump());
    return RECOLLAB_OK;
  });
}

void recollab_corpus_close(recollab_corpus* corpus) { delete corpus; }

recollab_status recollab_predict(const recollab_corpus* corpus, const char* config_json,
                                 recollab_result** out_result) {
  return guard([&]() -> recollab_status {
    if (!corpus || !out_result)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT, "null argument to recollab_predict");
    auto result = std::make_unique<recollab_result>();
    result->predict = recollab::run_predict(corpus->corpus, config_from(config_json));
    result->labels = labels_only(corpus->corpus);
    *out_result = result.release();
    return RECOLLAB_OK;
  });
}

recollab_status recollab_evaluate(const recollab_corpus* corpus, const char* config_json,
                                  recollab_result** out_result) {
  return guard([&]() -> recollab_status {
    if (!corpus || !out_result)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT, "null argument to recollab_evaluate");
    auto result = std::make_unique<recollab_result>();
    result->evaluate = recollab::run_evaluate(corpus->corpus, config_from(config_json));
    result->labels = labels_only(corpus->corpus);
    *out_result = result.release();
    return RECOLLAB_OK;
  });
}

recollab_status recollab_compare(const char* graph_metrics_json,
                                 const char* hyper_metrics_json, char** out_json) {
  return guard([&]() -> recollab_status {
    if (!graph_metrics_json || !hyper_metrics_json || !out_json)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT, "null argument to recollab_compare");
    const recollab::MetricsReport graph_report =
        recollab::metrics_from_json(nlohmann::json::parse(graph_metrics_json));
    const recollab::MetricsReport hyper_report =
        recollab::metrics_from_json(nlohmann::json::parse(hyper_metrics_json));
    const recollab::ComparisonReport report =
        recollab::compare_report(graph_report, hyper_report);
    *out_json = dup_string(recollab::comparison_to_json(report).dump(2));
    return RECOLLAB_OK;
  });
}

recollab_status recollab_result_models(const recollab_result* result, char** out_json) {
  return guard([&]() -> recollab_status {
    if (!result || !out_json)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT, "null argument to recollab_result_models");
    nlohmann::json names = nlohmann::json::array();
    if (result->predict) {
      for (const auto& entry : result->predict->models) names.push_back(entry.model);
    } else if (result->evaluate) {
      for (const auto& [name, report] : result->evaluate->reports) names.push_back(name);
    }
    *out_json = dup_string(names.dump());
    return RECOLLAB_OK;
  });
}

recollab_status recollab_result_ranking_tsv(const recollab_result* result, const char* model,
                                            int size, char** out_tsv) {
  return guard([&]() -> recollab_status {
    if (!result || !model || !out_tsv)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT,
                  "null argument to recollab_result_ranking_tsv");
    if (!result->predict)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT, "rankings require a predict result");
    const recollab::ModelScores* scores = result->predict->find_model(model);
    if (!scores) return fail(RECOLLAB_ERR_NOT_FOUND, std::string("unknown model: ") + model);
    const auto it = scores->rankings.find(size);
    if (it == scores->rankings.end())
      return fail(RECOLLAB_ERR_NOT_FOUND, "size " + std::to_string(size) + " not configured");
    *out_tsv = dup_string(
        recollab::format_ranking_tsv(it->second, result->predict->h_registry, result->labels));
    return RECOLLAB_OK;
  });
}

recollab_status recollab_result_scores_tsv(const recollab_result* result, const char* model,
                                           char** out_tsv) {
  return guard([&]() -> recollab_status {
    if (!result || !model || !out_tsv)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT,
                  "null argument to recollab_result_scores_tsv");
    if (!result->predict)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT, "score dumps require a predict result");
    const recollab::ModelScores* scores = result->predict->find_model(model);
    if (!scores) return fail(RECOLLAB_ERR_NOT_FOUND, std::string("unknown model: ") + model);
    *out_tsv = dup_string(recollab::format_score_dump(scores->scores,
                                                      result->predict->h_registry,
                                                      result->labels));
    return RECOLLAB_OK;
  });
}

recollab_status recollab_result_metrics_json(const recollab_result* result, char** out_json) {
  return guard([&]() -> recollab_status {
    if (!result || !out_json)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT,
                  "null argument to recollab_result_metrics_json");
    if (!result->evaluate)
      return fail(RECOLLAB_ERR_INVALID_ARGUMENT, "metrics require an evaluate result");
    *out_json = dup_string(result->evaluate->to_json().dump(2));
    return RECOLLAB_OK;
  });
}

void recollab_result_close(recollab_result* result) { delete result; }

void recollab_string_free(char* text) { std::free(text); }

}  // extern "C"
