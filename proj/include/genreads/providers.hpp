#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "genreads/calibrate.hpp"
#include "genreads/coherence_matrix.hpp"
#include "genreads/errors.hpp"
#include "genreads/insertion.hpp"
#include "genreads/judge.hpp"
#include "genreads/rng.hpp"
#include "genreads/taxonomy.hpp"

namespace genreads {

// Raw per-slot signal source: returns an L-vector for slot j.
using SignalFn = std::function<std::vector<double>(std::size_t slot)>;

// Runs the signal source over every slot and calibrates each column.
// Provider errors are re-thrown with the slot index attached.
inline CoherenceMatrix build_coherence(const OrganicResponse& response, TaxonomyPtr taxonomy,
                                       const SignalFn& provider, const CalibrationSpec& spec) {
  std::vector<std::vector<double>> columns;
  columns.reserve(response.num_slots());
  for (std::size_t j = 0; j < response.num_slots(); ++j) {
    std::vector<double> signals;
    try {
      signals = provider(j);
    } catch (const ProviderError& e) {
      throw ProviderError("slot " + std::to_string(j) + ": " + e.what(), e.payload());
    }
    if (signals.size() != taxonomy->size())
      throw DimensionError("provider returned " + std::to_string(signals.size()) +
                           " signals for slot " + std::to_string(j));
    columns.push_back(calibrate(signals, spec));
  }
  return CoherenceMatrix(std::move(taxonomy), std::move(columns), /*calibrated=*/true);
}

// Externally supplied per-sentence and per-genre embeddings.
struct EmbeddingSet {
  std::size_t dim = 0;
  std::vector<EmbeddingVector> sentences;            // one per organic sentence
  std::map<std::string, EmbeddingVector> genres;     // genre id -> vector
};

// Embedding signals per the cosine formula. At the response ends the missing
// neighbor is substituted by the single adjacent sentence.
inline SignalFn embedding_provider(const EmbeddingSet& embeddings, const OrganicResponse& response,
                                   TaxonomyPtr taxonomy) {
  if (embeddings.sentences.size() != response.num_sentences())
    throw DimensionError("embedding file sentence count does not match the response");
  for (std::size_t g = 0; g < taxonomy->size(); ++g)
    if (!embeddings.genres.count(taxonomy->at(g).id))
      throw ProviderError("embedding file missing genre vector: " + taxonomy->at(g).id);

  return [embeddings, taxonomy, m = response.num_sentences()](std::size_t slot) {
    const auto& prev = embeddings.sentences[slot >= 1 ? slot - 1 : 0];
    const auto& next = embeddings.sentences[slot < m ? slot : m - 1];
    std::vector<double> signals(taxonomy->size());
    for (std::size_t g = 0; g < taxonomy->size(); ++g)
      signals[g] = embedding_signal(prev, next, embeddings.genres.at(taxonomy->at(g).id));
    return signals;
  };
}

// LLM-judge signals: one batched prompt per slot, scores mapped to [0, 1] by
// (score - 1) / 4. Averaging across instances happens on raw scores, before
// calibration.
inline SignalFn judge_provider(const JudgeClient& client, const OrganicResponse& response,
                               TaxonomyPtr taxonomy, int instances = 1) {
  if (instances < 1) throw ArgumentError("judge instance count must be at least 1");
  const std::string context = join_sentences(response);
  return [&client, response, taxonomy, context, instances](std::size_t slot) {
    const auto [before, after] = split_at_slot(response, slot);
    std::vector<double> signals(taxonomy->size(), 0.0);
    for (int k = 0; k < instances; ++k) {
      const auto rating = client.rate_slot(context, response.query, before, after, *taxonomy);
      for (std::size_t g = 0; g < taxonomy->size(); ++g)
        signals[g] += (rating.at(taxonomy->at(g).id).score - 1) / 4.0;
    }
    for (auto& s : signals) s /= instances;
    return signals;
  };
}

// Deterministic stand-in provider: hash-derived signals in [0, 1].
inline SignalFn mock_provider(TaxonomyPtr taxonomy, std::uint64_t seed) {
  return [taxonomy, seed](std::size_t slot) {
    SplitRng rng = SplitRng(seed).fork(slot);
    std::vector<double> signals(taxonomy->size());
    for (auto& s : signals) s = rng.uniform();
    return signals;
  };
}

}  // namespace genreads
