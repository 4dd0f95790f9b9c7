#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "genreads/auction.hpp"
#include "genreads/bids.hpp"
#include "genreads/coherence_matrix.hpp"
#include "genreads/errors.hpp"
#include "genreads/evalstats.hpp"
#include "genreads/groundtruth.hpp"
#include "genreads/insertion.hpp"
#include "genreads/providers.hpp"
#include "genreads/taxonomy.hpp"

namespace genreads {

namespace detail {

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write file: " + path);
  out << content;
}

inline void write_json_file(const std::string& path, const nlohmann::json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace detail

// --- taxonomy: {"genres": [{"id", "name"}]} ---

inline TaxonomyPtr load_taxonomy(const std::string& path) {
  const auto doc = detail::load_json_file(path);
  std::vector<Genre> genres;
  for (const auto& entry : doc.at("genres"))
    genres.push_back({entry.at("id").get<std::string>(),
                      entry.value("name", entry.at("id").get<std::string>())});
  return std::make_shared<const GenreTaxonomy>(std::move(genres));
}

inline void save_taxonomy(const std::string& path, const GenreTaxonomy& taxonomy) {
  nlohmann::json genres = nlohmann::json::array();
  for (const auto& g : taxonomy.genres()) genres.push_back({{"id", g.id}, {"name", g.name}});
  detail::write_json_file(path, {{"genres", genres}});
}

// --- bids: {"v_bar", "advertisers": [{"id", "bids": {genre: value}}]} ---

inline BidMatrix load_bids(const std::string& path, TaxonomyPtr taxonomy) {
  const auto doc = detail::load_json_file(path);
  const double v_bar = doc.at("v_bar").get<double>();
  std::vector<std::string> ids;
  std::vector<BidVector> columns;
  for (const auto& adv : doc.at("advertisers")) {
    ids.push_back(adv.at("id").get<std::string>());
    BidVector column;
    column.v_bar = v_bar;
    for (const auto& [genre, value] : adv.at("bids").items())
      column.entries[genre] = value.get<double>();
    columns.push_back(std::move(column));
  }
  return BidMatrix(std::move(taxonomy), std::move(ids), std::move(columns));
}

inline void save_bids(const std::string& path, const BidMatrix& bids) {
  nlohmann::json advertisers = nlohmann::json::array();
  for (std::size_t i = 0; i < bids.num_advertisers(); ++i) {
    nlohmann::json entry = {{"id", bids.advertiser_ids()[i]},
                            {"bids", nlohmann::json::object()}};
    for (const auto& [genre, value] : bids.column(i).entries) entry["bids"][genre] = value;
    advertisers.push_back(std::move(entry));
  }
  detail::write_json_file(path, {{"v_bar", bids.v_bar()}, {"advertisers", advertisers}});
}

// --- coherence: {"calibrated", "slots": [[per-genre values]]} ---

inline CoherenceMatrix load_coherence(const std::string& path, TaxonomyPtr taxonomy) {
  const auto doc = detail::load_json_file(path);
  std::vector<std::vector<double>> columns;
  for (const auto& slot : doc.at("slots")) columns.push_back(slot.get<std::vector<double>>());
  return CoherenceMatrix(std::move(taxonomy), std::move(columns),
                         doc.at("calibrated").get<bool>());
}

inline void save_coherence(const std::string& path, const CoherenceMatrix& coherence) {
  nlohmann::json slots = nlohmann::json::array();
  for (std::size_t j = 0; j < coherence.num_slots(); ++j) slots.push_back(coherence.column(j));
  detail::write_json_file(path, {{"calibrated", coherence.calibrated()}, {"slots", slots}});
}

// --- outcome: winners, payments, total ---

inline nlohmann::json outcome_to_json(const AuctionOutcome& outcome,
                                      const std::vector<std::string>& advertiser_ids) {
  nlohmann::json winners = nlohmann::json::array();
  for (const auto& [i, j] : outcome.allocation.pairs)
    winners.push_back({{"advertiser_id", advertiser_ids.at(static_cast<std::size_t>(i))},
                       {"slot", j},
                       {"welfare", outcome.per_winner_welfare.at(i)},
                       {"payment", outcome.payments.at(static_cast<std::size_t>(i))}});
  nlohmann::json doc = {{"winners", winners},
                        {"proxy_social_welfare", outcome.proxy_social_welfare},
                        {"losers_pay_zero", true}};
  if (outcome.relaxed_counterfactual) doc["relaxed_counterfactual"] = true;
  return doc;
}

// --- creatives: {"creatives": [{"advertiser_id", "text", "label"}]} ---

inline std::map<std::string, AdCreative> load_creatives(const std::string& path) {
  const auto doc = detail::load_json_file(path);
  std::map<std::string, AdCreative> out;
  for (const auto& entry : doc.at("creatives")) {
    AdCreative creative{entry.at("advertiser_id").get<std::string>(),
                        entry.at("text").get<std::string>(),
                        entry.at("label").get<std::string>()};
    if (creative.text.empty() || creative.label.empty())
      throw ValidationError("creative text and label must be non-empty");
    out[creative.advertiser_id] = std::move(creative);
  }
  return out;
}

// --- intent model (counterexample archiving) ---

inline nlohmann::json intent_model_to_json(const IntentModel& model) {
  nlohmann::json partition = nlohmann::json::object();
  for (std::size_t t = 0; t < model.num_intents(); ++t)
    partition[model.taxonomy->at(model.intent_genre[t]).id].push_back(model.intents[t]);
  nlohmann::json genres = nlohmann::json::array();
  for (const auto& g : model.taxonomy->genres()) genres.push_back({{"id", g.id}, {"name", g.name}});
  return {{"taxonomy", {{"genres", genres}}},
          {"intents", model.intents},
          {"partition", partition},
          {"slot_intent_dist", model.slot_intent_dist},
          {"intent_values", model.intent_values},
          {"advertiser_ids", model.advertiser_ids},
          {"v_bar", model.v_bar}};
}

inline IntentModel intent_model_from_json(const nlohmann::json& doc) {
  IntentModel model;
  std::vector<Genre> genres;
  for (const auto& g : doc.at("taxonomy").at("genres"))
    genres.push_back({g.at("id").get<std::string>(), g.value("name", "")});
  model.taxonomy = std::make_shared<const GenreTaxonomy>(std::move(genres));
  model.intents = doc.at("intents").get<std::vector<std::string>>();
  std::map<std::string, std::size_t> intent_index;
  for (std::size_t t = 0; t < model.intents.size(); ++t) intent_index[model.intents[t]] = t;
  model.intent_genre.assign(model.intents.size(), 0);
  for (const auto& [genre_id, members] : doc.at("partition").items()) {
    const auto g = model.taxonomy->require_index(genre_id);
    for (const auto& intent : members) model.intent_genre[intent_index.at(intent)] = g;
  }
  model.slot_intent_dist = doc.at("slot_intent_dist").get<std::vector<std::vector<double>>>();
  model.intent_values = doc.at("intent_values").get<std::vector<std::vector<double>>>();
  model.advertiser_ids = doc.at("advertiser_ids").get<std::vector<std::string>>();
  model.v_bar = doc.at("v_bar").get<double>();
  model.validate();
  return model;
}

// --- embeddings: {"dim", "sentences": [[...]], "genres": {id: [...]}} ---

inline EmbeddingSet load_embeddings(const std::string& path) {
  const auto doc = detail::load_json_file(path);
  EmbeddingSet set;
  set.dim = doc.at("dim").get<std::size_t>();
  for (const auto& vec : doc.at("sentences")) {
    EmbeddingVector e{vec.get<std::vector<double>>()};
    if (e.dim() != set.dim) throw DimensionError("sentence embedding has wrong dimension");
    set.sentences.push_back(std::move(e));
  }
  for (const auto& [genre, vec] : doc.at("genres").items()) {
    EmbeddingVector e{vec.get<std::vector<double>>()};
    if (e.dim() != set.dim) throw DimensionError("genre embedding has wrong dimension");
    set.genres[genre] = std::move(e);
  }
  return set;
}

// --- ratings CSV: "rater_id,task_id,score"; metric CSV: "task_id,score" ---

inline RatingsTable load_ratings_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty ratings file: " + path);

  std::vector<std::string> raters, tasks;
  std::map<std::string, std::size_t> rater_index, task_index;
  std::vector<std::tuple<std::size_t, std::size_t, double>> entries;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string rater, task, score;
    if (!std::getline(row, rater, ',') || !std::getline(row, task, ',') ||
        !std::getline(row, score))
      throw ValidationError("bad ratings row: " + line);
    if (!rater_index.count(rater)) {
      rater_index[rater] = raters.size();
      raters.push_back(rater);
    }
    if (!task_index.count(task)) {
      task_index[task] = tasks.size();
      tasks.push_back(task);
    }
    entries.emplace_back(rater_index[rater], task_index[task], std::stod(score));
  }
  std::vector<double> scores(raters.size() * tasks.size(), kMissingScore);
  for (const auto& [r, t, value] : entries) scores[r * tasks.size() + t] = value;
  return RatingsTable(std::move(raters), std::move(tasks), std::move(scores));
}

// Metric scores aligned to the given task order; every task must be present.
inline std::vector<double> load_metric_csv(const std::string& path,
                                           const std::vector<std::string>& tasks) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty metric file: " + path);
  std::map<std::string, double> by_task;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string task, score;
    if (!std::getline(row, task, ',') || !std::getline(row, score))
      throw ValidationError("bad metric row: " + line);
    by_task[task] = std::stod(score);
  }
  std::vector<double> out;
  out.reserve(tasks.size());
  for (const auto& task : tasks) {
    auto it = by_task.find(task);
    if (it == by_task.end()) throw ValidationError("metric file missing task: " + task);
    out.push_back(it->second);
  }
  return out;
}

}  // namespace genreads
