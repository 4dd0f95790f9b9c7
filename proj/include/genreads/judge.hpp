#pragma once

#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "genreads/errors.hpp"
#include "genreads/insertion.hpp"
#include "genreads/taxonomy.hpp"

namespace genreads {

struct GenreRating {
  int score = 0;  // 1..5
  std::string explanation;
};

// One complete per-slot rating: every taxonomy genre present, every score in
// range. Partial ratings never escape the client (all-or-error).
using JudgeRating = std::map<std::string, GenreRating>;

struct JudgeConfig {
  std::string base_url = "http://localhost:8000";
  std::string path = "/v1/chat/completions";
  std::string model = "judge";
  std::string api_key_env = "GENREADS_JUDGE_API_KEY";
  int timeout_seconds = 60;
  int max_retries = 3;
};

inline std::string judge_system_prompt() {
  return "You are an expert in digital advertising and user experience. Your task is to "
         "rate how suitable different ad genres would be if inserted into a specific "
         "location within an LLM-generated response.";
}

// User prompt for one slot: the surrounding text is split at the slot and the
// genre list is templated from the taxonomy.
inline std::string judge_user_prompt(const std::string& context, const std::string& query,
                                     const std::string& before_slot,
                                     const std::string& after_slot,
                                     const GenreTaxonomy& taxonomy) {
  std::string genre_list;
  for (std::size_t g = 0; g < taxonomy.size(); ++g)
    genre_list += std::to_string(g + 1) + ". " + taxonomy.at(g).name + "\n";

  std::string prompt;
  prompt += "Context: " + context + "\n";
  prompt += "User Query: " + query + "\n\n";
  prompt +=
      "The LLM response contains an ad slot (marked as [Ad Slot]) where an advertisement "
      "could be inserted.\n\n";
  prompt += "Here is the text surrounding Ad Slot:\n\n";
  prompt += before_slot + "\n";
  prompt += "[Ad Slot] (THIS IS WHERE THE AD WOULD BE INSERTED)\n";
  prompt += after_slot + "\n\n";
  prompt +=
      "For each of the following ad genres, rate the suitability of inserting an ad from "
      "that genre into this slot on a scale from 1 (poor) to 5 (excellent).\n\n";
  prompt += "When rating, consider:\n";
  prompt += "- Fluency: Would the ad fit naturally within the flow of the text?\n";
  prompt += "- Coherence: Would the ad align logically with the context of the response?\n\n";
  prompt += "Here are the ad genres to rate:\n\nAd Genres:\n" + genre_list + "\n";
  prompt += "For each genre, provide:\n1. A rating from 1-5\n2. A brief explanation for your "
            "rating\n\n";
  prompt += "Format your response as JSON with this structure:\n";
  prompt += "{\n  \"ratings\": {\n";
  for (std::size_t g = 0; g < taxonomy.size() && g < 2; ++g)
    prompt += "    \"" + taxonomy.at(g).name + "\": { \"explanation\": \"...\", \"score\": X },\n";
  prompt += "    ...\n  }\n}\n\n";
  prompt += "Ensure your ratings are justified based on the context and the natural flow of "
            "the text.";
  return prompt;
}

namespace detail {

// Judges often wrap JSON in markdown fences; cut down to the outermost object.
inline std::string extract_json_object(const std::string& content) {
  const auto begin = content.find('{');
  const auto end = content.rfind('}');
  if (begin == std::string::npos || end == std::string::npos || end < begin) return content;
  return content.substr(begin, end - begin + 1);
}

}  // namespace detail

// Parses the judge's message content: {"ratings": {genre: {explanation, score}}}.
// Genres are matched by name first, then id. Throws ProviderError (with the
// raw payload) on anything incomplete or out of range.
inline JudgeRating parse_judge_content(const std::string& content,
                                       const GenreTaxonomy& taxonomy) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(detail::extract_json_object(content));
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(std::string("judge returned malformed JSON: ") + e.what(), content);
  }
  if (!doc.contains("ratings") || !doc["ratings"].is_object())
    throw ProviderError("judge response missing 'ratings' object", content);
  const auto& ratings = doc["ratings"];

  JudgeRating out;
  for (std::size_t g = 0; g < taxonomy.size(); ++g) {
    const auto& genre = taxonomy.at(g);
    const nlohmann::json* entry = nullptr;
    if (ratings.contains(genre.name)) entry = &ratings[genre.name];
    else if (ratings.contains(genre.id)) entry = &ratings[genre.id];
    if (entry == nullptr)
      throw ProviderError("judge response missing genre: " + genre.name, content);
    if (!entry->contains("score") || !(*entry)["score"].is_number_integer())
      throw ProviderError("judge score missing or non-integer for genre: " + genre.name,
                          content);
    const int score = (*entry)["score"].get<int>();
    if (score < 1 || score > 5)
      throw ProviderError("judge score outside 1..5 for genre " + genre.name + ": " +
                              std::to_string(score),
                          content);
    GenreRating rating;
    rating.score = score;
    if (entry->contains("explanation") && (*entry)["explanation"].is_string())
      rating.explanation = (*entry)["explanation"].get<std::string>();
    out[genre.id] = rating;
  }
  return out;
}

// HTTP client for a chat-completions-style judge endpoint. Malformed
// responses are retried up to max_retries; transport failures too.
class JudgeClient {
 public:
  explicit JudgeClient(JudgeConfig config) : config_(std::move(config)) {}

  JudgeRating rate_slot(const std::string& context, const std::string& query,
                        const std::string& before_slot, const std::string& after_slot,
                        const GenreTaxonomy& taxonomy) const {
    nlohmann::json request = {
        {"model", config_.model},
        {"messages",
         {{{"role", "system"}, {"content", judge_system_prompt()}},
          {{"role", "user"},
           {"content", judge_user_prompt(context, query, before_slot, after_slot, taxonomy)}}}},
    };

    std::string last_error;
    std::string last_payload;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      httplib::Client client(config_.base_url);
      client.set_read_timeout(config_.timeout_seconds, 0);
      client.set_connection_timeout(config_.timeout_seconds, 0);
      httplib::Headers headers;
      if (const char* key = std::getenv(config_.api_key_env.c_str()))
        headers.emplace("Authorization", std::string("Bearer ") + key);

      auto res = client.Post(config_.path, headers, request.dump(), "application/json");
      if (!res) {
        last_error = "transport failure contacting judge endpoint";
        continue;
      }
      if (res->status != 200) {
        last_error = "judge endpoint returned HTTP " + std::to_string(res->status);
        last_payload = res->body;
        continue;
      }
      try {
        const auto body = nlohmann::json::parse(res->body);
        const auto content =
            body.at("choices").at(0).at("message").at("content").get<std::string>();
        return parse_judge_content(content, taxonomy);
      } catch (const ProviderError& e) {
        last_error = e.what();
        last_payload = e.payload();
      } catch (const nlohmann::json::exception& e) {
        last_error = std::string("unexpected judge envelope: ") + e.what();
        last_payload = res->body;
      }
    }
    throw ProviderError("judge request failed after " + std::to_string(config_.max_retries + 1) +
                            " attempts: " + last_error,
                        last_payload);
  }

 private:
  JudgeConfig config_;
};

// Slot neighborhood text for prompting: everything before / after the slot.
inline std::pair<std::string, std::string> split_at_slot(const OrganicResponse& response,
                                                         std::size_t slot) {
  if (slot >= response.num_slots()) throw ArgumentError("slot index out of range");
  std::string before, after;
  for (std::size_t m = 0; m < response.num_sentences(); ++m) {
    auto& target = m < slot ? before : after;
    if (!target.empty()) target.push_back(' ');
    target += response.sentences[m];
  }
  return {before, after};
}

}  // namespace genreads
