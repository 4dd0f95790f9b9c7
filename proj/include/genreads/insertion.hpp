#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "genreads/errors.hpp"
#include "genreads/matching.hpp"

namespace genreads {

// The ad-free LLM answer: M ordered sentences with M+1 insertion slots
// (before the first sentence, between each pair, after the last).
struct OrganicResponse {
  std::vector<std::string> sentences;
  std::string query;

  std::size_t num_sentences() const { return sentences.size(); }
  std::size_t num_slots() const { return sentences.size() + 1; }
};

struct AdCreative {
  std::string advertiser_id;
  std::string text;
  std::string label;  // disclosure label, rendered verbatim
};

namespace detail {

inline std::string normalize_whitespace(const std::string& text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

inline std::string trim(const std::string& text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return text.substr(b, e - b);
}

}  // namespace detail

// Rule-based sentence segmentation: terminator (. ? !) followed by
// whitespace, or a paragraph break. Deliberately simple; production systems
// would take structure from the generator itself.
inline OrganicResponse segment(const std::string& raw, std::string query = {}) {
  if (detail::trim(raw).empty()) throw ArgumentError("cannot segment empty text");
  OrganicResponse response;
  response.query = std::move(query);

  std::string current;
  for (std::size_t pos = 0; pos < raw.size(); ++pos) {
    const char c = raw[pos];
    if (c == '\n') {
      const auto sentence = detail::normalize_whitespace(current);
      if (!sentence.empty()) response.sentences.push_back(sentence);
      current.clear();
      continue;
    }
    current.push_back(c);
    if ((c == '.' || c == '?' || c == '!') && pos + 1 < raw.size() &&
        std::isspace(static_cast<unsigned char>(raw[pos + 1]))) {
      const auto sentence = detail::normalize_whitespace(current);
      if (!sentence.empty()) response.sentences.push_back(sentence);
      current.clear();
    }
  }
  const auto tail = detail::normalize_whitespace(current);
  if (!tail.empty()) response.sentences.push_back(tail);
  if (response.sentences.empty()) throw ArgumentError("segmentation produced no sentences");
  return response;
}

inline std::string join_sentences(const OrganicResponse& response) {
  std::string out;
  for (const auto& sentence : response.sentences) {
    if (!out.empty()) out.push_back(' ');
    out += sentence;
  }
  return out;
}

inline constexpr const char* kAdMarkerPrefix = "[Ad: ";

// Renders the final response. Organic sentences stay in order on shared
// lines; every winning creative gets its own line at its slot, wrapped as
// "[Ad: <label>] <text>" so disclosure is machine-detectable.
inline std::string render(const OrganicResponse& response, const Allocation& allocation,
                          const std::vector<std::string>& advertiser_ids,
                          const std::map<std::string, AdCreative>& creatives) {
  const std::size_t slots = response.num_slots();
  std::vector<const AdCreative*> by_slot(slots, nullptr);
  for (const auto& [adv, slot] : allocation.pairs) {
    if (slot < 0 || static_cast<std::size_t>(slot) >= slots)
      throw ArgumentError("allocation references slot outside the response");
    const auto& id = advertiser_ids.at(static_cast<std::size_t>(adv));
    auto it = creatives.find(id);
    if (it == creatives.end())
      throw ValidationError("no creative for winning advertiser: " + id);
    by_slot[static_cast<std::size_t>(slot)] = &it->second;
  }

  std::ostringstream out;
  bool line_open = false;
  auto emit_ad = [&](const AdCreative& ad) {
    if (line_open) out << '\n';
    std::string text = detail::normalize_whitespace(ad.text);
    out << kAdMarkerPrefix << ad.label << "] " << text << '\n';
    line_open = false;
  };
  for (std::size_t j = 0; j < slots; ++j) {
    if (by_slot[j] != nullptr) emit_ad(*by_slot[j]);
    if (j < response.num_sentences()) {
      if (line_open) out << ' ';
      out << response.sentences[j];
      line_open = true;
    }
  }
  if (line_open) out << '\n';
  return out.str();
}

// Removes every "[Ad: ...]" line and rejoins the organic sentences; the
// inverse of render modulo whitespace normalization.
inline std::string strip_ads(const std::string& rendered) {
  std::istringstream in(rendered);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind(kAdMarkerPrefix, 0) == 0) continue;
    const auto content = detail::normalize_whitespace(line);
    if (content.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += content;
  }
  return out;
}

inline std::size_t count_ad_markers(const std::string& rendered) {
  std::size_t count = 0, pos = 0;
  const std::string marker = kAdMarkerPrefix;
  while ((pos = rendered.find(marker, pos)) != std::string::npos) {
    ++count;
    pos += marker.size();
  }
  return count;
}

}  // namespace genreads
