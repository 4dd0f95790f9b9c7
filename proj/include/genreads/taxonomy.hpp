#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "genreads/errors.hpp"

namespace genreads {

struct Genre {
  std::string id;
  std::string name;
};

// Ordered, immutable genre set. The ordering fixes the index space for every
// vector and matrix in the engine, so all inputs to one auction must share
// the same taxonomy instance (or an identical one).
class GenreTaxonomy {
 public:
  explicit GenreTaxonomy(std::vector<Genre> genres) : genres_(std::move(genres)) {
    if (genres_.empty()) throw ValidationError("taxonomy must contain at least one genre");
    for (std::size_t i = 0; i < genres_.size(); ++i) {
      if (genres_[i].id.empty()) throw ValidationError("genre id must be non-empty");
      if (!index_.emplace(genres_[i].id, i).second)
        throw ValidationError("duplicate genre id: " + genres_[i].id);
    }
  }

  std::size_t size() const { return genres_.size(); }
  const Genre& at(std::size_t i) const { return genres_.at(i); }
  const std::vector<Genre>& genres() const { return genres_; }

  std::optional<std::size_t> index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require_index(const std::string& id) const {
    auto idx = index_of(id);
    if (!idx) throw ValidationError("unknown genre id: " + id);
    return *idx;
  }

  // Same ids in the same order; names are cosmetic.
  bool same_as(const GenreTaxonomy& other) const {
    if (genres_.size() != other.genres_.size()) return false;
    for (std::size_t i = 0; i < genres_.size(); ++i)
      if (genres_[i].id != other.genres_[i].id) return false;
    return true;
  }

 private:
  std::vector<Genre> genres_;
  std::unordered_map<std::string, std::size_t> index_;
};

using TaxonomyPtr = std::shared_ptr<const GenreTaxonomy>;

inline void require_same_taxonomy(const GenreTaxonomy& a, const GenreTaxonomy& b) {
  if (!a.same_as(b)) throw DimensionError("inputs do not share the same genre taxonomy");
}

}  // namespace genreads
