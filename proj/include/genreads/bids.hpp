#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "genreads/errors.hpp"
#include "genreads/taxonomy.hpp"

namespace genreads {

// Sparse per-advertiser genre bids. Genres absent from the map bid 0.
// Range checks ([0, v_bar], finiteness) are deferred to validate_inputs so
// that malformed data can be reported rather than rejected at construction.
struct BidVector {
  std::map<std::string, double> entries;  // genre id -> bid, ordered for determinism
  double v_bar = 1.0;

  double bid_for(const std::string& genre_id) const {
    auto it = entries.find(genre_id);
    return it == entries.end() ? 0.0 : it->second;
  }
};

// L x N bid matrix, one sparse column per advertiser. Dense columns are
// materialized only where the welfare product needs them.
class BidMatrix {
 public:
  BidMatrix(TaxonomyPtr taxonomy, std::vector<std::string> advertiser_ids,
            std::vector<BidVector> columns)
      : taxonomy_(std::move(taxonomy)),
        advertiser_ids_(std::move(advertiser_ids)),
        columns_(std::move(columns)) {
    if (!taxonomy_) throw ArgumentError("bid matrix requires a taxonomy");
    if (columns_.empty()) throw ValidationError("bid matrix needs at least one advertiser");
    if (advertiser_ids_.size() != columns_.size())
      throw DimensionError("advertiser id count does not match bid column count");
    for (std::size_t i = 1; i < columns_.size(); ++i)
      if (columns_[i].v_bar != columns_[0].v_bar)
        throw ValidationError("all bid columns must share the same v_bar");
  }

  const GenreTaxonomy& taxonomy() const { return *taxonomy_; }
  TaxonomyPtr taxonomy_ptr() const { return taxonomy_; }
  std::size_t num_advertisers() const { return columns_.size(); }
  double v_bar() const { return columns_[0].v_bar; }
  const std::vector<std::string>& advertiser_ids() const { return advertiser_ids_; }
  const BidVector& column(std::size_t i) const { return columns_.at(i); }

  // Dense L-vector for advertiser i, in taxonomy order.
  std::vector<double> dense_column(std::size_t i) const {
    std::vector<double> out(taxonomy_->size(), 0.0);
    for (const auto& [gid, value] : columns_.at(i).entries) {
      auto idx = taxonomy_->index_of(gid);
      if (idx) out[*idx] = value;
    }
    return out;
  }

  BidMatrix with_column(std::size_t i, BidVector replacement) const {
    auto cols = columns_;
    replacement.v_bar = v_bar();
    cols.at(i) = std::move(replacement);
    return BidMatrix(taxonomy_, advertiser_ids_, std::move(cols));
  }

 private:
  TaxonomyPtr taxonomy_;
  std::vector<std::string> advertiser_ids_;
  std::vector<BidVector> columns_;
};

}  // namespace genreads
