#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "genreads/bids.hpp"
#include "genreads/coherence_matrix.hpp"
#include "genreads/errors.hpp"

namespace genreads {

// N x S estimated welfare: entry (i, j) is the value advertiser i is
// predicted to obtain from an impression at slot j.
class WelfareMatrix {
 public:
  WelfareMatrix(std::vector<std::string> advertiser_ids, std::size_t slots,
                std::vector<double> values)
      : advertiser_ids_(std::move(advertiser_ids)), slots_(slots), values_(std::move(values)) {
    if (slots_ == 0) throw DimensionError("welfare matrix needs at least one slot");
    if (values_.size() != advertiser_ids_.size() * slots_)
      throw DimensionError("welfare matrix value count does not match N x S");
  }

  std::size_t num_advertisers() const { return advertiser_ids_.size(); }
  std::size_t num_slots() const { return slots_; }
  const std::vector<std::string>& advertiser_ids() const { return advertiser_ids_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * slots_ + j]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<std::string> advertiser_ids_;
  std::size_t slots_;
  std::vector<double> values_;
};

struct AuctionConfig {
  int K = 1;
  double tie_epsilon = 0.0;  // welfare gaps below this count as ties
};

// Proxy welfare W[i][j] = sum_g b_{i,g} * c_{g,j}: each advertiser's bids
// weighted by the slot's calibrated coherence distribution. This is the
// rank-L factorization the whole auction optimizes.
inline WelfareMatrix proxy_welfare(const BidMatrix& bids, const CoherenceMatrix& coherence) {
  require_same_taxonomy(bids.taxonomy(), coherence.taxonomy());
  if (!coherence.calibrated())
    throw ValidationError("proxy welfare requires a calibrated coherence matrix");

  const std::size_t n = bids.num_advertisers();
  const std::size_t s = coherence.num_slots();
  std::vector<double> values(n * s, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    // Sparse accumulation: only the genres the advertiser actually bids on.
    for (const auto& [gid, bid] : bids.column(i).entries) {
      auto g = bids.taxonomy().index_of(gid);
      if (!g) continue;
      for (std::size_t j = 0; j < s; ++j) values[i * s + j] += bid * coherence.at(*g, j);
    }
  }
  return WelfareMatrix(bids.advertiser_ids(), s, std::move(values));
}

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Structural checks on one auction's inputs. Returns findings instead of
// throwing so the CLI can report them all at once.
inline ValidationReport validate_inputs(const BidMatrix& bids, const CoherenceMatrix& coherence,
                                        const AuctionConfig& config) {
  ValidationReport report;
  auto add = [&report](std::string code, std::string message) {
    report.violations.push_back({std::move(code), std::move(message)});
  };

  if (!bids.taxonomy().same_as(coherence.taxonomy()))
    add("taxonomy_mismatch", "bids and coherence use different genre taxonomies");

  const double v_bar = bids.v_bar();
  if (!(v_bar > 0.0) || !std::isfinite(v_bar))
    add("bad_v_bar", "v_bar must be positive and finite");

  for (std::size_t i = 0; i < bids.num_advertisers(); ++i) {
    for (const auto& [gid, value] : bids.column(i).entries) {
      const std::string who = bids.advertiser_ids()[i] + "/" + gid;
      if (!bids.taxonomy().index_of(gid))
        add("unknown_genre", "bid on unknown genre: " + who);
      if (!std::isfinite(value))
        add("nan_bid", "non-finite bid: " + who);
      else if (value < 0.0 || value > v_bar)
        add("bid_out_of_range", "bid outside [0, v_bar]: " + who + " = " + std::to_string(value));
    }
  }

  for (std::size_t j = 0; j < coherence.num_slots(); ++j) {
    double sum = 0.0;
    bool bad = false;
    for (double v : coherence.column(j)) {
      if (!std::isfinite(v)) {
        add("nan_coherence", "non-finite coherence entry in slot " + std::to_string(j));
        bad = true;
        break;
      }
      if (coherence.calibrated() && v < -kSimplexTolerance) {
        add("negative_coherence", "negative coherence entry in slot " + std::to_string(j));
        bad = true;
        break;
      }
      sum += v;
    }
    if (coherence.calibrated() && !bad && std::abs(sum - 1.0) > kSimplexTolerance)
      add("non_simplex_column",
          "calibrated coherence column " + std::to_string(j) + " sums to " + std::to_string(sum));
  }
  if (!coherence.calibrated())
    add("uncalibrated_coherence", "auction inputs require a calibrated coherence matrix");

  const auto max_k =
      static_cast<int>(std::min(bids.num_advertisers(), coherence.num_slots()));
  if (config.K < 1)
    add("bad_k", "K must be at least 1");
  else if (config.K > max_k)
    add("k_exceeds_limit", "K exceeds min(N,S): K=" + std::to_string(config.K) +
                               ", min(N,S)=" + std::to_string(max_k));
  return report;
}

}  // namespace genreads
