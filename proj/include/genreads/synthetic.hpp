#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "genreads/bids.hpp"
#include "genreads/coherence_matrix.hpp"
#include "genreads/errors.hpp"
#include "genreads/rng.hpp"
#include "genreads/taxonomy.hpp"

namespace genreads {

// Anonymous L-genre taxonomy for synthetic workloads.
inline TaxonomyPtr synthetic_taxonomy(std::size_t l) {
  std::vector<Genre> genres;
  genres.reserve(l);
  for (std::size_t g = 0; g < l; ++g) {
    const std::string id = "g" + std::to_string(g);
    genres.push_back({id, "Genre " + std::to_string(g)});
  }
  return std::make_shared<const GenreTaxonomy>(std::move(genres));
}

// Sparse-interest bids: each advertiser picks max(1, Poisson(lambda=2))
// distinct genres uniformly and bids Uniform[0,1] on them; v_bar = 1.
inline BidMatrix synthetic_bids(TaxonomyPtr taxonomy, std::size_t advertisers,
                                std::uint64_t seed) {
  if (advertisers < 1) throw ArgumentError("need at least one advertiser");
  const auto l = static_cast<int>(taxonomy->size());
  std::vector<BidVector> columns(advertisers);
  std::vector<std::string> ids(advertisers);
  SplitRng rng(seed);
  for (std::size_t i = 0; i < advertisers; ++i) {
    SplitRng adv = rng.fork(i);
    const int picks = std::min(l, std::max(1, adv.poisson(2.0)));
    columns[i].v_bar = 1.0;
    for (int g : adv.sample_without_replacement(l, picks))
      columns[i].entries[taxonomy->at(static_cast<std::size_t>(g)).id] = adv.uniform();
    ids[i] = "adv" + std::to_string(i);
  }
  return BidMatrix(std::move(taxonomy), std::move(ids), std::move(columns));
}

// Coherence: Uniform[0,1] entries with exactly floor(L*S/2) positions zeroed;
// the zero set is re-drawn until every slot keeps at least one nonzero
// signal. Columns are then clip-normalized onto the simplex.
inline CoherenceMatrix synthetic_coherence(TaxonomyPtr taxonomy, std::size_t slots,
                                           std::uint64_t seed) {
  if (slots < 1) throw ArgumentError("need at least one slot");
  const std::size_t l = taxonomy->size();
  const auto total = static_cast<int>(l * slots);
  const int zeros = total / 2;
  SplitRng rng(seed);

  std::vector<std::vector<double>> raw(slots, std::vector<double>(l));
  SplitRng draw = rng.fork(0);
  for (auto& col : raw)
    for (auto& v : col) v = draw.uniform();

  for (std::uint64_t attempt = 0;; ++attempt) {
    SplitRng zero_rng = rng.fork(1 + attempt);
    const auto zeroed = zero_rng.sample_without_replacement(total, zeros);
    std::vector<int> nonzero_per_slot(slots, static_cast<int>(l));
    for (int flat : zeroed) --nonzero_per_slot[static_cast<std::size_t>(flat) / l];
    if (std::any_of(nonzero_per_slot.begin(), nonzero_per_slot.end(),
                    [](int c) { return c == 0; }))
      continue;  // a slot lost all coherence; re-draw the zero set

    std::vector<std::vector<double>> cols = raw;
    for (int flat : zeroed)
      cols[static_cast<std::size_t>(flat) / l][static_cast<std::size_t>(flat) % l] = 0.0;
    for (auto& col : cols) {
      double sum = 0.0;
      for (double v : col) sum += v;
      for (auto& v : col) v /= sum;
    }
    return CoherenceMatrix(std::move(taxonomy), std::move(cols), /*calibrated=*/true);
  }
}

struct SyntheticWorkload {
  TaxonomyPtr taxonomy;
  BidMatrix bids;
  CoherenceMatrix coherence;
};

inline SyntheticWorkload synthetic_workload(std::size_t advertisers, std::size_t sentences,
                                            std::size_t genres, std::uint64_t seed) {
  auto taxonomy = synthetic_taxonomy(genres);
  SplitRng rng(seed);
  return SyntheticWorkload{
      taxonomy,
      synthetic_bids(taxonomy, advertisers, rng.fork(1).next()),
      synthetic_coherence(taxonomy, sentences + 1, rng.fork(2).next()),
  };
}

}  // namespace genreads
