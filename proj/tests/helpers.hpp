#pragma once

#include <memory>
#include <string>
#include <vector>

#include "genreads/bids.hpp"
#include "genreads/coherence_matrix.hpp"
#include "genreads/rng.hpp"
#include "genreads/taxonomy.hpp"
#include "genreads/welfare.hpp"

namespace genreads::testing {

inline TaxonomyPtr make_taxonomy(std::size_t l) {
  std::vector<Genre> genres;
  for (std::size_t g = 0; g < l; ++g)
    genres.push_back({"g" + std::to_string(g), "Genre " + std::to_string(g)});
  return std::make_shared<const GenreTaxonomy>(std::move(genres));
}

inline BidMatrix random_bids(TaxonomyPtr taxonomy, std::size_t n, double v_bar, SplitRng& rng) {
  std::vector<BidVector> columns(n);
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    columns[i].v_bar = v_bar;
    for (std::size_t g = 0; g < taxonomy->size(); ++g)
      columns[i].entries[taxonomy->at(g).id] = rng.uniform(0.0, v_bar);
    ids[i] = "adv" + std::to_string(i);
  }
  return BidMatrix(std::move(taxonomy), std::move(ids), std::move(columns));
}

inline CoherenceMatrix random_calibrated_coherence(TaxonomyPtr taxonomy, std::size_t slots,
                                                   SplitRng& rng) {
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < slots; ++j) cols.push_back(rng.dirichlet_flat(taxonomy->size()));
  return CoherenceMatrix(std::move(taxonomy), std::move(cols), true);
}

inline WelfareMatrix random_welfare(std::size_t n, std::size_t s, SplitRng& rng,
                                    double scale = 1.0) {
  std::vector<double> values(n * s);
  for (auto& v : values) v = rng.uniform(0.0, scale);
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = "adv" + std::to_string(i);
  return WelfareMatrix(std::move(ids), s, std::move(values));
}

inline std::string data_path(const std::string& relative) {
  return std::string(GENREADS_DATA_DIR) + "/" + relative;
}

}  // namespace genreads::testing
