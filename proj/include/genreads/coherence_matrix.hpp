#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "genreads/errors.hpp"
#include "genreads/taxonomy.hpp"

namespace genreads {

inline constexpr double kSimplexTolerance = 1e-9;

// L x S matrix of per-slot genre coherence. Uncalibrated columns hold raw
// real-valued signals; calibrated columns are probability distributions over
// genres (the estimated chance that the active intent at the slot falls in
// each genre).
class CoherenceMatrix {
 public:
  CoherenceMatrix(TaxonomyPtr taxonomy, std::vector<std::vector<double>> columns,
                  bool calibrated)
      : taxonomy_(std::move(taxonomy)), columns_(std::move(columns)), calibrated_(calibrated) {
    if (!taxonomy_) throw ArgumentError("coherence matrix requires a taxonomy");
    if (columns_.empty()) throw ValidationError("coherence matrix needs at least one slot");
    for (const auto& col : columns_)
      if (col.size() != taxonomy_->size())
        throw DimensionError("coherence column length does not match genre count");
  }

  const GenreTaxonomy& taxonomy() const { return *taxonomy_; }
  TaxonomyPtr taxonomy_ptr() const { return taxonomy_; }
  std::size_t num_slots() const { return columns_.size(); }
  bool calibrated() const { return calibrated_; }
  const std::vector<double>& column(std::size_t j) const { return columns_.at(j); }
  double at(std::size_t g, std::size_t j) const { return columns_.at(j).at(g); }

  // True when every column is a probability distribution within tolerance.
  bool columns_on_simplex(double tol = kSimplexTolerance) const {
    for (const auto& col : columns_) {
      double sum = 0.0;
      for (double v : col) {
        if (!std::isfinite(v) || v < -tol) return false;
        sum += v;
      }
      if (std::abs(sum - 1.0) > tol) return false;
    }
    return true;
  }

 private:
  TaxonomyPtr taxonomy_;
  std::vector<std::vector<double>> columns_;
  bool calibrated_;
};

}  // namespace genreads
