#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "genreads/errors.hpp"

namespace genreads {

enum class CalibrationMethod { kSoftmax, kClipNormalize };

struct CalibrationSpec {
  CalibrationMethod method = CalibrationMethod::kSoftmax;
  double temperature = 1.0;  // softmax only
};

// Maps a raw signal vector to a probability distribution over genres.
// Softmax is computed with a max-shift; clip-normalize zeroes negatives and
// rejects all-nonpositive inputs (there is nothing to normalize).
inline std::vector<double> calibrate(std::span<const double> signals,
                                     const CalibrationSpec& spec) {
  if (signals.empty()) throw ArgumentError("calibrate requires at least one signal");
  for (double s : signals)
    if (!std::isfinite(s)) throw ValidationError("calibrate requires finite signals");

  std::vector<double> out(signals.size());
  if (spec.method == CalibrationMethod::kSoftmax) {
    if (!(spec.temperature > 0.0)) throw ArgumentError("softmax temperature must be positive");
    const double peak = *std::max_element(signals.begin(), signals.end());
    double sum = 0.0;
    for (std::size_t g = 0; g < signals.size(); ++g) {
      out[g] = std::exp((signals[g] - peak) / spec.temperature);
      sum += out[g];
    }
    for (auto& p : out) p /= sum;
  } else {
    double sum = 0.0;
    for (std::size_t g = 0; g < signals.size(); ++g) {
      out[g] = std::max(signals[g], 0.0);
      sum += out[g];
    }
    if (sum <= 0.0)
      throw ValidationError("clip-normalize received all-nonpositive signals");
    for (auto& p : out) p /= sum;
  }
  return out;
}

struct EmbeddingVector {
  std::vector<double> values;
  std::size_t dim() const { return values.size(); }
};

namespace detail {

inline double norm(const EmbeddingVector& v) {
  double acc = 0.0;
  for (double x : v.values) acc += x * x;
  return std::sqrt(acc);
}

inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) throw ArgumentError("embedding dimension mismatch");
  if (a.dim() == 0) throw ArgumentError("empty embedding vector");
  const double na = norm(a), nb = norm(b);
  if (na <= 0.0 || nb <= 0.0) throw ArgumentError("zero-norm embedding vector");
  double dot = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) dot += a.values[k] * b.values[k];
  return dot / (na * nb);
}

}  // namespace detail

// Raw embedding-based coherence signal for a slot: how well the genre fits
// between the two adjacent sentences, minus the cost of breaking their flow.
inline double embedding_signal(const EmbeddingVector& prev, const EmbeddingVector& next,
                               const EmbeddingVector& genre) {
  return detail::cosine(prev, genre) + detail::cosine(genre, next) -
         detail::cosine(prev, next);
}

}  // namespace genreads
