#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "genreads/errors.hpp"
#include "genreads/rng.hpp"

namespace genreads {

// Average ranks (1-based); tied values share the mean of their rank range.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t end = pos;
    while (end + 1 < n && values[order[end + 1]] == values[order[pos]]) ++end;
    const double shared = (static_cast<double>(pos + 1) + static_cast<double>(end + 1)) / 2.0;
    for (std::size_t k = pos; k <= end; ++k) ranks[order[k]] = shared;
    pos = end + 1;
  }
  return ranks;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ArgumentError("pearson requires equal-length vectors");
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) throw ArgumentError("pearson requires at least 2 observations");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw ValidationError("correlation undefined for a constant vector");
  return sxy / std::sqrt(sxx * syy);
}

// Spearman's rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ArgumentError("spearman requires equal-length vectors");
  if (x.size() < 2) throw ArgumentError("spearman requires at least 2 observations");
  return pearson(average_ranks(x), average_ranks(y));
}

inline constexpr double kMissingScore = std::numeric_limits<double>::quiet_NaN();

// Raters x tasks score table; NaN marks a missing rating. Tasks are
// typically (genre, position) pairs but any string ids work.
class RatingsTable {
 public:
  RatingsTable(std::vector<std::string> raters, std::vector<std::string> tasks,
               std::vector<double> scores)
      : raters_(std::move(raters)), tasks_(std::move(tasks)), scores_(std::move(scores)) {
    if (tasks_.size() < 2) throw ValidationError("ratings table needs at least 2 tasks");
    if (scores_.size() != raters_.size() * tasks_.size())
      throw DimensionError("ratings table score count does not match raters x tasks");
  }

  std::size_t num_raters() const { return raters_.size(); }
  std::size_t num_tasks() const { return tasks_.size(); }
  const std::vector<std::string>& raters() const { return raters_; }
  const std::vector<std::string>& tasks() const { return tasks_; }
  double score(std::size_t rater, std::size_t task) const {
    return scores_[rater * tasks_.size() + task];
  }
  bool has(std::size_t rater, std::size_t task) const { return !std::isnan(score(rater, task)); }

  // Mean score per task over a rater subset (all raters when empty mask),
  // NaN where nobody in the subset rated the task.
  std::vector<double> mean_scores(const std::vector<char>& include = {}) const {
    std::vector<double> means(num_tasks(), kMissingScore);
    for (std::size_t t = 0; t < num_tasks(); ++t) {
      double sum = 0.0;
      int count = 0;
      for (std::size_t r = 0; r < num_raters(); ++r) {
        if (!include.empty() && !include[r]) continue;
        if (!has(r, t)) continue;
        sum += score(r, t);
        ++count;
      }
      if (count > 0) means[t] = sum / count;
    }
    return means;
  }

 private:
  std::vector<std::string> raters_;
  std::vector<std::string> tasks_;
  std::vector<double> scores_;
};

// Correlation over pairwise-complete tasks only.
inline double spearman_pairwise(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (std::isnan(x[k]) || std::isnan(y[k])) continue;
    xs.push_back(x[k]);
    ys.push_back(y[k]);
  }
  return spearman(xs, ys);
}

struct RaterCorrelation {
  std::string rater;
  double rho;
};

// For each rater: correlation of their ratings with the group mean computed
// without them.
inline std::vector<RaterCorrelation> individual_to_group(const RatingsTable& table) {
  if (table.num_raters() < 3)
    throw ArgumentError("individual-to-group analysis needs at least 3 raters");
  std::vector<RaterCorrelation> out;
  for (std::size_t r = 0; r < table.num_raters(); ++r) {
    std::vector<char> others(table.num_raters(), 1);
    others[r] = 0;
    const auto group_mean = table.mean_scores(others);
    std::vector<double> own(table.num_tasks());
    for (std::size_t t = 0; t < table.num_tasks(); ++t)
      own[t] = table.has(r, t) ? table.score(r, t) : kMissingScore;
    out.push_back({table.raters()[r], spearman_pairwise(own, group_mean)});
  }
  return out;
}

struct EquivalenceCurve {
  std::vector<double> mean_rho;  // index Q-1
  double metric_rho = 0.0;
  int equivalence = -1;  // smallest Q whose mean rho >= metric_rho; -1 = saturated
};

// Rater-equivalence of an automated metric: for each committee size Q,
// average the correlation between a random committee's mean and the mean of
// everyone outside the committee.
inline EquivalenceCurve committee_equivalence(const RatingsTable& table,
                                              const std::vector<double>& metric_scores,
                                              int max_committee, int resamples,
                                              std::uint64_t seed) {
  const int raters = static_cast<int>(table.num_raters());
  if (max_committee < 1 || max_committee >= raters)
    throw ArgumentError("max committee size must be in [1, raters-1]");
  if (resamples < 1) throw ArgumentError("resamples must be at least 1");
  if (metric_scores.size() != table.num_tasks())
    throw DimensionError("metric score count does not match task count");

  EquivalenceCurve curve;
  curve.metric_rho = spearman_pairwise(metric_scores, table.mean_scores());

  SplitRng rng(seed);
  for (int q = 1; q <= max_committee; ++q) {
    double total = 0.0;
    int used = 0;
    SplitRng q_rng = rng.fork(q);
    for (int draw = 0; draw < resamples; ++draw) {
      SplitRng draw_rng = q_rng.fork(draw);
      const auto committee = draw_rng.sample_without_replacement(raters, q);
      std::vector<char> in_committee(raters, 0), outside(raters, 1);
      for (int r : committee) {
        in_committee[r] = 1;
        outside[r] = 0;
      }
      try {
        total += spearman_pairwise(table.mean_scores(in_committee), table.mean_scores(outside));
        ++used;
      } catch (const Error&) {
        // Degenerate draw (constant vector); skipped from the average.
      }
    }
    if (used == 0) throw ValidationError("all committee draws were degenerate");
    curve.mean_rho.push_back(total / used);
    if (curve.equivalence == -1 && curve.mean_rho.back() >= curve.metric_rho)
      curve.equivalence = q;
  }
  return curve;
}

}  // namespace genreads
