#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "genreads/auction.hpp"
#include "genreads/synthetic.hpp"

namespace genreads {

struct BenchmarkCell {
  std::size_t advertisers = 0;
  std::size_t slots = 0;
  int trials = 0;
  double mean_seconds = 0.0;
};

// Times one end-to-end auction: welfare product, allocation, and payments.
// Input generation is excluded from the measured span.
inline double time_auction_seconds(const BidMatrix& bids, const CoherenceMatrix& coherence,
                                   const AuctionConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const auto outcome = detail::run_auction(proxy_welfare(bids, coherence), config,
                                           PaymentRule::kVcg);
  const auto stop = std::chrono::steady_clock::now();
  // Touch the outcome so the whole computation stays observable.
  volatile double sink = outcome.proxy_social_welfare;
  (void)sink;
  return std::chrono::duration<double>(stop - start).count();
}

// Mean auction wall-clock over a grid of (N, slots) cells; fresh seeded
// inputs per trial, derived by counter so trial order is irrelevant.
inline std::vector<BenchmarkCell> run_benchmark(const std::vector<std::size_t>& advertiser_counts,
                                                const std::vector<std::size_t>& slot_counts,
                                                std::size_t genres, int k, int trials,
                                                std::uint64_t seed) {
  std::vector<BenchmarkCell> cells;
  AuctionConfig config;
  config.K = k;
  auto taxonomy = synthetic_taxonomy(genres);
  SplitRng rng(seed);
  std::uint64_t cell_index = 0;
  for (std::size_t n : advertiser_counts) {
    for (std::size_t s : slot_counts) {
      SplitRng cell_rng = rng.fork(cell_index++);
      double total = 0.0;
      for (int trial = 0; trial < trials; ++trial) {
        SplitRng trial_rng = cell_rng.fork(trial);
        const auto bids = synthetic_bids(taxonomy, n, trial_rng.fork(1).next());
        const auto coherence = synthetic_coherence(taxonomy, s, trial_rng.fork(2).next());
        total += time_auction_seconds(bids, coherence, config);
      }
      cells.push_back({n, s, trials, total / trials});
    }
  }
  return cells;
}

}  // namespace genreads
