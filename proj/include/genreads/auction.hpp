#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "genreads/bids.hpp"
#include "genreads/coherence_matrix.hpp"
#include "genreads/errors.hpp"
#include "genreads/matching.hpp"
#include "genreads/rng.hpp"
#include "genreads/welfare.hpp"

namespace genreads {

inline constexpr double kIncentiveTolerance = 1e-9;

struct AuctionOutcome {
  Allocation allocation;
  std::vector<double> payments;               // length N, zero for non-winners
  std::map<int, double> per_winner_welfare;   // winner index -> proxy welfare of their slot
  double proxy_social_welfare = 0.0;
  // Set when some counterfactual re-solve had to relax the cardinality to
  // min(K, N-1) because removing a winner left fewer than K advertisers.
  bool relaxed_counterfactual = false;
};

// First-price exists purely as a negative control for the incentive tests.
enum class PaymentRule { kVcg, kFirstPrice };

namespace detail {

inline AuctionOutcome run_auction(const WelfareMatrix& welfare, const AuctionConfig& config,
                                  PaymentRule rule) {
  const int n = static_cast<int>(welfare.num_advertisers());
  AuctionOutcome out;
  out.allocation = solve_k_assignment(welfare, config.K);
  out.proxy_social_welfare = out.allocation.total_welfare;
  out.payments.assign(n, 0.0);

  for (const auto& [i, j] : out.allocation.pairs)
    out.per_winner_welfare[i] = welfare.at(i, j);

  for (const auto& [i, j] : out.allocation.pairs) {
    if (rule == PaymentRule::kFirstPrice) {
      out.payments[i] = welfare.at(i, j);
      continue;
    }
    // VCG: the welfare the others lose because i participates.
    int counterfactual_k = config.K;
    if (n - 1 < config.K) {
      counterfactual_k = std::min(config.K, n - 1);
      out.relaxed_counterfactual = true;
    }
    double without_i = 0.0;
    if (counterfactual_k >= 1)
      without_i = detail::solve_k_assignment_impl(welfare, counterfactual_k, i).total_welfare;
    const double others_with_i = out.allocation.total_welfare - welfare.at(i, j);
    out.payments[i] = std::max(0.0, without_i - others_with_i);
  }
  return out;
}

}  // namespace detail

// Full mechanism: proxy welfare, exactly-K allocation, externality payments.
inline AuctionOutcome run_vcg(const BidMatrix& bids, const CoherenceMatrix& coherence,
                              const AuctionConfig& config,
                              PaymentRule rule = PaymentRule::kVcg) {
  const auto report = validate_inputs(bids, coherence, config);
  if (!report.ok()) {
    std::string msg = "invalid auction inputs:";
    for (const auto& violation : report.violations) msg += " [" + violation.code + "]";
    throw ValidationError(msg);
  }
  return detail::run_auction(proxy_welfare(bids, coherence), config, rule);
}

// Proxy utility of one advertiser under their (possibly non-bid) true genre
// values: allocated slot value minus payment. Non-winners get exactly 0.
inline double proxy_utility(const AuctionOutcome& outcome, const CoherenceMatrix& coherence,
                            std::size_t advertiser, const BidVector& true_values) {
  if (advertiser >= outcome.payments.size())
    throw ArgumentError("advertiser index out of range");
  const int slot = outcome.allocation.slot_of(static_cast<int>(advertiser));
  if (slot < 0) return 0.0;
  double value = 0.0;
  for (const auto& [gid, v] : true_values.entries) {
    auto g = coherence.taxonomy().index_of(gid);
    if (!g) throw DimensionError("true-value vector uses unknown genre: " + gid);
    value += v * coherence.at(*g, static_cast<std::size_t>(slot));
  }
  return value - outcome.payments[advertiser];
}

struct DsicReport {
  double max_violation = 0.0;  // max over samples of u(deviation) - u(truthful)
  int violations = 0;          // samples exceeding the tolerance
  int samples = 0;
};

// Samples random unilateral deviations for every advertiser and checks that
// truthful bidding maximizes proxy utility. With the VCG rule the expected
// max violation is <= 1e-9; the first-price rule is the negative control.
inline DsicReport check_dsic_proxy(const BidMatrix& bids, const CoherenceMatrix& coherence,
                                   const AuctionConfig& config, int deviations,
                                   std::uint64_t seed,
                                   PaymentRule rule = PaymentRule::kVcg) {
  if (deviations < 1) throw ArgumentError("deviations must be at least 1");
  const auto truthful = run_vcg(bids, coherence, config, rule);
  const auto& taxonomy = bids.taxonomy();
  DsicReport report;
  SplitRng rng(seed);

  for (std::size_t i = 0; i < bids.num_advertisers(); ++i) {
    const double u_truth = proxy_utility(truthful, coherence, i, bids.column(i));
    SplitRng adv_rng = rng.fork(i);
    for (int trial = 0; trial < deviations; ++trial) {
      SplitRng draw = adv_rng.fork(trial);
      BidVector deviation;
      deviation.v_bar = bids.v_bar();
      for (std::size_t g = 0; g < taxonomy.size(); ++g)
        deviation.entries[taxonomy.at(g).id] = draw.uniform(0.0, bids.v_bar());
      const auto outcome = run_vcg(bids.with_column(i, deviation), coherence, config, rule);
      const double u_dev = proxy_utility(outcome, coherence, i, bids.column(i));
      const double gain = u_dev - u_truth;
      report.max_violation = std::max(report.max_violation, gain);
      if (gain > kIncentiveTolerance) ++report.violations;
      ++report.samples;
    }
  }
  return report;
}

}  // namespace genreads
