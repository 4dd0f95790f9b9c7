#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "genreads/auction.hpp"
#include "genreads/bids.hpp"
#include "genreads/coherence_matrix.hpp"
#include "genreads/errors.hpp"
#include "genreads/rng.hpp"
#include "genreads/taxonomy.hpp"
#include "genreads/welfare.hpp"

namespace genreads {

// Latent-intent ground truth: genres partition the intent space, every slot
// carries a distribution over intents, and every advertiser holds a value
// per intent. The platform never sees any of this; the simulator uses it to
// measure how far the genre proxy is from the truth.
struct IntentModel {
  TaxonomyPtr taxonomy;
  std::vector<std::string> intents;                   // T intent ids
  std::vector<std::size_t> intent_genre;              // intent -> genre index (partition)
  std::vector<std::vector<double>> slot_intent_dist;  // S columns, each length T
  std::vector<std::vector<double>> intent_values;     // N rows, each length T
  std::vector<std::string> advertiser_ids;
  double v_bar = 1.0;

  std::size_t num_intents() const { return intents.size(); }
  std::size_t num_slots() const { return slot_intent_dist.size(); }
  std::size_t num_advertisers() const { return intent_values.size(); }

  void validate() const {
    if (!taxonomy) throw ValidationError("intent model has no taxonomy");
    if (intents.empty()) throw ValidationError("intent model needs at least one intent");
    if (intent_genre.size() != intents.size())
      throw DimensionError("partition size does not match intent count");
    std::vector<int> cell_size(taxonomy->size(), 0);
    for (std::size_t g : intent_genre) {
      if (g >= taxonomy->size()) throw ValidationError("intent mapped to unknown genre");
      ++cell_size[g];
    }
    for (std::size_t g = 0; g < cell_size.size(); ++g)
      if (cell_size[g] == 0)
        throw ValidationError("empty genre cell in partition: " + taxonomy->at(g).id);
    if (slot_intent_dist.empty()) throw ValidationError("intent model needs at least one slot");
    for (const auto& col : slot_intent_dist) {
      if (col.size() != intents.size())
        throw DimensionError("slot intent distribution length mismatch");
      double sum = 0.0;
      for (double p : col) {
        if (!std::isfinite(p) || p < 0.0)
          throw ValidationError("slot intent distribution has a bad entry");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kSimplexTolerance)
        throw ValidationError("slot intent distribution does not sum to 1");
    }
    if (intent_values.empty()) throw ValidationError("intent model needs an advertiser");
    if (advertiser_ids.size() != intent_values.size())
      throw DimensionError("advertiser id count mismatch in intent model");
    for (const auto& row : intent_values) {
      if (row.size() != intents.size()) throw DimensionError("intent value row length mismatch");
      for (double v : row)
        if (!std::isfinite(v) || v < 0.0 || v > v_bar)
          throw ValidationError("intent value outside [0, v_bar]");
    }
  }
};

// W[i][j] = sum_t v_{i,t} P(t|j): the unobservable welfare the auction is
// actually judged against.
inline WelfareMatrix true_welfare(const IntentModel& model) {
  model.validate();
  const std::size_t n = model.num_advertisers();
  const std::size_t s = model.num_slots();
  const std::size_t t_count = model.num_intents();
  std::vector<double> values(n * s, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < s; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < t_count; ++t)
        acc += model.intent_values[i][t] * model.slot_intent_dist[j][t];
      values[i * s + j] = acc;
    }
  return WelfareMatrix(model.advertiser_ids, s, std::move(values));
}

// c_{g,j} = sum_{t in g} P(t|j); columns are exact probability distributions.
inline CoherenceMatrix true_coherence(const IntentModel& model) {
  model.validate();
  std::vector<std::vector<double>> cols(model.num_slots(),
                                        std::vector<double>(model.taxonomy->size(), 0.0));
  for (std::size_t j = 0; j < model.num_slots(); ++j)
    for (std::size_t t = 0; t < model.num_intents(); ++t)
      cols[j][model.intent_genre[t]] += model.slot_intent_dist[j][t];
  return CoherenceMatrix(model.taxonomy, std::move(cols), /*calibrated=*/true);
}

// v_{i,g,j}: advertiser i's expected value for genre g conditioned on the
// slot-j context. Where P(g|j) = 0 the conditional is undefined; we fall back
// to the unconditional mean over the genre's intents, which matches a uniform
// conditional and never feeds into welfare (the weight there is zero).
struct RealizedGenreValues {
  std::size_t n = 0, l = 0, s = 0;
  std::vector<double> values;  // n x l x s
  double at(std::size_t i, std::size_t g, std::size_t j) const {
    return values[(i * l + g) * s + j];
  }
};

inline RealizedGenreValues realized_genre_values(const IntentModel& model) {
  model.validate();
  RealizedGenreValues out;
  out.n = model.num_advertisers();
  out.l = model.taxonomy->size();
  out.s = model.num_slots();
  out.values.assign(out.n * out.l * out.s, 0.0);

  const auto coherence = true_coherence(model);
  std::vector<std::vector<std::size_t>> cell(out.l);
  for (std::size_t t = 0; t < model.num_intents(); ++t)
    cell[model.intent_genre[t]].push_back(t);

  for (std::size_t i = 0; i < out.n; ++i)
    for (std::size_t g = 0; g < out.l; ++g) {
      double cell_mean = 0.0;
      for (std::size_t t : cell[g]) cell_mean += model.intent_values[i][t];
      cell_mean /= static_cast<double>(cell[g].size());
      for (std::size_t j = 0; j < out.s; ++j) {
        const double pg = coherence.at(g, j);
        double value = cell_mean;
        if (pg > 0.0) {
          value = 0.0;
          for (std::size_t t : cell[g])
            value += model.intent_values[i][t] * model.slot_intent_dist[j][t] / pg;
        }
        out.values[(i * out.l + g) * out.s + j] = value;
      }
    }
  return out;
}

// The truthful static genre values: unweighted slot-average of v_{i,g,j}.
inline BidMatrix truthful_genre_values(const IntentModel& model) {
  const auto realized = realized_genre_values(model);
  std::vector<BidVector> columns(realized.n);
  for (std::size_t i = 0; i < realized.n; ++i) {
    columns[i].v_bar = model.v_bar;
    for (std::size_t g = 0; g < realized.l; ++g) {
      double mean = 0.0;
      for (std::size_t j = 0; j < realized.s; ++j) mean += realized.at(i, g, j);
      mean /= static_cast<double>(realized.s);
      columns[i].entries[model.taxonomy->at(g).id] = std::clamp(mean, 0.0, model.v_bar);
    }
  }
  return BidMatrix(model.taxonomy, model.advertiser_ids, std::move(columns));
}

// epsilon_V = max_{i,g,j} |v~_{i,g} - v_{i,g,j}| / v_bar.
inline double compute_epsilon_V(const IntentModel& model, const BidMatrix& genre_values) {
  require_same_taxonomy(*model.taxonomy, genre_values.taxonomy());
  const auto realized = realized_genre_values(model);
  double worst = 0.0;
  for (std::size_t i = 0; i < realized.n; ++i)
    for (std::size_t g = 0; g < realized.l; ++g) {
      const double statical = genre_values.column(i).bid_for(model.taxonomy->at(g).id);
      for (std::size_t j = 0; j < realized.s; ++j)
        worst = std::max(worst, std::abs(statical - realized.at(i, g, j)));
    }
  return worst / model.v_bar;
}

// epsilon_C = max_j l1(estimated column j, true column j).
inline double compute_epsilon_C(const CoherenceMatrix& truth, const CoherenceMatrix& estimate) {
  require_same_taxonomy(truth.taxonomy(), estimate.taxonomy());
  if (truth.num_slots() != estimate.num_slots())
    throw DimensionError("coherence matrices have different slot counts");
  double worst = 0.0;
  for (std::size_t j = 0; j < truth.num_slots(); ++j) {
    double l1 = 0.0;
    for (std::size_t g = 0; g < truth.taxonomy().size(); ++g)
      l1 += std::abs(estimate.at(g, j) - truth.at(g, j));
    worst = std::max(worst, l1);
  }
  return worst;
}

struct ErrorReport {
  double epsilon_V = 0.0;
  double epsilon_C = 0.0;
  double epsilon() const { return epsilon_V + epsilon_C; }
  double v_bar = 1.0;
};

inline ErrorReport error_report(const IntentModel& model, const CoherenceMatrix& estimate) {
  ErrorReport report;
  report.epsilon_V = compute_epsilon_V(model, truthful_genre_values(model));
  report.epsilon_C = compute_epsilon_C(true_coherence(model), estimate);
  report.v_bar = model.v_bar;
  return report;
}

// Ground truth utility u_i = sum_j x_ij w_ij - p_i for an outcome produced by
// the proxy auction.
inline double ground_truth_utility(const AuctionOutcome& outcome, const WelfareMatrix& truth,
                                   std::size_t advertiser) {
  const int slot = outcome.allocation.slot_of(static_cast<int>(advertiser));
  const double value = slot < 0 ? 0.0 : truth.at(advertiser, static_cast<std::size_t>(slot));
  return value - outcome.payments[advertiser];
}

struct Prop1Report {
  ErrorReport errors;
  double max_utility_gap = 0.0;       // max |u~ - u| observed
  double max_dsic_violation = 0.0;    // max u(dev) - u(truth) - 2 eps v_bar
  double min_truthful_utility = 0.0;  // min u(truthful) observed
  int violations = 0;
  int samples = 0;
};

// Empirical check of the DSIC/IR transfer bound. bound_scale < 1 is the
// negative control knob; 1.0 tests the stated bound.
inline Prop1Report verify_prop1(const IntentModel& model, const CoherenceMatrix& estimated_c,
                                int trials, std::uint64_t seed, double bound_scale = 1.0) {
  model.validate();
  if (trials < 1) throw ArgumentError("trials must be at least 1");

  Prop1Report report;
  report.errors = error_report(model, estimated_c);
  const double eps_vbar = report.errors.epsilon() * model.v_bar * bound_scale;

  const auto truth_w = true_welfare(model);
  const auto truthful_bids = truthful_genre_values(model);
  const auto& taxonomy = *model.taxonomy;
  const std::size_t n = model.num_advertisers();
  AuctionConfig config;
  config.K = static_cast<int>(std::min(n, model.num_slots()));
  if (config.K > 2) config.K = 2;

  SplitRng rng(seed);
  report.min_truthful_utility = 0.0;

  // (a) utility-gap lemma on arbitrary bid profiles.
  for (int trial = 0; trial < trials; ++trial) {
    SplitRng draw = rng.fork(trial);
    std::vector<BidVector> cols(n);
    for (std::size_t i = 0; i < n; ++i) {
      cols[i].v_bar = model.v_bar;
      for (std::size_t g = 0; g < taxonomy.size(); ++g)
        cols[i].entries[taxonomy.at(g).id] = draw.uniform(0.0, model.v_bar);
    }
    BidMatrix profile(model.taxonomy, model.advertiser_ids, std::move(cols));
    const auto outcome = run_vcg(profile, estimated_c, config);
    for (std::size_t i = 0; i < n; ++i) {
      const double u_proxy = proxy_utility(outcome, estimated_c, i, truthful_bids.column(i));
      const double u_true = ground_truth_utility(outcome, truth_w, i);
      const double gap = std::abs(u_proxy - u_true);
      report.max_utility_gap = std::max(report.max_utility_gap, gap);
      if (gap > eps_vbar + kIncentiveTolerance) ++report.violations;
      ++report.samples;
    }
  }

  // (b) 2eps-DSIC and (c) eps-IR around the truthful profile.
  const auto truthful_outcome = run_vcg(truthful_bids, estimated_c, config);
  for (std::size_t i = 0; i < n; ++i) {
    const double u_truth = ground_truth_utility(truthful_outcome, truth_w, i);
    report.min_truthful_utility = std::min(report.min_truthful_utility, u_truth);
    if (u_truth < -eps_vbar - kIncentiveTolerance) ++report.violations;
    SplitRng adv_rng = rng.fork(1000003 + i);
    for (int trial = 0; trial < trials; ++trial) {
      SplitRng draw = adv_rng.fork(trial);
      BidVector deviation;
      deviation.v_bar = model.v_bar;
      for (std::size_t g = 0; g < taxonomy.size(); ++g)
        deviation.entries[taxonomy.at(g).id] = draw.uniform(0.0, model.v_bar);
      const auto outcome =
          run_vcg(truthful_bids.with_column(i, deviation), estimated_c, config);
      const double u_dev = ground_truth_utility(outcome, truth_w, i);
      const double slack = u_dev - u_truth - 2.0 * eps_vbar;
      report.max_dsic_violation = std::max(report.max_dsic_violation, slack);
      if (slack > kIncentiveTolerance) ++report.violations;
      ++report.samples;
    }
  }
  return report;
}

struct Prop2Report {
  ErrorReport errors;
  double optimal_true_welfare = 0.0;
  double proxy_welfare_at_proxy_opt = 0.0;
  double true_welfare_at_proxy_opt = 0.0;
  double bound = 0.0;  // 2 K eps v_bar
  double max_gap = 0.0;
  bool holds = true;
};

// Welfare-gap bound under truthful bidding: both the proxy objective and the
// realized welfare of the proxy-optimal allocation stay within 2 K eps v_bar
// of the true optimum.
inline Prop2Report verify_prop2(const IntentModel& model, const CoherenceMatrix& estimated_c,
                                const AuctionConfig& config, double bound_scale = 1.0) {
  model.validate();
  Prop2Report report;
  report.errors = error_report(model, estimated_c);
  report.bound = 2.0 * config.K * report.errors.epsilon() * model.v_bar * bound_scale;

  const auto truthful_bids = truthful_genre_values(model);
  const auto proxy_w = proxy_welfare(truthful_bids, estimated_c);
  const auto truth_w = true_welfare(model);

  const auto proxy_opt = solve_k_assignment(proxy_w, config.K);
  report.proxy_welfare_at_proxy_opt = proxy_opt.total_welfare;
  for (const auto& [i, j] : proxy_opt.pairs) report.true_welfare_at_proxy_opt += truth_w.at(i, j);

  const bool tiny = truth_w.num_advertisers() <= 6 && truth_w.num_slots() <= 6;
  report.optimal_true_welfare = tiny ? brute_force_k_assignment(truth_w, config.K).total_welfare
                                     : solve_k_assignment(truth_w, config.K).total_welfare;

  const double gap_proxy =
      std::abs(report.optimal_true_welfare - report.proxy_welfare_at_proxy_opt);
  const double gap_true = std::abs(report.optimal_true_welfare - report.true_welfare_at_proxy_opt);
  report.max_gap = std::max(gap_proxy, gap_true);
  report.holds = report.max_gap <= report.bound + kIncentiveTolerance;
  return report;
}

struct Prop3Report {
  double epsilon_d = 0.0;
  double epsilon_V = 0.0;
  bool holds = true;
};

// TVD bound: epsilon_V never exceeds the worst total-variation distance
// between per-genre conditional intent distributions across slots.
inline Prop3Report verify_prop3(const IntentModel& model) {
  model.validate();
  Prop3Report report;
  report.epsilon_V = compute_epsilon_V(model, truthful_genre_values(model));

  const auto coherence = true_coherence(model);
  std::vector<std::vector<std::size_t>> cell(model.taxonomy->size());
  for (std::size_t t = 0; t < model.num_intents(); ++t)
    cell[model.intent_genre[t]].push_back(t);

  const std::size_t s = model.num_slots();
  for (std::size_t g = 0; g < cell.size(); ++g) {
    // Conditional D_{g,j}; uniform fallback mirrors realized_genre_values.
    std::vector<std::vector<double>> dist(s, std::vector<double>(cell[g].size()));
    for (std::size_t j = 0; j < s; ++j) {
      const double pg = coherence.at(g, j);
      for (std::size_t k = 0; k < cell[g].size(); ++k)
        dist[j][k] = pg > 0.0 ? model.slot_intent_dist[j][cell[g][k]] / pg
                              : 1.0 / static_cast<double>(cell[g].size());
    }
    for (std::size_t j = 0; j < s; ++j)
      for (std::size_t j2 = j + 1; j2 < s; ++j2) {
        double l1 = 0.0;
        for (std::size_t k = 0; k < cell[g].size(); ++k)
          l1 += std::abs(dist[j][k] - dist[j2][k]);
        report.epsilon_d = std::max(report.epsilon_d, 0.5 * l1);
      }
  }
  report.holds = report.epsilon_V <= report.epsilon_d + kIncentiveTolerance;
  return report;
}

// Seeded random model: intents per genre ~ U{1..5}, Dirichlet(1) slot
// distributions, uniform [0, v_bar] values.
inline IntentModel random_intent_model(TaxonomyPtr taxonomy, std::size_t advertisers,
                                       std::size_t slots, std::uint64_t seed,
                                       double v_bar = 1.0) {
  SplitRng rng(seed);
  IntentModel model;
  model.taxonomy = std::move(taxonomy);
  model.v_bar = v_bar;
  for (std::size_t g = 0; g < model.taxonomy->size(); ++g) {
    const int count = rng.uniform_int(1, 5);
    for (int k = 0; k < count; ++k) {
      model.intents.push_back(model.taxonomy->at(g).id + "/t" + std::to_string(k));
      model.intent_genre.push_back(g);
    }
  }
  SplitRng slot_rng = rng.fork(1);
  for (std::size_t j = 0; j < slots; ++j)
    model.slot_intent_dist.push_back(slot_rng.fork(j).dirichlet_flat(model.intents.size()));
  SplitRng value_rng = rng.fork(2);
  for (std::size_t i = 0; i < advertisers; ++i) {
    SplitRng row = value_rng.fork(i);
    std::vector<double> values(model.intents.size());
    for (auto& v : values) v = row.uniform(0.0, v_bar);
    model.intent_values.push_back(std::move(values));
    model.advertiser_ids.push_back("adv" + std::to_string(i));
  }
  return model;
}

// Adds l1-bounded noise to each true coherence column and renormalizes, so
// the result is a valid calibrated estimate with epsilon_C roughly <= radius.
inline CoherenceMatrix perturb_coherence(const CoherenceMatrix& truth, double radius,
                                         std::uint64_t seed) {
  SplitRng rng(seed);
  const std::size_t l = truth.taxonomy().size();
  std::vector<std::vector<double>> cols;
  cols.reserve(truth.num_slots());
  for (std::size_t j = 0; j < truth.num_slots(); ++j) {
    SplitRng col_rng = rng.fork(j);
    std::vector<double> col(truth.column(j));
    for (std::size_t g = 0; g < l; ++g)
      col[g] = std::max(0.0, col[g] + col_rng.uniform(-radius / (2.0 * l), radius / (2.0 * l)));
    double sum = 0.0;
    for (double v : col) sum += v;
    if (sum <= 0.0) col.assign(l, 1.0 / static_cast<double>(l));
    else
      for (auto& v : col) v /= sum;
    cols.push_back(std::move(col));
  }
  return CoherenceMatrix(truth.taxonomy_ptr(), std::move(cols), /*calibrated=*/true);
}

}  // namespace genreads
