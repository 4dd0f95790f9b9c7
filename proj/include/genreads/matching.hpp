#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "genreads/errors.hpp"
#include "genreads/welfare.hpp"

namespace genreads {

// A feasible assignment: exactly K (advertiser, slot) pairs, advertisers and
// slots pairwise distinct.
struct Allocation {
  std::vector<std::pair<int, int>> pairs;  // sorted by advertiser index
  double total_welfare = 0.0;

  int slot_of(int advertiser) const {
    for (const auto& [i, j] : pairs)
      if (i == advertiser) return j;
    return -1;
  }
};

namespace detail {

// Successive shortest augmenting paths with node potentials. Weights are
// turned into non-negative costs c = vmax - w; after the k-th augmentation
// the matching is a minimum-cost (maximum-weight) assignment of cardinality
// k, so stopping at K solves the exactly-K problem directly.
//
// Invariants between augmentations: reduced costs c - u_i - v_j >= 0,
// matched edges tight, u = 0 on unmatched rows.
inline Allocation solve_k_assignment_impl(const WelfareMatrix& w, int K, int excluded_row) {
  const int n = static_cast<int>(w.num_advertisers());
  const int s = static_cast<int>(w.num_slots());
  const double inf = std::numeric_limits<double>::infinity();
  const auto& wv = w.values();
  auto weight = [&](int i, int j) { return wv[static_cast<std::size_t>(i) * s + j]; };

  double vmax = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == excluded_row) continue;
    for (int j = 0; j < s; ++j) vmax = std::max(vmax, weight(i, j));
  }
  auto cost = [&](int i, int j) { return vmax - weight(i, j); };

  std::vector<double> u(n, 0.0), v(s, 0.0);
  std::vector<int> match_row(n, -1), match_col(s, -1);
  std::vector<double> d(s), d_row(n);
  std::vector<int> pred(s);
  std::vector<char> done(s);

  for (int round = 0; round < K; ++round) {
    std::fill(d.begin(), d.end(), inf);
    std::fill(d_row.begin(), d_row.end(), inf);
    std::fill(pred.begin(), pred.end(), -1);
    std::fill(done.begin(), done.end(), 0);

    // Seed distances from every unmatched row (all carry potential 0).
    for (int i = 0; i < n; ++i) {
      if (i == excluded_row || match_row[i] != -1) continue;
      for (int j = 0; j < s; ++j) {
        const double rc = cost(i, j) - v[j];
        if (rc < d[j]) {
          d[j] = rc;
          pred[j] = i;
        }
      }
    }

    // Dijkstra over columns; unmatched columns are sinks reached at cost
    // d + v (their potential), so we run until the frontier passes best_t.
    double best_t = inf;
    int best_col = -1;
    for (;;) {
      int jmin = -1;
      for (int j = 0; j < s; ++j)
        if (!done[j] && (jmin == -1 || d[j] < d[jmin])) jmin = j;
      if (jmin == -1 || d[jmin] >= best_t) break;
      done[jmin] = 1;
      const int owner = match_col[jmin];
      if (owner == -1) {
        const double through = d[jmin] + v[jmin];
        if (through < best_t) {
          best_t = through;
          best_col = jmin;
        }
        continue;
      }
      d_row[owner] = d[jmin];
      for (int j = 0; j < s; ++j) {
        if (done[j]) continue;
        const double nd = d[jmin] + cost(owner, j) - u[owner] - v[j];
        if (nd < d[j]) {
          d[j] = nd;
          pred[j] = owner;
        }
      }
    }
    if (best_col == -1)
      throw ArgumentError("no augmenting path: K exceeds the maximum matching size");

    // Johnson-style capped potential update keeps all reduced costs
    // non-negative and the new path edges tight.
    const double cap = best_t;
    for (int j = 0; j < s; ++j) v[j] += done[j] ? std::min(d[j], cap) : cap;
    for (int i = 0; i < n; ++i) {
      if (i == excluded_row || match_row[i] == -1) continue;
      u[i] -= std::min(d_row[i], cap);
    }

    for (int j = best_col; j != -1;) {
      const int i = pred[j];
      const int next = match_row[i];
      match_row[i] = j;
      match_col[j] = i;
      j = next;
    }
  }

  Allocation out;
  out.pairs.reserve(K);
  for (int i = 0; i < n; ++i)
    if (match_row[i] != -1) out.pairs.emplace_back(i, match_row[i]);
  for (const auto& [i, j] : out.pairs) out.total_welfare += weight(i, j);
  return out;
}

inline void check_k_range(const WelfareMatrix& w, int K, int excluded_row) {
  const auto n =
      static_cast<int>(w.num_advertisers()) - (excluded_row >= 0 ? 1 : 0);
  const auto s = static_cast<int>(w.num_slots());
  if (K < 1 || K > std::min(n, s))
    throw ArgumentError("K must satisfy 1 <= K <= min(N, S); got K=" + std::to_string(K));
}

inline void check_entries(const WelfareMatrix& w, int excluded_row) {
  for (std::size_t i = 0; i < w.num_advertisers(); ++i) {
    if (static_cast<int>(i) == excluded_row) continue;
    for (std::size_t j = 0; j < w.num_slots(); ++j) {
      const double x = w.at(i, j);
      if (!std::isfinite(x)) throw ValidationError("welfare matrix contains a non-finite entry");
      if (x < 0.0) throw ValidationError("welfare matrix contains a negative entry");
    }
  }
}

}  // namespace detail

// Maximum-weight assignment of exactly K pairs. Ties are resolved by the
// solver's ascending-index iteration order, so results are deterministic.
// excluded_row (if >= 0) is treated as absent; the VCG counterfactuals use it.
inline Allocation solve_k_assignment(const WelfareMatrix& w, int K, int excluded_row = -1) {
  detail::check_k_range(w, K, excluded_row);
  detail::check_entries(w, excluded_row);
  return detail::solve_k_assignment_impl(w, K, excluded_row);
}

// Exhaustive oracle: enumerates every feasible size-K allocation. Guarded to
// tiny instances; exists to cross-check the solver, never to replace it.
inline Allocation brute_force_k_assignment(const WelfareMatrix& w, int K, int excluded_row = -1) {
  const int n = static_cast<int>(w.num_advertisers());
  const int s = static_cast<int>(w.num_slots());
  if (n > 8 || s > 8)
    throw ArgumentError("brute force oracle is limited to N <= 8 and S <= 8");
  detail::check_k_range(w, K, excluded_row);

  Allocation best;
  best.total_welfare = -1.0;
  std::vector<std::pair<int, int>> current;
  std::vector<char> col_used(s, 0);

  auto recurse = [&](auto&& self, int row, int picked, double acc) -> void {
    if (picked == K) {
      if (acc > best.total_welfare) {
        best.total_welfare = acc;
        best.pairs = current;
      }
      return;
    }
    if (row >= n) return;
    // Not enough rows left to finish.
    int remaining = n - row;
    if (excluded_row >= row) remaining -= 1;
    if (remaining < K - picked) return;

    if (row != excluded_row) {
      for (int j = 0; j < s; ++j) {
        if (col_used[j]) continue;
        col_used[j] = 1;
        current.emplace_back(row, j);
        self(self, row + 1, picked + 1, acc + w.at(row, j));
        current.pop_back();
        col_used[j] = 0;
      }
    }
    self(self, row + 1, picked, acc);
  };
  recurse(recurse, 0, 0, 0.0);

  if (best.total_welfare < 0.0)
    throw ArgumentError("no feasible allocation of the requested cardinality");
  return best;
}

}  // namespace genreads
