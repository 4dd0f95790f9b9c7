#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "genreads/matching.hpp"
#include "helpers.hpp"

using namespace genreads;

namespace {

WelfareMatrix matrix(std::vector<std::vector<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t s = rows[0].size();
  std::vector<double> flat;
  for (const auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = "adv" + std::to_string(i);
  return WelfareMatrix(std::move(ids), s, std::move(flat));
}

}  // namespace

TEST_CASE("1x1 matrix, K=1") {
  const auto alloc = solve_k_assignment(matrix({{0.7}}), 1);
  REQUIRE(alloc.pairs.size() == 1);
  CHECK(alloc.pairs[0] == std::pair<int, int>{0, 0});
  CHECK(alloc.total_welfare == Catch::Approx(0.7));
}

TEST_CASE("travel scenario with X=6 picks the coherent bidders") {
  // alpha: 6 at the opening slot; beta: 5 at slot 1; gamma: 16.25 at slot 2.
  const auto w = matrix({{6.0, 0.0, 1.5, 0.0}, {0.0, 5.0, 0.0, 0.0}, {5.0, 0.0, 16.25, 0.0}});
  const auto alloc = solve_k_assignment(w, 2);
  REQUIRE(alloc.pairs.size() == 2);
  CHECK(alloc.total_welfare == Catch::Approx(22.25));
  CHECK(alloc.slot_of(0) == 0);
  CHECK(alloc.slot_of(2) == 2);
  CHECK(alloc.slot_of(1) == -1);
}

TEST_CASE("brute force on the hand-enumerated 2x2") {
  // Perfect matchings: 1+0=1 vs 2+3=5.
  const auto alloc = brute_force_k_assignment(matrix({{1.0, 2.0}, {3.0, 0.0}}), 2);
  CHECK(alloc.total_welfare == Catch::Approx(5.0));
  REQUIRE(alloc.pairs.size() == 2);
  CHECK(alloc.slot_of(0) == 1);
  CHECK(alloc.slot_of(1) == 0);
}

TEST_CASE("brute force with K=1 is the argmax entry") {
  SplitRng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = testing::random_welfare(static_cast<std::size_t>(rng.uniform_int(1, 6)),
                                           static_cast<std::size_t>(rng.uniform_int(1, 6)), rng);
    double best = 0.0;
    for (std::size_t i = 0; i < w.num_advertisers(); ++i)
      for (std::size_t j = 0; j < w.num_slots(); ++j) best = std::max(best, w.at(i, j));
    CHECK(brute_force_k_assignment(w, 1).total_welfare == Catch::Approx(best));
  }
}

TEST_CASE("solver agrees with exhaustive enumeration") {
  SplitRng rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const auto s = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const auto w = testing::random_welfare(n, s, rng);
    const int max_k = static_cast<int>(std::min(n, s));
    const int k = std::min(max_k, rng.uniform_int(1, 3));
    const auto fast = solve_k_assignment(w, k);
    const auto exact = brute_force_k_assignment(w, k);
    REQUIRE(fast.pairs.size() == static_cast<std::size_t>(k));
    CHECK(fast.total_welfare == Catch::Approx(exact.total_welfare).margin(1e-9));
  }
}

TEST_CASE("welfare is monotone in K") {
  SplitRng rng(88);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = testing::random_welfare(6, 5, rng);
    double prev = 0.0;
    for (int k = 1; k <= 5; ++k) {
      const double total = solve_k_assignment(w, k).total_welfare;
      CHECK(total >= prev - 1e-12);
      prev = total;
    }
  }
}

TEST_CASE("row permutation permutes winners and preserves welfare") {
  SplitRng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5, s = 6;
    const auto w = testing::random_welfare(n, s, rng);
    const auto base = solve_k_assignment(w, 3);

    std::vector<std::size_t> perm{3, 0, 4, 1, 2};  // new row r holds old row perm[r]
    std::vector<double> shuffled(n * s);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t j = 0; j < s; ++j) shuffled[r * s + j] = w.at(perm[r], j);
    const auto permuted =
        solve_k_assignment(WelfareMatrix(w.advertiser_ids(), s, std::move(shuffled)), 3);

    CHECK(permuted.total_welfare == Catch::Approx(base.total_welfare).margin(1e-9));
    std::vector<int> base_slots(n, -1), perm_slots(n, -1);
    for (const auto& [i, j] : base.pairs) base_slots[static_cast<std::size_t>(i)] = j;
    for (const auto& [i, j] : permuted.pairs)
      perm_slots[perm[static_cast<std::size_t>(i)]] = j;
    CHECK(base_slots == perm_slots);
  }
}

TEST_CASE("scaling the matrix leaves the chosen pairs unchanged") {
  SplitRng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = testing::random_welfare(5, 5, rng);
    const auto base = solve_k_assignment(w, 2);
    std::vector<double> scaled = w.values();
    for (auto& v : scaled) v *= 3.25;
    const auto alloc =
        solve_k_assignment(WelfareMatrix(w.advertiser_ids(), 5, std::move(scaled)), 2);
    CHECK(alloc.pairs == base.pairs);
  }
}

TEST_CASE("zero-welfare pairs still fill the cardinality") {
  const auto alloc = solve_k_assignment(matrix({{1.0, 0.0}, {0.0, 0.0}}), 2);
  REQUIRE(alloc.pairs.size() == 2);
  CHECK(alloc.total_welfare == Catch::Approx(1.0));
}

TEST_CASE("argument and validation errors") {
  const auto w = matrix({{1.0, 2.0}, {3.0, 4.0}});
  CHECK_THROWS_AS(solve_k_assignment(w, 0), ArgumentError);
  CHECK_THROWS_AS(solve_k_assignment(w, 3), ArgumentError);
  CHECK_THROWS_AS(solve_k_assignment(matrix({{1.0, std::nan("")}}), 1), ValidationError);
  CHECK_THROWS_AS(solve_k_assignment(matrix({{1.0, -0.5}}), 1), ValidationError);
  SplitRng rng(1);
  CHECK_THROWS_AS(brute_force_k_assignment(testing::random_welfare(9, 3, rng), 1),
                  ArgumentError);
}

TEST_CASE("excluded row is never selected") {
  SplitRng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = testing::random_welfare(5, 4, rng);
    const int excluded = rng.uniform_int(0, 4);
    const auto alloc = solve_k_assignment(w, 2, excluded);
    for (const auto& [i, j] : alloc.pairs) CHECK(i != excluded);
    CHECK(alloc.total_welfare ==
          Catch::Approx(brute_force_k_assignment(w, 2, excluded).total_welfare).margin(1e-9));
  }
}
