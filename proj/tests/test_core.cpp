#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "genreads/welfare.hpp"
#include "helpers.hpp"

using namespace genreads;
using genreads::testing::make_taxonomy;

namespace {

// Independent triple-loop oracle for the welfare product.
std::vector<double> welfare_oracle(const BidMatrix& bids, const CoherenceMatrix& coherence) {
  const std::size_t n = bids.num_advertisers();
  const std::size_t s = coherence.num_slots();
  const std::size_t l = bids.taxonomy().size();
  std::vector<double> out(n * s, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < s; ++j)
      for (std::size_t g = 0; g < l; ++g)
        out[i * s + j] += bids.column(i).bid_for(bids.taxonomy().at(g).id) * coherence.at(g, j);
  return out;
}

}  // namespace

TEST_CASE("taxonomy rejects duplicates and empty ids") {
  CHECK_THROWS_AS(GenreTaxonomy(std::vector<Genre>{{"a", "A"}, {"a", "B"}}), ValidationError);
  CHECK_THROWS_AS(GenreTaxonomy(std::vector<Genre>{{"", "A"}}), ValidationError);
  CHECK_THROWS_AS(GenreTaxonomy(std::vector<Genre>{}), ValidationError);
  GenreTaxonomy t(std::vector<Genre>{{"a", "A"}, {"b", "B"}});
  CHECK(t.size() == 2);
  CHECK(t.require_index("b") == 1);
  CHECK_FALSE(t.index_of("c").has_value());
}

TEST_CASE("uniform bids against any simplex column give welfare 1") {
  auto taxonomy = make_taxonomy(5);
  BidVector column;
  column.v_bar = 1.0;
  for (std::size_t g = 0; g < 5; ++g) column.entries[taxonomy->at(g).id] = 1.0;
  BidMatrix bids(taxonomy, {"solo"}, {column});

  SplitRng rng(7);
  auto coherence = testing::random_calibrated_coherence(taxonomy, 4, rng);
  const auto w = proxy_welfare(bids, coherence);
  for (std::size_t j = 0; j < 4; ++j) CHECK(w.at(0, j) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("bids concentrated on two genres with coherence split across them") {
  // A bid of X on both genres carrying all the slot's coherence yields X.
  auto taxonomy = make_taxonomy(3);
  const double x = 6.0;
  BidVector column;
  column.v_bar = 20.0;
  column.entries["g0"] = x;
  column.entries["g1"] = x;
  BidMatrix bids(taxonomy, {"alpha_trip"}, {column});
  CoherenceMatrix coherence(taxonomy, {{0.5, 0.5, 0.0}}, true);
  CHECK(proxy_welfare(bids, coherence).at(0, 0) == Catch::Approx(x).margin(1e-12));
}

TEST_CASE("proxy welfare matches the triple-loop oracle") {
  SplitRng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    auto taxonomy = make_taxonomy(static_cast<std::size_t>(rng.uniform_int(1, 50)));
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 20));
    const auto s = static_cast<std::size_t>(rng.uniform_int(1, 20));
    const auto bids = testing::random_bids(taxonomy, n, 1.0, rng);
    const auto coherence = testing::random_calibrated_coherence(taxonomy, s, rng);
    const auto w = proxy_welfare(bids, coherence);
    const auto expected = welfare_oracle(bids, coherence);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < s; ++j)
        CHECK(w.at(i, j) == Catch::Approx(expected[i * s + j]).epsilon(1e-12).margin(1e-15));
  }
}

TEST_CASE("proxy welfare is bilinear in one advertiser's bids") {
  SplitRng rng(9);
  auto taxonomy = make_taxonomy(6);
  auto bids = testing::random_bids(taxonomy, 3, 1.0, rng);
  auto coherence = testing::random_calibrated_coherence(taxonomy, 5, rng);
  const auto base = proxy_welfare(bids, coherence);

  const double alpha = 0.37;
  BidVector scaled = bids.column(1);
  for (auto& [gid, v] : scaled.entries) v *= alpha;
  const auto w = proxy_welfare(bids.with_column(1, scaled), coherence);
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(w.at(1, j) == Catch::Approx(alpha * base.at(1, j)).margin(1e-12));
    CHECK(w.at(0, j) == base.at(0, j));
  }
}

TEST_CASE("calibrated welfare entries obey the convex-combination bound") {
  SplitRng rng(11);
  auto taxonomy = make_taxonomy(8);
  const auto bids = testing::random_bids(taxonomy, 4, 1.0, rng);
  const auto coherence = testing::random_calibrated_coherence(taxonomy, 6, rng);
  const auto w = proxy_welfare(bids, coherence);
  for (std::size_t i = 0; i < 4; ++i) {
    double lo = 1e300, hi = -1e300;
    for (std::size_t g = 0; g < 8; ++g) {
      const double b = bids.column(i).bid_for(taxonomy->at(g).id);
      lo = std::min(lo, b);
      hi = std::max(hi, b);
    }
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(w.at(i, j) >= lo - 1e-9);
      CHECK(w.at(i, j) <= hi + 1e-9);
    }
  }
}

TEST_CASE("proxy welfare rejects bad inputs") {
  auto taxonomy = make_taxonomy(3);
  auto other = make_taxonomy(4);
  SplitRng rng(3);
  const auto bids = testing::random_bids(taxonomy, 2, 1.0, rng);
  CHECK_THROWS_AS(proxy_welfare(bids, testing::random_calibrated_coherence(other, 2, rng)),
                  DimensionError);
  CoherenceMatrix raw(taxonomy, {{0.2, 0.5, 0.1}}, false);
  CHECK_THROWS_AS(proxy_welfare(bids, raw), ValidationError);
}

TEST_CASE("validate_inputs reports violations instead of throwing") {
  auto taxonomy = make_taxonomy(3);
  SplitRng rng(5);
  const auto good_bids = testing::random_bids(taxonomy, 3, 1.0, rng);
  const auto good_coherence = testing::random_calibrated_coherence(taxonomy, 4, rng);
  AuctionConfig config;
  config.K = 2;

  SECTION("clean inputs pass") {
    CHECK(validate_inputs(good_bids, good_coherence, config).ok());
  }

  SECTION("negative bid is named") {
    BidVector bad;
    bad.v_bar = 1.0;
    bad.entries["g1"] = -0.1;
    const auto report = validate_inputs(good_bids.with_column(0, bad), good_coherence, config);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].code == "bid_out_of_range");
    CHECK(report.violations[0].message.find("adv0") != std::string::npos);
    CHECK(report.violations[0].message.find("g1") != std::string::npos);
  }

  SECTION("K above min(N,S)") {
    AuctionConfig big;
    big.K = 5;
    const auto report = validate_inputs(good_bids, good_coherence, big);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].code == "k_exceeds_limit");
  }

  SECTION("non-simplex calibrated column") {
    CoherenceMatrix skewed(taxonomy, {{0.5, 0.2, 0.1}}, true);
    AuctionConfig k1;
    k1.K = 1;
    const auto report = validate_inputs(good_bids, skewed, k1);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations[0].code == "non_simplex_column");
  }

  SECTION("NaN bid") {
    BidVector bad;
    bad.v_bar = 1.0;
    bad.entries["g0"] = std::nan("");
    const auto report = validate_inputs(good_bids.with_column(1, bad), good_coherence, config);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations[0].code == "nan_bid");
  }
}
