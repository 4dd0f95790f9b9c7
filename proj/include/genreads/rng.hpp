#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace genreads {

// Counter-splittable deterministic RNG (splitmix64 core). All randomness in
// the engine flows from a single seed through fork() so sub-tasks stay
// order-independent and reproducible across platforms.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Derives an independent stream; does not advance this generator.
  SplitRng fork(std::uint64_t stream) const {
    SplitRng mix(state_ ^ 0x6a09e667f3bcc909ULL);
    mix.state_ += stream * 0xd1342543de82ef95ULL;
    mix.next();
    return SplitRng(mix.next());
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
  }

  // Knuth's method; fine for the small lambdas used here.
  int poisson(double lambda) {
    const double limit = std::exp(-lambda);
    double p = 1.0;
    int k = 0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  // Dirichlet(1, ..., 1): normalized unit exponentials.
  std::vector<double> dirichlet_flat(std::size_t n) {
    std::vector<double> v(n);
    double sum = 0.0;
    for (auto& x : v) {
      double u = uniform();
      if (u <= 0.0) u = 0x1.0p-53;
      x = -std::log(u);
      sum += x;
    }
    for (auto& x : v) x /= sum;
    return v;
  }

  // Fisher-Yates draw of k distinct values from {0, ..., n-1}.
  std::vector<int> sample_without_replacement(int n, int k) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
      const int j = uniform_int(i, n - 1);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  std::uint64_t state_;
};

}  // namespace genreads
