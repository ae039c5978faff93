#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace dfl {

/// Deterministic substream generator (splitmix64). Hand-rolled distributions
/// so runs are bit-identical across compilers and standard libraries.
class Substream {
  public:
    explicit Substream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double uniform01();  // [0, 1)
    double uniform(double lo, double hi);
    double normal();  // standard normal (Box-Muller)
    double normal(double mean, double sigma) { return mean + sigma * normal(); }
    double gamma(double shape);  // scale 1, Marsaglia-Tsang
    std::vector<double> dirichlet(double alpha, int k);
    /// k distinct values from {0, ..., n-1}, order randomized.
    std::vector<int> sample_without_replacement(int n, int k);

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Root seed plus named, indexed substreams. Identical (seed, name, index)
/// always yields the same stream regardless of what other streams consumed.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : seed_(seed) {}

    Substream stream(std::string_view name, std::uint64_t index = 0) const;
    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
};

}  // namespace dfl
