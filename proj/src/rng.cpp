#include "dfl/rng.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dfl {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += kGamma);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t Substream::next_u64() {
    return splitmix64(state_);
}

double Substream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Substream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double Substream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

double Substream::gamma(double shape) {
    if (shape <= 0.0) throw std::invalid_argument("gamma: shape must be > 0");
    if (shape < 1.0) {
        // boost: gamma(a) = gamma(a+1) * U^(1/a)
        double u = uniform01();
        while (u <= 0.0) u = uniform01();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::vector<double> Substream::dirichlet(double alpha, int k) {
    std::vector<double> draws(static_cast<std::size_t>(k));
    double total = 0.0;
    for (auto& d : draws) {
        d = gamma(alpha);
        total += d;
    }
    if (total <= 0.0) {
        std::fill(draws.begin(), draws.end(), 1.0 / static_cast<double>(k));
        return draws;
    }
    for (auto& d : draws) d /= total;
    return draws;
}

std::vector<int> Substream::sample_without_replacement(int n, int k) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    k = std::min(k, n);
    for (int i = 0; i < k; ++i) {
        const auto j = i + static_cast<int>(next_u64() % static_cast<std::uint64_t>(n - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    return pool;
}

Substream RngStream::stream(std::string_view name, std::uint64_t index) const {
    std::uint64_t s = seed_;
    s ^= fnv1a64(name) + kGamma + (s << 6) + (s >> 2);
    s ^= (index + 1) * 0xd6e8feb86659fd93ULL;
    // burn one step so nearby indices decorrelate
    splitmix64(s);
    return Substream(s);
}

}  // namespace dfl
