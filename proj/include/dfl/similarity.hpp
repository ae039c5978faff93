#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "dfl/core.hpp"
#include "dfl/errors.hpp"

namespace dfl {

/// Mixing weights for the four similarity measures. Must be >= 0 and sum to 1.
struct SimilarityWeights {
    double cosine = 0.25;
    double euclidean = 0.25;
    double manhattan = 0.25;
    double pearson = 0.25;
};

inline bool similarity_weights_valid(const SimilarityWeights& w) {
    if (w.cosine < 0.0 || w.euclidean < 0.0 || w.manhattan < 0.0 || w.pearson < 0.0) return false;
    return std::abs(w.cosine + w.euclidean + w.manhattan + w.pearson - 1.0) <= 1e-9;
}

// Each measure maps to [0,1] with 1 at identity:
//   cosine, pearson: (1 + c) / 2
//   euclidean:       1 / (1 + d / sqrt(dim))
//   manhattan:       1 / (1 + d / dim)
// Degenerate zero-norm inputs: 1 if both are zero, 0 if exactly one is.

template <class A, class B>
double cosine_score(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 && nb == 0.0) return 1.0;
    if (na == 0.0 || nb == 0.0) return 0.0;
    const double c = std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
    return 0.5 * (1.0 + c);
}

template <class A, class B>
double euclidean_score(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    const double d = (a - b).norm();
    return 1.0 / (1.0 + d / std::sqrt(static_cast<double>(a.size())));
}

template <class A, class B>
double manhattan_score(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    const double d = (a - b).cwiseAbs().sum();
    return 1.0 / (1.0 + d / static_cast<double>(a.size()));
}

template <class A, class B>
double pearson_score(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    const auto ac = (a.array() - a.mean()).matrix().eval();
    const auto bc = (b.array() - b.mean()).matrix().eval();
    return cosine_score(ac, bc);
}

/// Weighted blend of the four measures; throws DimensionError on size mismatch.
template <class A, class B>
double model_similarity(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                        const SimilarityWeights& w = {}) {
    if (a.size() != b.size() || a.size() < 1)
        throw DimensionError("model_similarity: dimension mismatch");
    const double s = w.cosine * cosine_score(a, b) + w.euclidean * euclidean_score(a, b) +
                     w.manhattan * manhattan_score(a, b) + w.pearson * pearson_score(a, b);
    return clamp01(s);
}

}  // namespace dfl
