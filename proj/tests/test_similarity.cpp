#include <doctest.h>

#include "dfl/similarity.hpp"

using namespace dfl;

namespace {
ModelVector vec(std::initializer_list<double> v) {
    ModelVector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}
}  // namespace

TEST_SUITE("similarity") {

TEST_CASE("identical models are maximally similar") {
    const auto v = vec({1.0, -2.0, 3.5});
    CHECK(model_similarity(v, v) == doctest::Approx(1.0));
    // constant vectors hit the pearson degenerate branch and still score 1
    const auto c = vec({2.0, 2.0, 2.0});
    CHECK(model_similarity(c, c) == doctest::Approx(1.0));
}

TEST_CASE("orthogonal vectors under cosine-only weights score 0.5") {
    const SimilarityWeights cosine_only{1.0, 0.0, 0.0, 0.0};
    CHECK(model_similarity(vec({1, 0}), vec({0, 1}), cosine_only) == doctest::Approx(0.5));
}

TEST_CASE("continuity at identity") {
    const auto a = vec({1, 2, 3});
    auto b = a;
    b[0] += 1e-12;
    CHECK(model_similarity(a, b) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("dimension mismatch throws") {
    CHECK_THROWS_AS(model_similarity(vec({1, 2}), vec({1, 2, 3})), DimensionError);
}

TEST_CASE("zero-norm handling is deterministic") {
    const auto zero = vec({0, 0, 0});
    const auto one = vec({1, 1, 1});
    CHECK(cosine_score(zero, zero) == doctest::Approx(1.0));
    CHECK(cosine_score(zero, one) == doctest::Approx(0.0));
    CHECK(pearson_score(one, one) == doctest::Approx(1.0));  // zero variance on both sides
    CHECK(pearson_score(one, vec({1, 2, 3})) == doctest::Approx(0.0));
}

TEST_CASE("anticorrelated vectors floor near zero") {
    const auto a = vec({1, 0, -1});
    const auto b = vec({-1, 0, 1});
    CHECK(cosine_score(a, b) == doctest::Approx(0.0));
    CHECK(pearson_score(a, b) == doctest::Approx(0.0));
}

TEST_CASE("invalid weights are rejected by the validator") {
    CHECK(similarity_weights_valid({0.25, 0.25, 0.25, 0.25}));
    CHECK(similarity_weights_valid({1.0, 0.0, 0.0, 0.0}));
    CHECK_FALSE(similarity_weights_valid({0.5, 0.5, 0.5, -0.5}));
    CHECK_FALSE(similarity_weights_valid({0.3, 0.3, 0.3, 0.3}));
}

}  // TEST_SUITE
