#include <doctest.h>

#include <numeric>
#include <set>

#include "dfl/errors.hpp"
#include "dfl/trainer.hpp"

using namespace dfl;

TEST_SUITE("trainer") {

TEST_CASE("dataset generation is deterministic and covers all classes") {
    RngStream rng(3);
    auto s1 = rng.stream("data");
    auto s2 = rng.stream("data");
    const auto a = generate_dataset(1000, 8, 10, s1);
    const auto b = generate_dataset(1000, 8, 10, s2);
    CHECK(a.size() == 1000);
    CHECK(a.features == b.features);
    CHECK(a.labels == b.labels);
    std::set<int> seen(a.labels.begin(), a.labels.end());
    CHECK(seen.size() == 10);
    CHECK(a.features.allFinite());
    auto s3 = rng.stream("bad");
    CHECK_THROWS_AS(generate_dataset(5, 8, 10, s3), ConfigError);
}

TEST_CASE("single-node partition owns everything") {
    RngStream rng(4);
    auto s = rng.stream("part");
    const std::vector<int> labels{0, 1, 0, 1, 2};
    const auto shards = dirichlet_partition(labels, 0.5, 1, s);
    REQUIRE(shards.size() == 1);
    CHECK(shards[0].size() == labels.size());
}

TEST_CASE("partition is exact: disjoint and exhaustive") {
    RngStream rng(4);
    auto d = rng.stream("data");
    const auto data = generate_dataset(600, 4, 10, d);
    auto s = rng.stream("part");
    const auto shards = dirichlet_partition(data.labels, 0.5, 6, s);
    std::vector<int> all;
    for (const auto& shard : shards) {
        CHECK(!shard.empty());
        all.insert(all.end(), shard.begin(), shard.end());
    }
    std::sort(all.begin(), all.end());
    CHECK(all.size() == data.labels.size());
    CHECK(std::unique(all.begin(), all.end()) == all.end());
}

TEST_CASE("large alpha approaches a uniform split") {
    RngStream rng(9);
    auto d = rng.stream("data");
    const auto data = generate_dataset(2000, 4, 10, d);
    auto s = rng.stream("part");
    const auto shards = dirichlet_partition(data.labels, 1000.0, 5, s);
    const double expected = 2000.0 / 5.0;
    for (const auto& shard : shards)
        CHECK(std::abs(static_cast<double>(shard.size()) - expected) / expected < 0.2);
}

TEST_CASE("small alpha produces heavy skew") {
    // at least one node dominated by a single class, across several seeds
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        RngStream rng(seed);
        auto d = rng.stream("data");
        const auto data = generate_dataset(1000, 4, 10, d);
        auto s = rng.stream("part");
        const auto shards = dirichlet_partition(data.labels, 0.1, 10, s);
        bool dominated = false;
        for (const auto& shard : shards) {
            std::vector<int> hist(10, 0);
            for (int row : shard) ++hist[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(row)])];
            const int top = *std::max_element(hist.begin(), hist.end());
            if (static_cast<double>(top) > 0.5 * static_cast<double>(shard.size()))
                dominated = true;
        }
        CHECK(dominated);
    }
}

TEST_CASE("zero learning rate or zero epochs leave the model unchanged") {
    RngStream rng(6);
    auto d = rng.stream("data");
    const auto data = generate_dataset(100, 4, 5, d);
    auto model = LocalModel::zeros(5, 4);
    model.params.setConstant(0.25);
    std::vector<int> shard(50);
    std::iota(shard.begin(), shard.end(), 0);
    CHECK(local_train(model, data, shard, 5, 0.0).params == model.params);
    CHECK(local_train(model, data, shard, 0, 0.1).params == model.params);
}

TEST_CASE("one epoch at a small step descends the loss") {
    RngStream rng(6);
    auto d = rng.stream("data");
    const auto data = generate_dataset(200, 6, 4, d);
    std::vector<int> shard(100);
    std::iota(shard.begin(), shard.end(), 0);
    const auto before = LocalModel::zeros(4, 6);
    const auto after = local_train(before, data, shard, 1, 0.05);
    CHECK(multinomial_loss(after, data, shard) <= multinomial_loss(before, data, shard));
}

TEST_CASE("analytic gradient matches central differences") {
    RngStream rng(8);
    auto d = rng.stream("data");
    const auto data = generate_dataset(40, 3, 3, d);
    auto model = LocalModel::zeros(3, 3);
    auto noise = rng.stream("init");
    for (Eigen::Index i = 0; i < model.params.size(); ++i) model.params[i] = noise.normal(0, 0.5);
    std::vector<int> rows(40);
    std::iota(rows.begin(), rows.end(), 0);

    const auto grad = multinomial_loss_gradient(model, data, rows);
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < model.params.size(); ++i) {
        auto up = model;
        auto down = model;
        up.params[i] += h;
        down.params[i] -= h;
        const double fd =
            (multinomial_loss(up, data, rows) - multinomial_loss(down, data, rows)) / (2 * h);
        const double rel = std::abs(fd - grad[i]) / std::max(1.0, std::abs(fd));
        CHECK(rel < 1e-5);
    }
}

TEST_CASE("well-separated two-class problem trains to high F1") {
    RngStream rng(12);
    auto d = rng.stream("data");
    const auto data = generate_dataset(400, 2, 2, d, 4.0, 1.0);
    std::vector<int> rows(400);
    std::iota(rows.begin(), rows.end(), 0);
    auto model = LocalModel::zeros(2, 2);
    model = local_train(model, data, rows, 200, 0.5);
    CHECK(evaluate_f1(model, data) > 0.95);
}

TEST_CASE("macro F1 from confusion arithmetic") {
    // all-one-class predictor on balanced 2-class data -> 1/3
    const std::vector<int> truth{0, 0, 1, 1};
    const std::vector<int> pred{0, 0, 0, 0};
    CHECK(macro_f1(truth, pred, 2) == doctest::Approx(1.0 / 3.0));
    CHECK(macro_f1(truth, truth, 2) == doctest::Approx(1.0));
}

TEST_CASE("random predictor sits near 0.1 macro F1 on 10 classes") {
    RngStream rng(21);
    auto s = rng.stream("mc");
    double total = 0.0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        std::vector<int> truth(1000), pred(1000);
        for (int i = 0; i < 1000; ++i) {
            truth[static_cast<std::size_t>(i)] = i % 10;
            pred[static_cast<std::size_t>(i)] = static_cast<int>(s.next_u64() % 10);
        }
        total += macro_f1(truth, pred, 10);
    }
    CHECK(total / trials == doctest::Approx(0.1).epsilon(0.3));
}

}  // TEST_SUITE
