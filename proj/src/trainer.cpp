#include "dfl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dfl/errors.hpp"

namespace dfl {

namespace {

std::vector<int> all_rows(int n) {
    std::vector<int> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

// rows x (dim_in + 1) with a trailing bias column
Eigen::MatrixXd augmented(const SyntheticDataset& data, const std::vector<int>& rows) {
    Eigen::MatrixXd x(rows.size(), data.dim_in() + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        x.row(static_cast<Eigen::Index>(r)).head(data.dim_in()) = data.features.row(rows[r]);
        x(static_cast<Eigen::Index>(r), data.dim_in()) = 1.0;
    }
    return x;
}

Eigen::MatrixXd row_softmax(Eigen::MatrixXd logits) {
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
        const double m = logits.row(r).maxCoeff();
        logits.row(r) = (logits.row(r).array() - m).exp();
        logits.row(r) /= logits.row(r).sum();
    }
    return logits;
}

}  // namespace

SyntheticDataset generate_dataset(int n_samples, int dim_in, int classes, Substream& rng,
                                  double class_separation, double noise) {
    if (classes < 1 || dim_in < 1) throw ConfigError("trainer: classes and dim_in must be >= 1");
    if (n_samples < classes) throw ConfigError("trainer: n_samples must be >= classes");

    Eigen::MatrixXd means(classes, dim_in);
    for (int c = 0; c < classes; ++c)
        for (int d = 0; d < dim_in; ++d) means(c, d) = rng.normal(0.0, class_separation);

    SyntheticDataset data;
    data.classes = classes;
    data.features.resize(n_samples, dim_in);
    data.labels.resize(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const int c = i % classes;  // round-robin keeps every class populated
        data.labels[static_cast<std::size_t>(i)] = c;
        for (int d = 0; d < dim_in; ++d) data.features(i, d) = means(c, d) + rng.normal(0.0, noise);
    }
    return data;
}

std::vector<std::vector<int>> dirichlet_partition(const std::vector<int>& labels, double alpha,
                                                  int n_nodes, Substream& rng) {
    if (alpha <= 0.0) throw ConfigError("dirichlet_alpha: must be > 0");
    if (n_nodes < 1) throw ConfigError("n_nodes: must be >= 1");
    const int classes = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;

    constexpr int kMaxTries = 1000;
    for (int attempt = 0; attempt < kMaxTries; ++attempt) {
        std::vector<std::vector<int>> shards(static_cast<std::size_t>(n_nodes));
        for (int c = 0; c < classes; ++c) {
            std::vector<int> idx;
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (labels[i] == c) idx.push_back(static_cast<int>(i));
            const auto props = rng.dirichlet(alpha, n_nodes);
            // cumulative split keeps the partition exact
            std::size_t start = 0;
            double acc = 0.0;
            for (int node = 0; node < n_nodes; ++node) {
                acc += props[static_cast<std::size_t>(node)];
                const auto end = node + 1 == n_nodes
                                     ? idx.size()
                                     : static_cast<std::size_t>(
                                           std::llround(acc * static_cast<double>(idx.size())));
                for (std::size_t i = start; i < std::min(end, idx.size()); ++i)
                    shards[static_cast<std::size_t>(node)].push_back(idx[i]);
                start = std::min(end, idx.size());
            }
        }
        const bool all_nonempty = std::all_of(shards.begin(), shards.end(),
                                              [](const auto& s) { return !s.empty(); });
        if (all_nonempty || labels.empty()) {
            for (auto& s : shards) std::sort(s.begin(), s.end());
            return shards;
        }
    }
    throw ConfigError("dirichlet_partition: could not give every node a sample");
}

LocalModel LocalModel::zeros(int classes, int dim_in) {
    LocalModel m;
    m.classes = classes;
    m.dim_in = dim_in;
    m.params = ModelVector::Zero(static_cast<Eigen::Index>(classes) * (dim_in + 1));
    return m;
}

Eigen::Map<const Eigen::MatrixXd> LocalModel::weights() const {
    return {params.data(), classes, dim_in + 1};
}

double multinomial_loss(const LocalModel& model, const SyntheticDataset& data,
                        const std::vector<int>& rows) {
    const auto use = rows.empty() ? all_rows(data.size()) : rows;
    const Eigen::MatrixXd xa = augmented(data, use);
    const Eigen::MatrixXd p = row_softmax(xa * model.weights().transpose());
    double loss = 0.0;
    for (std::size_t r = 0; r < use.size(); ++r) {
        const int y = data.labels[static_cast<std::size_t>(use[r])];
        loss -= std::log(std::max(p(static_cast<Eigen::Index>(r), y), 1e-300));
    }
    return loss / static_cast<double>(use.size());
}

ModelVector multinomial_loss_gradient(const LocalModel& model, const SyntheticDataset& data,
                                      const std::vector<int>& rows) {
    const auto use = rows.empty() ? all_rows(data.size()) : rows;
    const Eigen::MatrixXd xa = augmented(data, use);
    Eigen::MatrixXd p = row_softmax(xa * model.weights().transpose());
    for (std::size_t r = 0; r < use.size(); ++r)
        p(static_cast<Eigen::Index>(r), data.labels[static_cast<std::size_t>(use[r])]) -= 1.0;
    const Eigen::MatrixXd grad = p.transpose() * xa / static_cast<double>(use.size());
    return Eigen::Map<const ModelVector>(grad.data(), grad.size());
}

LocalModel local_train(LocalModel model, const SyntheticDataset& data,
                       const std::vector<int>& shard, int epochs, double lr) {
    for (int e = 0; e < epochs; ++e)
        model.params -= lr * multinomial_loss_gradient(model, data, shard);
    return model;
}

std::vector<int> predict(const LocalModel& model, const SyntheticDataset& data,
                         const std::vector<int>& rows) {
    const auto use = rows.empty() ? all_rows(data.size()) : rows;
    const Eigen::MatrixXd z = augmented(data, use) * model.weights().transpose();
    std::vector<int> out(use.size());
    for (std::size_t r = 0; r < use.size(); ++r) {
        Eigen::Index best = 0;
        z.row(static_cast<Eigen::Index>(r)).maxCoeff(&best);
        out[r] = static_cast<int>(best);
    }
    return out;
}

double macro_f1(const std::vector<int>& truth, const std::vector<int>& predicted, int classes) {
    std::vector<double> tp(static_cast<std::size_t>(classes), 0.0);
    std::vector<double> fp(static_cast<std::size_t>(classes), 0.0);
    std::vector<double> fn(static_cast<std::size_t>(classes), 0.0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == predicted[i])
            tp[static_cast<std::size_t>(truth[i])] += 1.0;
        else {
            fp[static_cast<std::size_t>(predicted[i])] += 1.0;
            fn[static_cast<std::size_t>(truth[i])] += 1.0;
        }
    }
    double total = 0.0;
    for (int c = 0; c < classes; ++c) {
        const auto k = static_cast<std::size_t>(c);
        const double denom = 2.0 * tp[k] + fp[k] + fn[k];
        total += denom > 0.0 ? 2.0 * tp[k] / denom : 0.0;
    }
    return total / static_cast<double>(classes);
}

double evaluate_f1(const LocalModel& model, const SyntheticDataset& test_set,
                   const std::vector<int>& rows) {
    const auto use = rows.empty() ? all_rows(test_set.size()) : rows;
    const auto pred = predict(model, test_set, use);
    std::vector<int> truth(use.size());
    for (std::size_t i = 0; i < use.size(); ++i)
        truth[i] = test_set.labels[static_cast<std::size_t>(use[i])];
    return macro_f1(truth, pred, test_set.classes);
}

}  // namespace dfl
