#pragma once

#include <Eigen/Dense>

#include <vector>

#include "dfl/core.hpp"
#include "dfl/rng.hpp"

namespace dfl {

/// Gaussian class blobs with seeded means; the desk-scale stand-in for a
/// real image dataset.
struct SyntheticDataset {
    Eigen::MatrixXd features;  // samples x dim_in
    std::vector<int> labels;   // values in [0, classes)
    int classes = 0;

    int size() const { return static_cast<int>(labels.size()); }
    int dim_in() const { return static_cast<int>(features.cols()); }
};

SyntheticDataset generate_dataset(int n_samples, int dim_in, int classes, Substream& rng,
                                  double class_separation = 2.5, double noise = 1.0);

/// Multinomial logistic regression; params is the column-major flattening of
/// the classes x (dim_in + 1) weight matrix (bias last).
struct LocalModel {
    ModelVector params;
    int classes = 0;
    int dim_in = 0;

    static LocalModel zeros(int classes, int dim_in);
    Eigen::Map<const Eigen::MatrixXd> weights() const;
};

/// Per-class sample proportions drawn from Dirichlet(alpha); the partition is
/// disjoint and exhaustive and every node ends up with at least one sample.
std::vector<std::vector<int>> dirichlet_partition(const std::vector<int>& labels, double alpha,
                                                  int n_nodes, Substream& rng);

/// Mean cross-entropy of the model on the given rows (all rows when empty).
double multinomial_loss(const LocalModel& model, const SyntheticDataset& data,
                        const std::vector<int>& rows);

/// Analytic gradient of multinomial_loss w.r.t. params (same flattening).
ModelVector multinomial_loss_gradient(const LocalModel& model, const SyntheticDataset& data,
                                      const std::vector<int>& rows);

/// Full-batch gradient descent epochs on one shard; deterministic.
LocalModel local_train(LocalModel model, const SyntheticDataset& data,
                       const std::vector<int>& shard, int epochs, double lr);

std::vector<int> predict(const LocalModel& model, const SyntheticDataset& data,
                         const std::vector<int>& rows);

/// Macro-averaged F1 over all classes (empty classes count as 0).
double evaluate_f1(const LocalModel& model, const SyntheticDataset& test_set,
                   const std::vector<int>& rows = {});

double macro_f1(const std::vector<int>& truth, const std::vector<int>& predicted, int classes);

}  // namespace dfl
