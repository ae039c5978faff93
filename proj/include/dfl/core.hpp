#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace dfl {

template <class Scalar>
using ModelVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Flat parameter vector, the unit exchanged and aggregated between nodes.
using ModelVector = ModelVec<double>;

/// Nodes are plain integer indices inside a federation; the "host:port"
/// rendering only exists in exports.
using NodeId = int;

/// Export-time label, e.g. node 0 -> "192.168.51.2:45001".
std::string node_label(NodeId id);

/// A neighbor's model together with its timing information (simulated clock).
struct ModelMessage {
    NodeId sender = -1;
    int model_round = 0;
    ModelVector params;
    double send_time = 0.0;
    double arrival_time = 0.0;
};

/// The four behavior scores for one neighbor in one round. 1 = optimal.
struct MetricVector {
    double similarity = 1.0;
    double fraction = 1.0;
    double latency = 1.0;
    double messages = 1.0;
};

inline double clamp01(double x) {
    return std::clamp(x, 0.0, 1.0);
}

/// Linearly interpolated percentile, q in [0,1]. Copies and sorts.
double percentile(std::vector<double> values, double q);

/// Population mean and standard deviation.
struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;
};
MeanStd mean_std(const std::vector<double>& values);

/// Spearman rank correlation of two equal-length series (average ranks on ties).
double spearman_rho(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace dfl
