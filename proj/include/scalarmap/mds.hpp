#pragma once

/**
 * @file mds.hpp
 *
 * @brief Metric MDS by stress majorization (SMACOF) with Torgerson start.
 */

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scalarmap/affinity.hpp"

namespace scalarmap {

/// Canvas coordinates for every node of a composite matrix.
struct Embedding {
    Eigen::MatrixX2d coords;  // m x 2
    std::vector<NodeKind> kinds;
    std::vector<std::string> labels;

    Eigen::Index size() const { return coords.rows(); }
};

struct StressReport {
    std::vector<double> trace;  // trace[0] is the stress of the initial layout
    double final_stress = 0.0;
    int iterations = 0;
    bool converged = false;
};

enum class InitMode { Classical, Random };

struct MdsParams {
    int max_iter = 300;
    double rel_tol = 1e-7;
    InitMode init = InitMode::Classical;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Kruskal stress-1 of layout `coords` against dissimilarities `delta`; 0 when delta is all zero.
double stress(const Eigen::MatrixXd& delta, const Eigen::MatrixX2d& coords);

/// Torgerson scaling: top two eigenpairs of the double-centred -D^2/2.
/// Negative eigenvalues are clamped to zero.
Eigen::MatrixX2d classical_init(const Eigen::MatrixXd& delta);

/// Uniform random start in a box matching the scale of `delta`. Deterministic per seed.
Eigen::MatrixX2d random_init(const Eigen::MatrixXd& delta, std::uint64_t seed);

/// One Guttman transform with uniform weights.
Eigen::MatrixX2d smacof_step(const Eigen::MatrixXd& delta, const Eigen::MatrixX2d& coords);

struct MdsResult {
    Eigen::MatrixX2d coords;
    StressReport report;
};

MdsResult run_mds(const Eigen::MatrixXd& delta, const MdsParams& params = {});

/// Runs MDS on a composite matrix and tags each node with its kind and label.
/// `labels` holds the n row labels followed by the d attribute names.
std::pair<Embedding, StressReport> embed(const CompositeMatrix& composite, const std::vector<std::string>& labels,
                                         const MdsParams& params = {});

}  // namespace scalarmap
