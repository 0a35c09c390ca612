#include "scalarmap/mds.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "scalarmap/error.hpp"

namespace scalarmap {

namespace {

constexpr double coincident_tol = 1e-12;

void require_square(const Eigen::MatrixXd& delta, const Eigen::MatrixX2d& coords) {
    if (delta.rows() != delta.cols() || delta.rows() != coords.rows()) {
        throw DataError(ErrorCode::ShapeMismatch, "dissimilarity matrix is " + std::to_string(delta.rows()) + "x" +
                                                      std::to_string(delta.cols()) + " but layout has " +
                                                      std::to_string(coords.rows()) + " points");
    }
}

double pair_distance(const Eigen::MatrixX2d& x, Eigen::Index i, Eigen::Index j) {
    const double dx = x(i, 0) - x(j, 0);
    const double dy = x(i, 1) - x(j, 1);
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

void MdsParams::validate() const {
    if (max_iter < 1) throw ConfigError(ErrorCode::InvalidParameter, "max_iter must be >= 1");
    if (!(rel_tol > 0.0)) throw ConfigError(ErrorCode::InvalidParameter, "rel_tol must be > 0");
}

double stress(const Eigen::MatrixXd& delta, const Eigen::MatrixX2d& coords) {
    require_square(delta, coords);
    double residual = 0.0;
    double norm = 0.0;
    const Eigen::Index m = delta.rows();
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
            const double diff = pair_distance(coords, i, j) - delta(i, j);
            residual += diff * diff;
            norm += delta(i, j) * delta(i, j);
        }
    }
    if (norm == 0.0) return 0.0;
    return std::sqrt(residual / norm);
}

Eigen::MatrixX2d classical_init(const Eigen::MatrixXd& delta) {
    const Eigen::Index m = delta.rows();
    Eigen::MatrixX2d coords = Eigen::MatrixX2d::Zero(m, 2);
    if (m < 2) return coords;

    // B = -1/2 J D^2 J, with J the centring matrix.
    Eigen::MatrixXd b = -0.5 * delta.array().square().matrix();
    const Eigen::VectorXd row_mean = b.rowwise().mean();
    const Eigen::RowVectorXd col_mean = b.colwise().mean();
    const double grand_mean = b.mean();
    b.colwise() -= row_mean;
    b.rowwise() -= col_mean;
    b.array() += grand_mean;
    b = 0.5 * (b + b.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
    const Eigen::VectorXd& eigenvalues = solver.eigenvalues();  // ascending
    const Eigen::MatrixXd& eigenvectors = solver.eigenvectors();
    for (int axis = 0; axis < 2 && axis < m; ++axis) {
        const Eigen::Index idx = m - 1 - axis;
        const double lambda = std::max(eigenvalues[idx], 0.0);
        if (lambda == 0.0) continue;
        Eigen::VectorXd v = eigenvectors.col(idx);
        // Fix the sign so the largest-magnitude component is positive.
        Eigen::Index pivot = 0;
        v.cwiseAbs().maxCoeff(&pivot);
        if (v[pivot] < 0.0) v = -v;
        coords.col(axis) = v * std::sqrt(lambda);
    }
    return coords;
}

Eigen::MatrixX2d random_init(const Eigen::MatrixXd& delta, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double scale = delta.size() && delta.maxCoeff() > 0.0 ? delta.maxCoeff() : 1.0;
    Eigen::MatrixX2d coords(delta.rows(), 2);
    for (Eigen::Index i = 0; i < delta.rows(); ++i) {
        for (int c = 0; c < 2; ++c) {
            // 53 random bits mapped to [0, 1); avoids distribution differences between standard libraries.
            const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            coords(i, c) = (unit - 0.5) * scale;
        }
    }
    return coords;
}

Eigen::MatrixX2d smacof_step(const Eigen::MatrixXd& delta, const Eigen::MatrixX2d& coords) {
    require_square(delta, coords);
    const Eigen::Index m = delta.rows();
    Eigen::MatrixX2d next = Eigen::MatrixX2d::Zero(m, 2);
    if (m == 0) return next;
    for (Eigen::Index i = 0; i < m; ++i) {
        double diag = 0.0;
        double sx = 0.0;
        double sy = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (j == i) continue;
            const double dist = pair_distance(coords, i, j);
            const double bij = dist < coincident_tol ? 0.0 : -delta(i, j) / dist;
            diag -= bij;
            sx += bij * coords(j, 0);
            sy += bij * coords(j, 1);
        }
        next(i, 0) = (diag * coords(i, 0) + sx) / static_cast<double>(m);
        next(i, 1) = (diag * coords(i, 1) + sy) / static_cast<double>(m);
    }
    return next;
}

MdsResult run_mds(const Eigen::MatrixXd& delta, const MdsParams& params) {
    params.validate();
    if (delta.rows() != delta.cols()) {
        throw DataError(ErrorCode::ShapeMismatch, "dissimilarity matrix must be square");
    }

    MdsResult result;
    result.coords = params.init == InitMode::Classical ? classical_init(delta) : random_init(delta, params.seed);
    auto& report = result.report;
    double previous = stress(delta, result.coords);
    report.trace.push_back(previous);

    for (int t = 1; t <= params.max_iter; ++t) {
        if (previous == 0.0) {
            report.converged = true;
            break;
        }
        result.coords = smacof_step(delta, result.coords);
        const double current = stress(delta, result.coords);
        report.trace.push_back(current);
        report.iterations = t;
        const double change = std::abs(previous - current) / previous;
        previous = current;
        if (change < params.rel_tol) {
            report.converged = true;
            break;
        }
    }
    if (previous == 0.0) report.converged = true;
    report.final_stress = previous;
    return result;
}

std::pair<Embedding, StressReport> embed(const CompositeMatrix& composite, const std::vector<std::string>& labels,
                                         const MdsParams& params) {
    if (static_cast<Eigen::Index>(labels.size()) != composite.size()) {
        throw DataError(ErrorCode::ShapeMismatch, "label count does not match composite matrix size");
    }
    auto result = run_mds(composite.values, params);
    Embedding embedding;
    embedding.coords = std::move(result.coords);
    embedding.labels = labels;
    embedding.kinds.reserve(labels.size());
    for (Eigen::Index i = 0; i < composite.size(); ++i) embedding.kinds.push_back(composite.kind(i));
    return {std::move(embedding), std::move(result.report)};
}

}  // namespace scalarmap
