#include "scalarmap/affinity.hpp"

#include <algorithm>
#include <cmath>

#include "scalarmap/error.hpp"
#include "scalarmap/format.hpp"

namespace scalarmap {

void FusionWeights::validate() const {
    for (double w : {data_data, attr_attr, data_attr}) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw ConfigError(ErrorCode::InvalidParameter, "fusion weights must be finite and nonnegative");
        }
    }
    if (data_data == 0.0 && attr_attr == 0.0 && data_attr == 0.0) {
        throw ConfigError(ErrorCode::InvalidParameter, "at least one fusion weight must be positive");
    }
}

DissimilarityBlock data_distance_block(const NormalizedDataset& nds) {
    const Eigen::Index n = nds.rows();
    Eigen::MatrixXd dd = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double dist = (nds.values.row(i) - nds.values.row(j)).norm();
            dd(i, j) = dist;
            dd(j, i) = dist;
        }
    }
    return {BlockKind::DD, std::move(dd)};
}

double pearson(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
    const Eigen::VectorXd ca = a.array() - a.mean();
    const Eigen::VectorXd cb = b.array() - b.mean();
    const double saa = ca.squaredNorm();
    const double sbb = cb.squaredNorm();
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    const double r = ca.dot(cb) / std::sqrt(saa * sbb);
    return std::clamp(r, -1.0, 1.0);
}

DissimilarityBlock attribute_dissimilarity_block(const NormalizedDataset& nds) {
    const Eigen::Index d = nds.cols();
    Eigen::MatrixXd aa = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        for (Eigen::Index l = k + 1; l < d; ++l) {
            const double value = 1.0 - std::abs(pearson(nds.values.col(k), nds.values.col(l)));
            aa(k, l) = value;
            aa(l, k) = value;
        }
    }
    return {BlockKind::AA, std::move(aa)};
}

DissimilarityBlock data_attribute_block(const NormalizedDataset& nds) {
    return {BlockKind::DA, (1.0 - nds.values.array()).matrix()};
}

CompositeMatrix fuse(const DissimilarityBlock& dd, const DissimilarityBlock& aa, const DissimilarityBlock& da,
                     const FusionWeights& weights) {
    weights.validate();
    const Eigen::Index n = dd.values.rows();
    const Eigen::Index d = aa.values.rows();
    if (dd.values.cols() != n || aa.values.cols() != d || da.values.rows() != n || da.values.cols() != d) {
        throw DataError(ErrorCode::ShapeMismatch,
                        "block shapes disagree: DD " + std::to_string(dd.values.rows()) + "x" +
                            std::to_string(dd.values.cols()) + ", AA " + std::to_string(aa.values.rows()) + "x" +
                            std::to_string(aa.values.cols()) + ", DA " + std::to_string(da.values.rows()) + "x" +
                            std::to_string(da.values.cols()));
    }

    auto scaled = [](const Eigen::MatrixXd& block, double weight) -> Eigen::MatrixXd {
        const double peak = block.size() ? block.maxCoeff() : 0.0;
        if (peak > 0.0) return (block / peak) * weight;
        return block * weight;
    };

    CompositeMatrix out;
    out.data_count = n;
    out.attribute_count = d;
    out.values.resize(n + d, n + d);
    out.values.topLeftCorner(n, n) = scaled(dd.values, weights.data_data);
    out.values.bottomRightCorner(d, d) = scaled(aa.values, weights.attr_attr);
    const Eigen::MatrixXd da_scaled = scaled(da.values, weights.data_attr);
    out.values.topRightCorner(n, d) = da_scaled;
    out.values.bottomLeftCorner(d, n) = da_scaled.transpose();
    out.values.diagonal().setZero();
    return out;
}

CompositeMatrix build_composite(const NormalizedDataset& nds, const FusionWeights& weights) {
    return fuse(data_distance_block(nds), attribute_dissimilarity_block(nds), data_attribute_block(nds), weights);
}

void write_composite_csv(std::ostream& out, const CompositeMatrix& composite, const std::vector<std::string>& labels) {
    out << "node";
    for (const auto& label : labels) out << ',' << csv_escape(label);
    out << '\n';
    for (Eigen::Index i = 0; i < composite.size(); ++i) {
        out << csv_escape(labels[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < composite.size(); ++j) out << ',' << format_real(composite.values(i, j));
        out << '\n';
    }
}

}  // namespace scalarmap
