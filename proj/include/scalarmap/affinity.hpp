#pragma once

/**
 * @file affinity.hpp
 *
 * @brief Composite dissimilarity matrix over data points and attribute nodes.
 *
 * The composite matrix has one node per data row followed by one node per
 * attribute. Its four blocks are the data-data distances (DD), the
 * attribute-attribute correlation dissimilarities (AA) and the data-attribute
 * affinity block (DA) together with its transpose.
 */

#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scalarmap/dataset.hpp"

namespace scalarmap {

enum class BlockKind { DD, AA, DA };

struct DissimilarityBlock {
    BlockKind kind;
    Eigen::MatrixXd values;
};

enum class NodeKind { Data, Attribute };

/// Nonnegative block scalers; at least one must be positive.
struct FusionWeights {
    double data_data = 1.0;
    double attr_attr = 1.0;
    double data_attr = 1.0;

    void validate() const;
};

struct CompositeMatrix {
    Eigen::MatrixXd values;  // (n+d) x (n+d)
    Eigen::Index data_count = 0;
    Eigen::Index attribute_count = 0;

    Eigen::Index size() const { return values.rows(); }
    NodeKind kind(Eigen::Index node) const { return node < data_count ? NodeKind::Data : NodeKind::Attribute; }
};

/// Euclidean distances between normalized rows.
DissimilarityBlock data_distance_block(const NormalizedDataset& nds);

/// 1 - |pearson(k, l)|, with the correlation of a constant column taken as 0.
DissimilarityBlock attribute_dissimilarity_block(const NormalizedDataset& nds);

/// 1 - v_ik: rows with a high value of attribute k sit close to its node.
DissimilarityBlock data_attribute_block(const NormalizedDataset& nds);

/// Pearson correlation of two equally long columns; 0 if either is constant.
double pearson(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b);

/// Scales each block by the inverse of its largest entry, applies the weights
/// and assembles the symmetric composite. Throws DataError(ShapeMismatch).
CompositeMatrix fuse(const DissimilarityBlock& dd, const DissimilarityBlock& aa, const DissimilarityBlock& da,
                     const FusionWeights& weights = {});

/// Convenience: all three blocks from one normalized table, fused.
CompositeMatrix build_composite(const NormalizedDataset& nds, const FusionWeights& weights = {});

/// Debug dump with node labels as row and column headers.
void write_composite_csv(std::ostream& out, const CompositeMatrix& composite, const std::vector<std::string>& labels);

}  // namespace scalarmap
