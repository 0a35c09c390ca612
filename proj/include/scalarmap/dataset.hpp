#pragma once

/**
 * @file dataset.hpp
 *
 * @brief Loading, normalizing and filtering numeric tables.
 */

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace scalarmap {

/**
 * A table of `n` rows by `d` numeric attributes, in raw attribute units.
 * Row labels and attribute names are unique.
 */
struct Dataset {
    std::vector<std::string> attribute_names;
    std::vector<std::string> row_labels;
    Eigen::MatrixXd values;  // n x d

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    /// Index of the attribute called `name`; exact match first, then a unique
    /// case-insensitive match. Throws ConfigError(UnknownAttribute) listing valid names.
    std::size_t attribute_index(std::string_view name) const;
};

/**
 * Min-max normalized copy of a Dataset. Every non-constant column spans
 * exactly [0, 1]; constant columns are set to 0.5.
 */
struct NormalizedDataset {
    std::vector<std::string> attribute_names;
    std::vector<std::string> row_labels;
    Eigen::MatrixXd values;
    Eigen::VectorXd column_min;
    Eigen::VectorXd column_max;
    std::vector<std::string> warnings;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    /// Maps a normalized value of attribute `k` back to raw units.
    double denormalize(std::size_t k, double v) const;
};

struct CsvOptions {
    char delimiter = ',';
    /// Name of the label column. When unset, the single non-numeric column
    /// (if any) is used, otherwise rows are labelled "row_i".
    std::optional<std::string> label_column;
};

Dataset load_csv(std::istream& source, const CsvOptions& options = {});
Dataset load_csv_file(const std::string& path, const CsvOptions& options = {});

/// Splits RFC-4180 style text into records. Quoted fields may contain the
/// delimiter, doubled quotes and line breaks.
std::vector<std::vector<std::string>> parse_csv_records(std::istream& source, char delimiter = ',');

NormalizedDataset normalize_minmax(const Dataset& ds);

/// Re-normalizes an already normalized table (useful for idempotence checks).
NormalizedDataset normalize_minmax(const NormalizedDataset& nds);

enum class Comparator { Less, Greater, LessEqual, GreaterEqual };

struct FilterClause {
    std::size_t attribute = 0;
    std::string attribute_name;
    Comparator op = Comparator::Greater;
    double threshold = 0.0;

    bool matches(double value) const;
};

/// Conjunction of clauses in raw attribute units. Empty means "always true".
struct RowPredicate {
    std::vector<FilterClause> clauses;
};

/// Parses `name op number ("," name op number)*` against the attribute names of `ds`.
RowPredicate parse_filter(std::string_view expr, const Dataset& ds);

std::vector<bool> apply_filter(const Dataset& ds, const RowPredicate& predicate);

}  // namespace scalarmap
