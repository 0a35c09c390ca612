#include "scalarmap/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "scalarmap/error.hpp"

namespace scalarmap {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

std::optional<double> parse_real(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    return out;
}

std::vector<std::string> dedupe_labels(std::vector<std::string> labels) {
    std::unordered_map<std::string, int> seen;
    std::set<std::string> used(labels.begin(), labels.end());
    for (auto& label : labels) {
        int& count = seen[label];
        ++count;
        if (count == 1) continue;
        // Pick the first suffix that doesn't collide with an existing label.
        std::string candidate;
        int suffix = count;
        do {
            candidate = label + "_" + std::to_string(suffix++);
        } while (used.count(candidate));
        used.insert(candidate);
        label = candidate;
    }
    return labels;
}

}  // namespace

std::size_t Dataset::attribute_index(std::string_view name) const {
    for (std::size_t k = 0; k < attribute_names.size(); ++k) {
        if (attribute_names[k] == name) return k;
    }
    std::optional<std::size_t> found;
    for (std::size_t k = 0; k < attribute_names.size(); ++k) {
        if (iequals(attribute_names[k], name)) {
            if (found) {
                throw ConfigError(ErrorCode::UnknownAttribute,
                                  "ambiguous attribute '" + std::string(name) + "'; valid names: " +
                                      join_names(attribute_names));
            }
            found = k;
        }
    }
    if (!found) {
        throw ConfigError(ErrorCode::UnknownAttribute, "unknown attribute '" + std::string(name) +
                                                           "'; valid names: " + join_names(attribute_names));
    }
    return *found;
}

double NormalizedDataset::denormalize(std::size_t k, double v) const {
    const double lo = column_min[static_cast<Eigen::Index>(k)];
    const double hi = column_max[static_cast<Eigen::Index>(k)];
    if (hi == lo) return lo;
    return lo + v * (hi - lo);
}

std::vector<std::vector<std::string>> parse_csv_records(std::istream& source, char delimiter) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        // Blank lines are skipped.
        if (!(record.size() == 1 && record.front().empty())) records.push_back(std::move(record));
        record.clear();
    };

    char c;
    while (source.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (source.peek() == '"') {
                    source.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (c == delimiter) {
            end_field();
        } else if (c == '\r') {
            if (source.peek() == '\n') source.get(c);
            end_record();
        } else if (c == '\n') {
            end_record();
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (!field.empty() || !record.empty() || field_started) end_record();

    // Strip a UTF-8 byte order mark from the very first field.
    if (!records.empty() && !records.front().empty()) {
        auto& first = records.front().front();
        if (first.rfind("\xEF\xBB\xBF", 0) == 0) first.erase(0, 3);
    }
    return records;
}

Dataset load_csv(std::istream& source, const CsvOptions& options) {
    auto records = parse_csv_records(source, options.delimiter);
    if (records.empty()) throw DataError(ErrorCode::EmptyDataset, "input has no header row");

    std::vector<std::string> header;
    for (const auto& h : records.front()) header.emplace_back(trim(h));
    const std::size_t columns = header.size();
    const std::size_t n = records.size() - 1;
    if (n == 0) throw DataError(ErrorCode::EmptyDataset, "input has a header but no data rows");

    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != columns) {
            throw DataError(ErrorCode::RaggedRow, "row " + std::to_string(r) + " has " +
                                                      std::to_string(records[r].size()) + " fields, header has " +
                                                      std::to_string(columns));
        }
    }

    // Locate the label column.
    std::optional<std::size_t> label_col;
    if (options.label_column) {
        for (std::size_t c = 0; c < columns; ++c) {
            if (header[c] == *options.label_column) label_col = c;
        }
        if (!label_col) {
            throw ConfigError(ErrorCode::UnknownAttribute,
                              "label column '" + *options.label_column + "' not found; columns: " + join_names(header));
        }
    } else {
        std::vector<std::size_t> non_numeric;
        for (std::size_t c = 0; c < columns; ++c) {
            for (std::size_t r = 1; r < records.size(); ++r) {
                const auto cell = trim(records[r][c]);
                if (!cell.empty() && !parse_real(cell)) {
                    non_numeric.push_back(c);
                    break;
                }
            }
        }
        if (non_numeric.size() == 1) label_col = non_numeric.front();
    }

    Dataset ds;
    std::vector<std::size_t> value_cols;
    for (std::size_t c = 0; c < columns; ++c) {
        if (label_col && c == *label_col) continue;
        value_cols.push_back(c);
        ds.attribute_names.push_back(header[c]);
    }
    {
        std::set<std::string> names;
        for (const auto& name : ds.attribute_names) {
            if (name.empty()) throw DataError(ErrorCode::InvalidShape, "empty attribute name in header");
            if (!names.insert(name).second) {
                throw DataError(ErrorCode::DuplicateAttribute, "duplicate attribute name '" + name + "'");
            }
        }
    }
    const std::size_t d = value_cols.size();

    ds.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto i = static_cast<Eigen::Index>(r - 1);
        for (std::size_t k = 0; k < d; ++k) {
            const auto& cell = records[r][value_cols[k]];
            if (trim(cell).empty()) {
                throw DataError(ErrorCode::MissingValue, "missing value at row " + std::to_string(r) + ", column '" +
                                                             header[value_cols[k]] + "'");
            }
            auto value = parse_real(cell);
            if (!value) {
                throw DataError(ErrorCode::NonNumericCell, "non-numeric cell '" + cell + "' at row " +
                                                               std::to_string(r) + ", column '" +
                                                               header[value_cols[k]] + "'");
            }
            ds.values(i, static_cast<Eigen::Index>(k)) = *value;
        }
        if (label_col) {
            labels.emplace_back(trim(records[r][*label_col]));
        } else {
            labels.push_back("row_" + std::to_string(r - 1));
        }
    }
    ds.row_labels = dedupe_labels(std::move(labels));

    if (n < 2 || d < 2) {
        throw DataError(ErrorCode::InvalidShape, "need at least 2 rows and 2 numeric attributes, got " +
                                                     std::to_string(n) + "x" + std::to_string(d));
    }
    return ds;
}

Dataset load_csv_file(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(ErrorCode::MalformedFile, "cannot open '" + path + "'");
    return load_csv(in, options);
}

namespace {

template <typename Table>
NormalizedDataset normalize_values(const Table& table) {
    NormalizedDataset out;
    out.attribute_names = table.attribute_names;
    out.row_labels = table.row_labels;
    const Eigen::MatrixXd& raw = table.values;
    out.values.resize(raw.rows(), raw.cols());
    out.column_min = raw.colwise().minCoeff().transpose();
    out.column_max = raw.colwise().maxCoeff().transpose();
    for (Eigen::Index k = 0; k < raw.cols(); ++k) {
        const double lo = out.column_min[k];
        const double hi = out.column_max[k];
        if (hi == lo) {
            out.values.col(k).setConstant(0.5);
            out.warnings.push_back("attribute '" + out.attribute_names[static_cast<std::size_t>(k)] +
                                   "' is constant; normalized to 0.5");
            continue;
        }
        const double span = hi - lo;
        for (Eigen::Index i = 0; i < raw.rows(); ++i) {
            const double v = raw(i, k);
            // Pin the extremes so min/max are exactly 0 and 1.
            out.values(i, k) = v == lo ? 0.0 : v == hi ? 1.0 : (v - lo) / span;
        }
    }
    return out;
}

}  // namespace

NormalizedDataset normalize_minmax(const Dataset& ds) { return normalize_values(ds); }

NormalizedDataset normalize_minmax(const NormalizedDataset& nds) { return normalize_values(nds); }

bool FilterClause::matches(double value) const {
    switch (op) {
        case Comparator::Less: return value < threshold;
        case Comparator::Greater: return value > threshold;
        case Comparator::LessEqual: return value <= threshold;
        case Comparator::GreaterEqual: return value >= threshold;
    }
    return false;
}

RowPredicate parse_filter(std::string_view expr, const Dataset& ds) {
    RowPredicate predicate;
    if (trim(expr).empty()) return predicate;

    std::size_t start = 0;
    while (start <= expr.size()) {
        const auto comma = expr.find(',', start);
        const auto raw_clause = expr.substr(start, comma == std::string_view::npos ? expr.npos : comma - start);
        const auto clause = trim(raw_clause);
        auto malformed = [&](const std::string& why) {
            return ConfigError(ErrorCode::MalformedClause, "malformed filter clause '" + std::string(clause) + "': " + why);
        };
        if (clause.empty()) throw malformed("empty clause");

        std::size_t pos = 0;
        auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
        auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
        if (!is_ident_start(clause[pos])) throw malformed("expected attribute name");
        while (pos < clause.size() && is_ident(clause[pos])) ++pos;
        const auto name = clause.substr(0, pos);
        while (pos < clause.size() && std::isspace(static_cast<unsigned char>(clause[pos]))) ++pos;

        FilterClause fc;
        if (pos < clause.size() && (clause[pos] == '<' || clause[pos] == '>')) {
            const bool less = clause[pos] == '<';
            ++pos;
            if (pos < clause.size() && clause[pos] == '=') {
                fc.op = less ? Comparator::LessEqual : Comparator::GreaterEqual;
                ++pos;
            } else {
                fc.op = less ? Comparator::Less : Comparator::Greater;
            }
        } else {
            throw malformed("expected one of <, >, <=, >=");
        }
        auto number = parse_real(clause.substr(pos));
        if (!number) throw malformed("expected a number after the comparator");

        fc.attribute = ds.attribute_index(name);
        fc.attribute_name = ds.attribute_names[fc.attribute];
        fc.threshold = *number;
        predicate.clauses.push_back(std::move(fc));

        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return predicate;
}

std::vector<bool> apply_filter(const Dataset& ds, const RowPredicate& predicate) {
    std::vector<bool> mask(static_cast<std::size_t>(ds.rows()), true);
    for (Eigen::Index i = 0; i < ds.rows(); ++i) {
        for (const auto& clause : predicate.clauses) {
            if (!clause.matches(ds.values(i, static_cast<Eigen::Index>(clause.attribute)))) {
                mask[static_cast<std::size_t>(i)] = false;
                break;
            }
        }
    }
    return mask;
}

}  // namespace scalarmap
