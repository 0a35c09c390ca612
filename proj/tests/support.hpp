#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "scalarmap/dataset.hpp"
#include "scalarmap/field.hpp"

#ifndef SCALARMAP_DATA_DIR
#define SCALARMAP_DATA_DIR "data"
#endif

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(SCALARMAP_DATA_DIR) + "/" + name; }

inline scalarmap::Dataset make_dataset(const std::vector<std::string>& names, const oracle::Matrix& rows) {
    scalarmap::Dataset ds;
    ds.attribute_names = names;
    ds.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(names.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ds.row_labels.push_back("r" + std::to_string(i));
        for (std::size_t k = 0; k < names.size(); ++k) {
            ds.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
        }
    }
    return ds;
}

inline oracle::Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double lo = 0.0,
                                    double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    oracle::Matrix m(rows, std::vector<double>(cols));
    for (auto& r : m) {
        for (auto& v : r) v = u(rng);
    }
    return m;
}

inline oracle::Matrix to_rows(const Eigen::MatrixXd& m) {
    oracle::Matrix out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    }
    return out;
}

inline Eigen::MatrixXd to_eigen(const oracle::Matrix& m) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(m.size()), m.empty() ? 0 : static_cast<Eigen::Index>(m[0].size()));
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m[i].size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j];
    }
    return out;
}

inline std::vector<oracle::Pt> to_pts(const Eigen::MatrixX2d& x) {
    std::vector<oracle::Pt> out;
    for (Eigen::Index i = 0; i < x.rows(); ++i) out.emplace_back(x(i, 0), x(i, 1));
    return out;
}

inline Eigen::MatrixX2d to_coords(const std::vector<oracle::Pt>& pts) {
    Eigen::MatrixX2d out(static_cast<Eigen::Index>(pts.size()), 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        out(static_cast<Eigen::Index>(i), 0) = pts[i].first;
        out(static_cast<Eigen::Index>(i), 1) = pts[i].second;
    }
    return out;
}

inline std::vector<scalarmap::Point> to_points(const std::vector<oracle::Pt>& pts) {
    std::vector<scalarmap::Point> out;
    for (const auto& p : pts) out.push_back({p.first, p.second});
    return out;
}

/// Random dissimilarity matrix: symmetric, zero diagonal, entries in (0, 1].
inline Eigen::MatrixXd random_dissimilarities(std::mt19937_64& rng, Eigen::Index m) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) d(i, j) = d(j, i) = u(rng);
    }
    return d;
}

}  // namespace testing
