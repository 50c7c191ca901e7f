#include "ctdetect/norms.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>

namespace ctd {

double SingularSpectrum::sum_top(int k) const {
    if (k < 1) throw std::invalid_argument("Ky Fan order must be >= 1");
    const int kk = std::min<int>(k, static_cast<int>(values.size()));
    double s = 0.0;
    for (int i = 0; i < kk; ++i) s += values[i];
    return s;
}

double SingularSpectrum::sum() const { return sum_top(static_cast<int>(values.size())); }

void PartialMatrix::validate() const {
    if (rows < 1 || cols < 1) throw std::invalid_argument("partial matrix shape must be positive");
    if (entries.empty()) throw std::invalid_argument("partial matrix has no known entries");
    std::set<std::pair<int, int>> seen;
    for (const PartialEntry& e : entries) {
        if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
            throw std::invalid_argument("partial matrix entry index out of range");
        if (!seen.insert({e.row, e.col}).second)
            throw std::invalid_argument("partial matrix entry listed twice");
    }
}

double standard_norm(const CorrelationTensor& t) { return t.values.norm(); }

SingularSpectrum singular_values(const Eigen::MatrixXd& m) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    SingularSpectrum s;
    s.values.assign(svd.singularValues().data(),
                    svd.singularValues().data() + svd.singularValues().size());
    return s;
}

double ky_fan_norm(const Eigen::MatrixXd& m, int k) {
    if (k < 1) throw std::invalid_argument("Ky Fan order must be >= 1");
    const int max_k = static_cast<int>(std::min(m.rows(), m.cols()));
    if (k > max_k) {
        std::cerr << "ctdetect: Ky Fan order " << k << " clamped to " << max_k
                  << " (matrix has only that many singular values)\n";
        k = max_k;
    }
    return singular_values(m).sum_top(k);
}

double trace_norm(const Eigen::MatrixXd& m) { return singular_values(m).sum(); }

double frobenius_norm(const Eigen::MatrixXd& m) { return m.norm(); }

double trace_norm_lower_bound(const PartialMatrix& pm) {
    pm.validate();

    std::map<std::pair<int, int>, double> known;
    std::map<int, std::set<int>> row_cols;
    for (const PartialEntry& e : pm.entries) {
        known[{e.row, e.col}] = e.value;
        row_cols[e.row].insert(e.col);
    }

    // (a) diagonal absolute sum, which lower-bounds the trace norm
    double diag_sum = 0.0;
    for (const PartialEntry& e : pm.entries)
        if (e.row == e.col) diag_sum += std::abs(e.value);

    // (c) Frobenius norm of whatever is known
    double fro2 = 0.0;
    for (const PartialEntry& e : pm.entries) fro2 += e.value * e.value;
    double best = std::max(diag_sum, std::sqrt(fro2));

    // (b) greedy fully known submatrices: seed with each row's column set,
    // gather every row covering it, then shrink to the common columns.
    // Any submatrix of known entries has trace norm <= the full trace norm.
    for (const auto& [seed_row, seed_cols] : row_cols) {
        std::vector<int> block_rows;
        for (const auto& [r, cols] : row_cols)
            if (std::includes(cols.begin(), cols.end(), seed_cols.begin(), seed_cols.end()))
                block_rows.push_back(r);

        std::set<int> common = row_cols[block_rows.front()];
        for (int r : block_rows) {
            std::set<int> inter;
            std::set_intersection(common.begin(), common.end(), row_cols[r].begin(),
                                  row_cols[r].end(), std::inserter(inter, inter.begin()));
            common = std::move(inter);
        }
        if (common.empty()) continue;

        Eigen::MatrixXd sub(block_rows.size(), common.size());
        for (std::size_t ri = 0; ri < block_rows.size(); ++ri) {
            int ci = 0;
            for (int c : common) sub(static_cast<Eigen::Index>(ri), ci++) = known[{block_rows[ri], c}];
        }
        best = std::max(best, trace_norm(sub));
    }
    return best;
}

} // namespace ctd
