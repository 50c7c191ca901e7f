#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ctdetect/correlation.hpp"

namespace ctd {

// Singular values in nonincreasing order.
struct SingularSpectrum {
    std::vector<double> values;

    double sum_top(int k) const; // clamps k to the spectrum length
    double sum() const;
};

// A partially known matrix: only the listed entries were measured.
struct PartialEntry {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

struct PartialMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<PartialEntry> entries;

    void validate() const; // in-range indices, no duplicates, at least one entry
};

// Euclidean norm of all tensor entries. Equals the Frobenius norm of any
// matricization and is multiplicative under outer products.
double standard_norm(const CorrelationTensor& t);

SingularSpectrum singular_values(const Eigen::MatrixXd& m);

// Sum of the k largest singular values. k < 1 throws; k beyond the spectrum
// is clamped with a warning on stderr and then equals the trace norm.
double ky_fan_norm(const Eigen::MatrixXd& m, int k);

double trace_norm(const Eigen::MatrixXd& m);
double frobenius_norm(const Eigen::MatrixXd& m);

// Certified lower bound on the trace norm from the known entries alone:
// the best of (a) sum of |a_ii| over known diagonal entries, (b) the trace
// norm of any fully known submatrix found by a greedy row/column search,
// (c) the Frobenius norm of the known entries. Never exceeds the true norm.
double trace_norm_lower_bound(const PartialMatrix& pm);

} // namespace ctd
