#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ctdetect/states.hpp"

namespace ctd {

// Real tensor of expectation values of tensor products of local basis
// generators. `parties` carries the 1-based labels the indices refer to;
// index j runs over 1..d_j^2-1 (stored 0-based). Storage is dense row-major
// with the first listed party slowest.
struct CorrelationTensor {
    std::vector<int> parties;
    std::vector<int> index_dims;
    Eigen::VectorXd values;

    int order() const { return static_cast<int>(index_dims.size()); }
    Eigen::Index size() const { return values.size(); }

    Eigen::Index offset_of(const std::vector<int>& idx0) const;
    double at(const std::vector<int>& idx0) const { return values[offset_of(idx0)]; }
};

// The "underlined" index positions that become matrix rows. Positions are
// 1-based into the tensor's index list, strictly increasing, and must form a
// nonempty proper subset. Rows (and columns) are flattened lexicographically
// with the lower position slowest.
struct MatricizationSpec {
    std::vector<int> row_positions;

    void validate(int tensor_order) const; // throws std::invalid_argument
};

// Full correlation tensor: every index runs over the non-identity generators
// of its party. Entries are real to 1e-10 by Hermiticity; the imaginary
// residue is checked and dropped.
CorrelationTensor full_correlation_tensor(const DensityMatrix& rho);

// Expectation values over the complete local basis including the identity
// (index 0), so index j runs over 0..d_j^2-1. Entry (0,...,0) equals tr(rho).
CorrelationTensor bloch_tensor(const DensityMatrix& rho);

// m-body tensor of the reduced state on `parties` (1-based, increasing).
CorrelationTensor m_body_tensor(const DensityMatrix& rho, const std::vector<int>& parties);

// Tensor outer product; party label sets must be disjoint.
CorrelationTensor outer_product(const CorrelationTensor& a, const CorrelationTensor& b);

// Reshape into a (prod row dims) x (prod col dims) matrix.
Eigen::MatrixXd matricize(const CorrelationTensor& t, const MatricizationSpec& spec);

// All indices to the row side: the plain column vector of entries.
Eigen::VectorXd vectorize(const CorrelationTensor& t);

// True iff the Bloch tensor of |psi> factors into the outer product of the
// marginal tensors on A and its complement, every index block compared in a
// single pass (identity slots included). For pure states this is exactly
// separability across that cut.
bool check_pure_factorization(const PureState& psi, const std::vector<int>& partition_a,
                              double tol = 1e-8);

} // namespace ctd
