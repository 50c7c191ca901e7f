#include "ctdetect/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctdetect/operator_basis.hpp"

namespace ctd {

namespace {

constexpr double kImagTol = 1e-10;

// tr over the first (slowest) subsystem of (op x I) * block.
Eigen::MatrixXcd contract_first(const Eigen::MatrixXcd& block, int d0,
                                const Eigen::MatrixXcd& op) {
    const Eigen::Index rest = block.rows() / d0;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rest, rest);
    for (int a = 0; a < d0; ++a)
        for (int b = 0; b < d0; ++b) {
            const Cx g = op(b, a);
            if (g != Cx(0.0, 0.0)) out += g * block.block(a * rest, b * rest, rest, rest);
        }
    return out;
}

CorrelationTensor contract_all(const DensityMatrix& rho, bool include_identity) {
    rho.validate();
    const int n = rho.n_parties();

    CorrelationTensor t;
    t.parties.resize(n);
    t.index_dims.resize(n);
    for (int j = 0; j < n; ++j) {
        t.parties[j] = j + 1;
        t.index_dims[j] = rho.dims[j] * rho.dims[j] - (include_identity ? 0 : 1);
    }

    std::vector<Eigen::MatrixXcd> blocks{rho.matrix};
    for (int j = 0; j < n; ++j) {
        const OperatorBasis basis = build_su_generators(rho.dims[j]);
        std::vector<Eigen::MatrixXcd> next;
        next.reserve(blocks.size() * t.index_dims[j]);
        for (const Eigen::MatrixXcd& block : blocks) {
            if (include_identity) next.push_back(contract_first(block, rho.dims[j], basis.identity));
            for (const Eigen::MatrixXcd& g : basis.generators)
                next.push_back(contract_first(block, rho.dims[j], g));
        }
        blocks = std::move(next);
    }

    t.values.resize(static_cast<Eigen::Index>(blocks.size()));
    double max_imag = 0.0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Cx v = blocks[i](0, 0);
        max_imag = std::max(max_imag, std::abs(v.imag()));
        t.values[static_cast<Eigen::Index>(i)] = v.real();
    }
    if (max_imag > kImagTol)
        throw std::invalid_argument("correlation tensor has a non-real entry; input not Hermitian?");
    return t;
}

} // namespace

Eigen::Index CorrelationTensor::offset_of(const std::vector<int>& idx0) const {
    if (static_cast<int>(idx0.size()) != order())
        throw std::invalid_argument("tensor index count does not match order");
    Eigen::Index off = 0;
    for (int j = 0; j < order(); ++j) {
        if (idx0[j] < 0 || idx0[j] >= index_dims[j])
            throw std::invalid_argument("tensor index out of range");
        off = off * index_dims[j] + idx0[j];
    }
    return off;
}

void MatricizationSpec::validate(int tensor_order) const {
    if (row_positions.empty())
        throw std::invalid_argument("matricization needs at least one row index");
    if (static_cast<int>(row_positions.size()) >= tensor_order)
        throw std::invalid_argument("matricization row set must be a proper subset of the indices");
    for (std::size_t i = 0; i < row_positions.size(); ++i) {
        if (row_positions[i] < 1 || row_positions[i] > tensor_order)
            throw std::invalid_argument("matricization row position out of range");
        if (i > 0 && row_positions[i] <= row_positions[i - 1])
            throw std::invalid_argument("matricization row positions must be strictly increasing");
    }
}

CorrelationTensor full_correlation_tensor(const DensityMatrix& rho) {
    return contract_all(rho, false);
}

CorrelationTensor bloch_tensor(const DensityMatrix& rho) { return contract_all(rho, true); }

CorrelationTensor m_body_tensor(const DensityMatrix& rho, const std::vector<int>& parties) {
    CorrelationTensor t = full_correlation_tensor(partial_trace(rho, parties));
    t.parties = parties;
    return t;
}

CorrelationTensor outer_product(const CorrelationTensor& a, const CorrelationTensor& b) {
    for (int pa : a.parties)
        for (int pb : b.parties)
            if (pa == pb) throw std::invalid_argument("outer_product: party label appears on both sides");
    CorrelationTensor t;
    t.parties = a.parties;
    t.parties.insert(t.parties.end(), b.parties.begin(), b.parties.end());
    t.index_dims = a.index_dims;
    t.index_dims.insert(t.index_dims.end(), b.index_dims.begin(), b.index_dims.end());
    t.values.resize(a.values.size() * b.values.size());
    for (Eigen::Index i = 0; i < a.values.size(); ++i)
        t.values.segment(i * b.values.size(), b.values.size()) = a.values[i] * b.values;
    return t;
}

Eigen::MatrixXd matricize(const CorrelationTensor& t, const MatricizationSpec& spec) {
    spec.validate(t.order());
    const int n = t.order();
    std::vector<bool> is_row(n, false);
    for (int pos : spec.row_positions) is_row[pos - 1] = true;

    Eigen::Index rows = 1, cols = 1;
    for (int j = 0; j < n; ++j) (is_row[j] ? rows : cols) *= t.index_dims[j];

    Eigen::MatrixXd m(rows, cols);
    std::vector<int> idx(n, 0);
    for (Eigen::Index off = 0; off < t.values.size(); ++off) {
        Eigen::Index rest = off;
        for (int j = n - 1; j >= 0; --j) {
            idx[j] = static_cast<int>(rest % t.index_dims[j]);
            rest /= t.index_dims[j];
        }
        Eigen::Index r = 0, c = 0;
        for (int j = 0; j < n; ++j) {
            if (is_row[j])
                r = r * t.index_dims[j] + idx[j];
            else
                c = c * t.index_dims[j] + idx[j];
        }
        m(r, c) = t.values[off];
    }
    return m;
}

Eigen::VectorXd vectorize(const CorrelationTensor& t) { return t.values; }

bool check_pure_factorization(const PureState& psi, const std::vector<int>& partition_a,
                              double tol) {
    psi.validate();
    const int n = psi.n_parties();
    if (partition_a.empty() || static_cast<int>(partition_a.size()) >= n)
        throw std::invalid_argument("partition must be a nonempty proper subset of the parties");
    for (std::size_t i = 0; i < partition_a.size(); ++i) {
        if (partition_a[i] < 1 || partition_a[i] > n)
            throw std::invalid_argument("partition party label out of range");
        if (i > 0 && partition_a[i] <= partition_a[i - 1])
            throw std::invalid_argument("partition labels must be strictly increasing");
    }

    std::vector<bool> in_a(n, false);
    for (int p : partition_a) in_a[p - 1] = true;
    std::vector<int> partition_b;
    for (int j = 0; j < n; ++j)
        if (!in_a[j]) partition_b.push_back(j + 1);

    const DensityMatrix rho = psi.to_density();
    const CorrelationTensor full = bloch_tensor(rho);
    const CorrelationTensor ta = bloch_tensor(partial_trace(rho, partition_a));
    const CorrelationTensor tb = bloch_tensor(partial_trace(rho, partition_b));

    // walk the full tensor once; each entry splits into an (A, complement) pair
    std::vector<int> idx(n, 0);
    double err2 = 0.0;
    for (Eigen::Index off = 0; off < full.values.size(); ++off) {
        Eigen::Index rest = off;
        for (int j = n - 1; j >= 0; --j) {
            idx[j] = static_cast<int>(rest % full.index_dims[j]);
            rest /= full.index_dims[j];
        }
        Eigen::Index ia = 0, ib = 0;
        for (int j = 0; j < n; ++j) {
            if (in_a[j])
                ia = ia * full.index_dims[j] + idx[j];
            else
                ib = ib * full.index_dims[j] + idx[j];
        }
        const double diff = full.values[off] - ta.values[ia] * tb.values[ib];
        err2 += diff * diff;
    }
    return std::sqrt(err2) <= tol;
}

} // namespace ctd
