#include "ctdetect/operator_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace ctd {

namespace {

Eigen::MatrixXcd unit_matrix(int d, int j, int k) {
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(d, d);
    e(j, k) = Cx(1.0, 0.0);
    return e;
}

} // namespace

OperatorBasis build_su_generators(int d) {
    if (d < 2) throw std::invalid_argument("operator basis needs local dimension >= 2");

    OperatorBasis basis;
    basis.dim = d;
    basis.identity = Eigen::MatrixXcd::Identity(d, d);
    basis.generators.reserve(static_cast<std::size_t>(d) * d - 1);

    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k)
            basis.generators.push_back(unit_matrix(d, j, k) + unit_matrix(d, k, j));

    const Cx i_unit(0.0, 1.0);
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k)
            basis.generators.push_back(-i_unit * unit_matrix(d, j, k) + i_unit * unit_matrix(d, k, j));

    for (int l = 1; l < d; ++l) {
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
        for (int m = 0; m < l; ++m) g(m, m) = Cx(1.0, 0.0);
        g(l, l) = Cx(-static_cast<double>(l), 0.0);
        g *= std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
        basis.generators.push_back(g);
    }

    return basis;
}

} // namespace ctd
