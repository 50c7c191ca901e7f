#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace ctd {

using Cx = std::complex<double>;

// Orthogonal Hermitian operator basis of one local subsystem: the identity
// plus d^2-1 traceless generators G_m normalized as tr(G_m G_n) = 2 delta_mn.
// For d = 2 the generators are exactly the Pauli matrices X, Y, Z.
struct OperatorBasis {
    int dim = 0;
    Eigen::MatrixXcd identity;
    std::vector<Eigen::MatrixXcd> generators;
};

// Generalized Gell-Mann construction. Ordering is fixed and documented:
// first the symmetric pair generators E_jk + E_kj for j < k (lexicographic),
// then the antisymmetric ones -i E_jk + i E_kj, then the d-1 diagonal
// generators sqrt(2/(l(l+1))) (sum_{m<l} E_mm - l E_ll) for l = 1..d-1.
// Throws std::invalid_argument for d < 2.
OperatorBasis build_su_generators(int d);

} // namespace ctd
