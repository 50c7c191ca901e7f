#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ctdetect/operator_basis.hpp"

namespace ctd {

struct PureState;

// Mixed state of an n-party system with local dimensions dims[j] >= 2.
// The matrix acts on the tensor-product space with party 1 as the slowest
// (most significant) index, matching the usual Kronecker-product layout.
struct DensityMatrix {
    Eigen::MatrixXcd matrix;
    std::vector<int> dims;

    int n_parties() const { return static_cast<int>(dims.size()); }
    Eigen::Index total_dim() const;

    // Throws std::invalid_argument unless Hermitian (1e-10), unit trace
    // (1e-10), positive semidefinite (min eigenvalue >= -1e-9) and the
    // matrix size matches the product of dims.
    void validate() const;

    static DensityMatrix from_pure(const PureState& psi);
};

struct PureState {
    Eigen::VectorXcd amplitudes;
    std::vector<int> dims;

    int n_parties() const { return static_cast<int>(dims.size()); }
    void validate() const; // unit norm to 1e-12, size matches dims
    DensityMatrix to_density() const;
};

// One product-of-Paulis term of a qubit Hamiltonian, e.g. ops = "ZXZI".
struct PauliTerm {
    double coefficient = 0.0;
    std::string ops;
};

struct PauliStringHamiltonian {
    int n = 0;
    std::vector<PauliTerm> terms;
    double field_strength = 0.0;

    Eigen::MatrixXcd matrix() const; // dense 2^n x 2^n, Hermitian
};

// |GHZ_d^n> = 1/sqrt(d) sum_i |i...i>, n parties of dimension d.
PureState ghz_state(int d, int n_parties);

// Tripartite qudit W-type state: 1/sqrt(3(d-1)) sum_{i<d-1}
// (|i,i,i+1> + |i,i+1,i> + |i+1,i,i>). For d = 2 this is the usual W state.
PureState w_state(int d);

// n-qubit Dicke state with k excitations (equal superposition of all
// computational states of Hamming weight k).
PureState dicke_state(int n, int k_excitations);

// p * I/D + (1-p) |psi><psi|, the white-noise mixture. 0 <= p <= 1.
DensityMatrix white_noise_mix(const PureState& psi, double p);

// Three-qudit interpolation alpha*GHZ + beta*W + (1-alpha-beta)*N where N
// mixes the 2(d-1) projectors |i,i,i+1><...| and |i+1,i+1,i><...| for
// i = 0..d-2 with equal weight. Requires alpha, beta >= 0, alpha+beta <= 1.
DensityMatrix figure1_family(double alpha, double beta, int d);

// Four-qubit interpolation alpha*GHZ4 + beta*D(4,2) + (1-alpha-beta)*I/16.
DensityMatrix figure3_family(double alpha, double beta);

// Periodic cluster-type chain: sum_j (-Z_{j-1} X_j Z_{j+1} + h X_j).
PauliStringHamiltonian hamiltonian_h1(int n, double h);

// Same geometry with -Z_{j-1}(X_j + Y_j + Z_j)Z_{j+1} + h X_j per site.
PauliStringHamiltonian hamiltonian_h2(int n, double h);

// exp(-H/kT)/Z via eigendecomposition; kT > 0. The smallest eigenvalue is
// shifted out before exponentiating, so kT -> 0 stays finite.
DensityMatrix thermal_state(const PauliStringHamiltonian& ham, double kT);

// (U_1 x ... x U_n) rho (...)^dagger. Each factor must be unitary (1e-10)
// and match the local dimension; anything else throws. A nonlocal gate
// cannot be expressed here by construction.
DensityMatrix apply_local_unitaries(const DensityMatrix& rho,
                                    const std::vector<Eigen::MatrixXcd>& locals);

// Reduced state on the listed parties (1-based labels, strictly increasing).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Haar-random global pure state.
PureState random_pure_state(const std::vector<int>& dims, std::uint64_t seed);

// Tensor product of independent Haar-random local pure states.
PureState random_product_pure(const std::vector<int>& dims, std::uint64_t seed);

// Convex mixture of `term_count` pure states, each a product across a
// randomly chosen bipartition (possibly different per term). Never GME.
DensityMatrix random_biseparable_mixture(const std::vector<int>& dims,
                                         int term_count, std::uint64_t seed);

// Convex mixture of `term_count` fully product pure states.
DensityMatrix random_fully_separable_mixture(const std::vector<int>& dims,
                                             int term_count, std::uint64_t seed);

// Generic mixed state: weighted mixture of Haar-random pure states.
DensityMatrix random_mixed_state(const std::vector<int>& dims, int term_count,
                                 std::uint64_t seed);

// One Haar-random unitary per party.
std::vector<Eigen::MatrixXcd> random_local_unitaries(const std::vector<int>& dims,
                                                     std::uint64_t seed);

} // namespace ctd
