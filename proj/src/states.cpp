#include "ctdetect/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ctd {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kPsdTol = -1e-9;
constexpr double kUnitTol = 1e-10;
constexpr double kNormTol = 1e-12;

Eigen::Index product_dim(const std::vector<int>& dims) {
    Eigen::Index total = 1;
    for (int d : dims) total *= d;
    return total;
}

void check_dims(const std::vector<int>& dims) {
    if (dims.empty()) throw std::invalid_argument("dims list is empty");
    for (int d : dims)
        if (d < 2) throw std::invalid_argument("every local dimension must be >= 2");
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

const Eigen::MatrixXcd& pauli(char op) {
    static const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(2, 2);
    static const Eigen::MatrixXcd X = (Eigen::MatrixXcd(2, 2) << 0, 1, 1, 0).finished();
    static const Eigen::MatrixXcd Y =
        (Eigen::MatrixXcd(2, 2) << Cx(0, 0), Cx(0, -1), Cx(0, 1), Cx(0, 0)).finished();
    static const Eigen::MatrixXcd Z = (Eigen::MatrixXcd(2, 2) << 1, 0, 0, -1).finished();
    switch (op) {
        case 'I': return I;
        case 'X': return X;
        case 'Y': return Y;
        case 'Z': return Z;
        default: throw std::invalid_argument("unknown Pauli label in term");
    }
}

std::mt19937_64 seeded_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

Eigen::VectorXcd gaussian_vector(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = Cx(nd(rng), nd(rng));
    return v;
}

PureState haar_pure(const std::vector<int>& dims, std::mt19937_64& rng) {
    PureState psi;
    psi.dims = dims;
    psi.amplitudes = gaussian_vector(product_dim(dims), rng);
    psi.amplitudes /= psi.amplitudes.norm();
    return psi;
}

Eigen::MatrixXcd haar_unitary(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXcd g(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = Cx(nd(rng), nd(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < d; ++c) {
        Cx phase = r(c, c) / std::abs(r(c, c));
        q.col(c) *= phase;
    }
    return q;
}

// Amplitudes of psiA on parties in maskA (bit j-1 = party j) times psiB on
// the rest, written back into the full party ordering.
PureState interleave_product(const std::vector<int>& dims, unsigned maskA,
                             const Eigen::VectorXcd& ampA, const Eigen::VectorXcd& ampB) {
    const int n = static_cast<int>(dims.size());
    PureState psi;
    psi.dims = dims;
    psi.amplitudes.resize(product_dim(dims));
    std::vector<int> idx(n, 0);
    for (Eigen::Index full = 0; full < psi.amplitudes.size(); ++full) {
        Eigen::Index rest = full;
        for (int j = n - 1; j >= 0; --j) {
            idx[j] = static_cast<int>(rest % dims[j]);
            rest /= dims[j];
        }
        Eigen::Index ia = 0, ib = 0;
        for (int j = 0; j < n; ++j) {
            if (maskA & (1u << j))
                ia = ia * dims[j] + idx[j];
            else
                ib = ib * dims[j] + idx[j];
        }
        psi.amplitudes[full] = ampA[ia] * ampB[ib];
    }
    return psi;
}

DensityMatrix mixture(const std::vector<int>& dims,
                      const std::vector<PureState>& terms,
                      const std::vector<double>& weights) {
    DensityMatrix rho;
    rho.dims = dims;
    const Eigen::Index total = product_dim(dims);
    rho.matrix = Eigen::MatrixXcd::Zero(total, total);
    for (std::size_t t = 0; t < terms.size(); ++t)
        rho.matrix += weights[t] * (terms[t].amplitudes * terms[t].amplitudes.adjoint());
    rho.validate();
    return rho;
}

std::vector<double> random_weights(int count, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ud(0.05, 1.0);
    std::vector<double> w(count);
    double sum = 0.0;
    for (double& x : w) {
        x = ud(rng);
        sum += x;
    }
    for (double& x : w) x /= sum;
    return w;
}

} // namespace

Eigen::Index DensityMatrix::total_dim() const { return product_dim(dims); }

void DensityMatrix::validate() const {
    check_dims(dims);
    const Eigen::Index total = product_dim(dims);
    if (matrix.rows() != total || matrix.cols() != total)
        throw std::invalid_argument("density matrix size does not match dims");
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(matrix.trace() - Cx(1.0, 0.0)) > kTraceTol)
        throw std::invalid_argument("density matrix trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kPsdTol)
        throw std::invalid_argument("density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    psi.validate();
    DensityMatrix rho;
    rho.dims = psi.dims;
    rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
    return rho;
}

void PureState::validate() const {
    check_dims(dims);
    if (amplitudes.size() != product_dim(dims))
        throw std::invalid_argument("state vector size does not match dims");
    if (std::abs(amplitudes.norm() - 1.0) > kNormTol)
        throw std::invalid_argument("state vector is not normalized");
}

DensityMatrix PureState::to_density() const { return DensityMatrix::from_pure(*this); }

Eigen::MatrixXcd PauliStringHamiltonian::matrix() const {
    if (n < 1) throw std::invalid_argument("hamiltonian needs at least one site");
    const Eigen::Index total = Eigen::Index(1) << n;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(total, total);
    for (const PauliTerm& term : terms) {
        if (static_cast<int>(term.ops.size()) != n)
            throw std::invalid_argument("Pauli string length does not match site count");
        Eigen::MatrixXcd acc = pauli(term.ops[0]);
        for (int j = 1; j < n; ++j) acc = kron(acc, pauli(term.ops[j]));
        h += term.coefficient * acc;
    }
    return h;
}

PureState ghz_state(int d, int n_parties) {
    if (d < 2) throw std::invalid_argument("ghz_state: d must be >= 2");
    if (n_parties < 2) throw std::invalid_argument("ghz_state: need at least 2 parties");
    PureState psi;
    psi.dims.assign(n_parties, d);
    const Eigen::Index total = product_dim(psi.dims);
    psi.amplitudes = Eigen::VectorXcd::Zero(total);
    const double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) {
        Eigen::Index idx = 0;
        for (int j = 0; j < n_parties; ++j) idx = idx * d + i;
        psi.amplitudes[idx] = a;
    }
    return psi;
}

PureState w_state(int d) {
    if (d < 2) throw std::invalid_argument("w_state: d must be >= 2");
    PureState psi;
    psi.dims.assign(3, d);
    psi.amplitudes = Eigen::VectorXcd::Zero(product_dim(psi.dims));
    const double a = 1.0 / std::sqrt(3.0 * (d - 1));
    auto idx = [d](int i, int j, int k) { return (Eigen::Index(i) * d + j) * d + k; };
    for (int i = 0; i + 1 < d; ++i) {
        psi.amplitudes[idx(i, i, i + 1)] += a;
        psi.amplitudes[idx(i, i + 1, i)] += a;
        psi.amplitudes[idx(i + 1, i, i)] += a;
    }
    return psi;
}

PureState dicke_state(int n, int k_excitations) {
    if (n < 2) throw std::invalid_argument("dicke_state: need at least 2 qubits");
    if (k_excitations < 0 || k_excitations > n)
        throw std::invalid_argument("dicke_state: excitation count out of range");
    PureState psi;
    psi.dims.assign(n, 2);
    const Eigen::Index total = Eigen::Index(1) << n;
    psi.amplitudes = Eigen::VectorXcd::Zero(total);
    Eigen::Index count = 0;
    for (Eigen::Index b = 0; b < total; ++b)
        if (std::popcount(static_cast<unsigned long long>(b)) == k_excitations) ++count;
    const double a = 1.0 / std::sqrt(static_cast<double>(count));
    for (Eigen::Index b = 0; b < total; ++b)
        if (std::popcount(static_cast<unsigned long long>(b)) == k_excitations)
            psi.amplitudes[b] = a;
    return psi;
}

DensityMatrix white_noise_mix(const PureState& psi, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("white_noise_mix: p must lie in [0, 1]");
    psi.validate();
    DensityMatrix rho;
    rho.dims = psi.dims;
    const Eigen::Index total = product_dim(psi.dims);
    rho.matrix = (p / static_cast<double>(total)) * Eigen::MatrixXcd::Identity(total, total) +
                 (1.0 - p) * (psi.amplitudes * psi.amplitudes.adjoint());
    return rho;
}

DensityMatrix figure1_family(double alpha, double beta, int d) {
    if (d < 2) throw std::invalid_argument("figure1_family: d must be >= 2");
    if (alpha < 0.0 || beta < 0.0 || alpha + beta > 1.0 + 1e-12)
        throw std::invalid_argument("figure1_family: (alpha, beta) outside the simplex");
    const double gamma = std::max(0.0, 1.0 - alpha - beta);
    const PureState ghz = ghz_state(d, 3);
    const PureState w = w_state(d);
    DensityMatrix rho;
    rho.dims.assign(3, d);
    const Eigen::Index total = product_dim(rho.dims);
    rho.matrix = alpha * (ghz.amplitudes * ghz.amplitudes.adjoint()) +
                 beta * (w.amplitudes * w.amplitudes.adjoint());
    auto idx = [d](int i, int j, int k) { return (Eigen::Index(i) * d + j) * d + k; };
    const double nw = gamma / (2.0 * (d - 1));
    for (int i = 0; i + 1 < d; ++i) {
        rho.matrix(idx(i, i, i + 1), idx(i, i, i + 1)) += nw;
        rho.matrix(idx(i + 1, i + 1, i), idx(i + 1, i + 1, i)) += nw;
    }
    (void)total;
    rho.validate();
    return rho;
}

DensityMatrix figure3_family(double alpha, double beta) {
    if (alpha < 0.0 || beta < 0.0 || alpha + beta > 1.0 + 1e-12)
        throw std::invalid_argument("figure3_family: (alpha, beta) outside the simplex");
    const double gamma = std::max(0.0, 1.0 - alpha - beta);
    const PureState ghz = ghz_state(2, 4);
    const PureState dicke = dicke_state(4, 2);
    DensityMatrix rho;
    rho.dims.assign(4, 2);
    rho.matrix = alpha * (ghz.amplitudes * ghz.amplitudes.adjoint()) +
                 beta * (dicke.amplitudes * dicke.amplitudes.adjoint()) +
                 (gamma / 16.0) * Eigen::MatrixXcd::Identity(16, 16);
    rho.validate();
    return rho;
}

PauliStringHamiltonian hamiltonian_h1(int n, double h) {
    if (n < 3) throw std::invalid_argument("hamiltonian_h1: need at least 3 sites");
    PauliStringHamiltonian ham;
    ham.n = n;
    ham.field_strength = h;
    for (int j = 0; j < n; ++j) {
        std::string zxz(n, 'I');
        zxz[(j + n - 1) % n] = 'Z';
        zxz[j] = 'X';
        zxz[(j + 1) % n] = 'Z';
        ham.terms.push_back({-1.0, zxz});
        if (h != 0.0) {
            std::string x(n, 'I');
            x[j] = 'X';
            ham.terms.push_back({h, x});
        }
    }
    return ham;
}

PauliStringHamiltonian hamiltonian_h2(int n, double h) {
    if (n < 3) throw std::invalid_argument("hamiltonian_h2: need at least 3 sites");
    PauliStringHamiltonian ham;
    ham.n = n;
    ham.field_strength = h;
    for (int j = 0; j < n; ++j) {
        for (char middle : {'X', 'Y', 'Z'}) {
            std::string s(n, 'I');
            s[(j + n - 1) % n] = 'Z';
            s[j] = middle;
            s[(j + 1) % n] = 'Z';
            ham.terms.push_back({-1.0, s});
        }
        if (h != 0.0) {
            std::string x(n, 'I');
            x[j] = 'X';
            ham.terms.push_back({h, x});
        }
    }
    return ham;
}

DensityMatrix thermal_state(const PauliStringHamiltonian& ham, double kT) {
    if (!(kT > 0.0)) throw std::invalid_argument("thermal_state: kT must be positive");
    const Eigen::MatrixXcd h = ham.matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXd energies = es.eigenvalues();
    const double e0 = energies.minCoeff();
    Eigen::VectorXd weights = (-(energies.array() - e0) / kT).exp();
    weights /= weights.sum();
    DensityMatrix rho;
    rho.dims.assign(ham.n, 2);
    rho.matrix = es.eigenvectors() * weights.asDiagonal().toDenseMatrix().cast<Cx>() *
                 es.eigenvectors().adjoint();
    rho.validate();
    return rho;
}

DensityMatrix apply_local_unitaries(const DensityMatrix& rho,
                                    const std::vector<Eigen::MatrixXcd>& locals) {
    if (locals.size() != rho.dims.size())
        throw std::invalid_argument("apply_local_unitaries: one factor per party required");
    for (std::size_t j = 0; j < locals.size(); ++j) {
        const Eigen::MatrixXcd& u = locals[j];
        if (u.rows() != rho.dims[j] || u.cols() != rho.dims[j])
            throw std::invalid_argument("apply_local_unitaries: factor size does not match party dimension");
        if ((u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() > kUnitTol)
            throw std::invalid_argument("apply_local_unitaries: factor is not unitary");
    }
    Eigen::MatrixXcd u = locals[0];
    for (std::size_t j = 1; j < locals.size(); ++j) u = kron(u, locals[j]);
    DensityMatrix out;
    out.dims = rho.dims;
    out.matrix = u * rho.matrix * u.adjoint();
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    const int n = rho.n_parties();
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep list is empty");
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] < 1 || keep[i] > n)
            throw std::invalid_argument("partial_trace: party label out of range");
        if (i > 0 && keep[i] <= keep[i - 1])
            throw std::invalid_argument("partial_trace: keep list must be strictly increasing");
    }

    std::vector<bool> kept(n, false);
    for (int p : keep) kept[p - 1] = true;

    std::vector<int> keep_dims, trace_dims;
    for (int j = 0; j < n; ++j) (kept[j] ? keep_dims : trace_dims).push_back(rho.dims[j]);
    const Eigen::Index dk = product_dim(keep_dims);
    const Eigen::Index dt = trace_dims.empty() ? 1 : product_dim(trace_dims);

    // full linear index from the (kept, traced) pair, party 1 slowest
    std::vector<Eigen::Index> full_index(static_cast<std::size_t>(dk) * dt);
    std::vector<int> idx(n, 0);
    for (Eigen::Index ik = 0; ik < dk; ++ik) {
        for (Eigen::Index it = 0; it < dt; ++it) {
            Eigen::Index rk = ik, rt = it;
            for (int j = n - 1; j >= 0; --j) {
                if (kept[j]) {
                    idx[j] = static_cast<int>(rk % rho.dims[j]);
                    rk /= rho.dims[j];
                } else {
                    idx[j] = static_cast<int>(rt % rho.dims[j]);
                    rt /= rho.dims[j];
                }
            }
            Eigen::Index full = 0;
            for (int j = 0; j < n; ++j) full = full * rho.dims[j] + idx[j];
            full_index[static_cast<std::size_t>(ik) * dt + it] = full;
        }
    }

    DensityMatrix out;
    out.dims = keep_dims;
    out.matrix = Eigen::MatrixXcd::Zero(dk, dk);
    for (Eigen::Index r = 0; r < dk; ++r)
        for (Eigen::Index c = 0; c < dk; ++c) {
            Cx acc(0.0, 0.0);
            for (Eigen::Index t = 0; t < dt; ++t)
                acc += rho.matrix(full_index[static_cast<std::size_t>(r) * dt + t],
                                  full_index[static_cast<std::size_t>(c) * dt + t]);
            out.matrix(r, c) = acc;
        }
    return out;
}

PureState random_pure_state(const std::vector<int>& dims, std::uint64_t seed) {
    check_dims(dims);
    auto rng = seeded_engine(seed);
    return haar_pure(dims, rng);
}

PureState random_product_pure(const std::vector<int>& dims, std::uint64_t seed) {
    check_dims(dims);
    auto rng = seeded_engine(seed);
    Eigen::VectorXcd amp = gaussian_vector(dims[0], rng);
    amp /= amp.norm();
    for (std::size_t j = 1; j < dims.size(); ++j) {
        Eigen::VectorXcd local = gaussian_vector(dims[j], rng);
        local /= local.norm();
        Eigen::VectorXcd next(amp.size() * dims[j]);
        for (Eigen::Index a = 0; a < amp.size(); ++a)
            for (int b = 0; b < dims[j]; ++b) next[a * dims[j] + b] = amp[a] * local[b];
        amp = std::move(next);
    }
    PureState psi;
    psi.dims = dims;
    psi.amplitudes = std::move(amp);
    return psi;
}

DensityMatrix random_biseparable_mixture(const std::vector<int>& dims, int term_count,
                                         std::uint64_t seed) {
    check_dims(dims);
    const int n = static_cast<int>(dims.size());
    if (n < 2) throw std::invalid_argument("biseparable mixture needs at least 2 parties");
    if (term_count < 1) throw std::invalid_argument("term count must be positive");
    auto rng = seeded_engine(seed);
    std::uniform_int_distribution<unsigned> mask_dist(1u, (1u << n) - 2u);

    std::vector<PureState> terms;
    for (int t = 0; t < term_count; ++t) {
        const unsigned mask = mask_dist(rng);
        std::vector<int> dimsA, dimsB;
        for (int j = 0; j < n; ++j) (mask & (1u << j) ? dimsA : dimsB).push_back(dims[j]);
        const Eigen::VectorXcd a = haar_pure(dimsA, rng).amplitudes;
        const Eigen::VectorXcd b = haar_pure(dimsB, rng).amplitudes;
        terms.push_back(interleave_product(dims, mask, a, b));
    }
    return mixture(dims, terms, random_weights(term_count, rng));
}

DensityMatrix random_fully_separable_mixture(const std::vector<int>& dims, int term_count,
                                             std::uint64_t seed) {
    check_dims(dims);
    if (term_count < 1) throw std::invalid_argument("term count must be positive");
    auto rng = seeded_engine(seed);
    std::vector<PureState> terms;
    for (int t = 0; t < term_count; ++t) {
        std::uint64_t sub = rng();
        terms.push_back(random_product_pure(dims, sub));
    }
    return mixture(dims, terms, random_weights(term_count, rng));
}

DensityMatrix random_mixed_state(const std::vector<int>& dims, int term_count,
                                 std::uint64_t seed) {
    check_dims(dims);
    if (term_count < 1) throw std::invalid_argument("term count must be positive");
    auto rng = seeded_engine(seed);
    std::vector<PureState> terms;
    for (int t = 0; t < term_count; ++t) terms.push_back(haar_pure(dims, rng));
    return mixture(dims, terms, random_weights(term_count, rng));
}

std::vector<Eigen::MatrixXcd> random_local_unitaries(const std::vector<int>& dims,
                                                     std::uint64_t seed) {
    check_dims(dims);
    auto rng = seeded_engine(seed);
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(dims.size());
    for (int d : dims) out.push_back(haar_unitary(d, rng));
    return out;
}

} // namespace ctd
