#include "corrsim/quantum.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace corrsim::quantum {

namespace {

using Eigen::Index;

void require_hermitian(const Matrix& m, double tol, const char* who) {
    if (m.rows() != m.cols()) throw std::invalid_argument(std::string(who) + ": matrix not square");
    const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol) {
        std::ostringstream os;
        os << who << ": not Hermitian (max deviation " << dev << ")";
        throw std::invalid_argument(os.str());
    }
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace

DensityMatrix::DensityMatrix(int local_dim, Matrix entries) : d_(local_dim), m_(std::move(entries)) {
    if (d_ < 2) throw std::invalid_argument("DensityMatrix: local dimension must be >= 2");
    const Index dim = static_cast<Index>(d_) * d_;
    if (m_.rows() != dim || m_.cols() != dim)
        throw std::invalid_argument("DensityMatrix: entries must be d^2 x d^2");
    require_hermitian(m_, 1e-10, "DensityMatrix");
    const std::complex<double> tr = m_.trace();
    if (std::abs(tr - 1.0) > 1e-10)
        throw std::invalid_argument("DensityMatrix: trace must be 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond tolerance");
}

Matrix DensityMatrix::sqrt() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_);
    Eigen::VectorXd lam = es.eigenvalues();
    for (Index i = 0; i < lam.size(); ++i) lam(i) = std::sqrt(std::max(0.0, lam(i)));
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

Observable::Observable(Matrix entries) : m_(std::move(entries)) {
    require_hermitian(m_, 1e-10, "Observable");
    const Matrix sq = m_ * m_;
    const Matrix id = Matrix::Identity(m_.rows(), m_.cols());
    if ((sq - id).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument("Observable: eigenvalues must be +-1 (A^2 != I)");
}

double expectation(const DensityMatrix& rho, const Observable& A, const Observable& B) {
    if (A.dim() != rho.local_dim() || B.dim() != rho.local_dim())
        throw std::invalid_argument("expectation: dimension mismatch");
    const std::complex<double> tr = (kron(A.entries(), B.entries()) * rho.entries()).trace();
    if (std::abs(tr.imag()) > 1e-10)
        throw std::runtime_error("expectation: trace has a non-real residue");
    return tr.real();
}

ReducedVectors reduce_to_vectors(const DensityMatrix& rho, const Observable& A,
                                 const Observable& B) {
    if (A.dim() != rho.local_dim() || B.dim() != rho.local_dim())
        throw std::invalid_argument("reduce_to_vectors: dimension mismatch");
    const int d = rho.local_dim();
    const Index dim = static_cast<Index>(d) * d;
    const Matrix root = rho.sqrt();
    const Matrix id = Matrix::Identity(d, d);
    const Matrix X = kron(A.entries(), id) * root; // Alice's side
    const Matrix Y = kron(id, B.entries()) * root; // Bob's side

    // all d^4 entries row-major: (Re ..., Im ...) -> dimension 2 d^4
    const auto stack = [dim](const Matrix& M) {
        std::vector<double> v;
        v.reserve(static_cast<std::size_t>(2 * dim * dim));
        for (Index i = 0; i < dim; ++i)
            for (Index j = 0; j < dim; ++j) v.push_back(M(i, j).real());
        for (Index i = 0; i < dim; ++i)
            for (Index j = 0; j < dim; ++j) v.push_back(M(i, j).imag());
        return v;
    };
    const std::vector<double> ra = stack(X), rb = stack(Y);
    double na = 0.0, nb = 0.0;
    for (double v : ra) na += v * v;
    for (double v : rb) nb += v * v;
    UnitVector a(ra);
    UnitVector b(rb);
    const double expect = expectation(rho, A, B);
    return {std::move(a), std::move(b), expect, std::sqrt(na), std::sqrt(nb)};
}

ChshInstance chsh_instance() {
    Matrix z(2, 2), x(2, 2);
    z << 1, 0, 0, -1;
    x << 0, 1, 1, 0;
    const double s = 1.0 / std::sqrt(2.0);
    Matrix epr = Matrix::Zero(4, 4);
    // |phi+><phi+| with |phi+> = (|00> + |11>)/sqrt2
    Eigen::VectorXcd phi(4);
    phi << s, 0, 0, s;
    epr = phi * phi.adjoint();
    return ChshInstance{DensityMatrix(2, epr),
                        {Observable(z), Observable(x)},
                        {Observable(s * (z + x)), Observable(s * (z - x))}};
}

std::array<std::pair<UnitVector, UnitVector>, 4> chsh_vector_pairs() {
    const double s = 1.0 / std::sqrt(2.0);
    return {{{UnitVector({1, 0}), UnitVector({s, s})},
             {UnitVector({1, 0}), UnitVector({s, -s})},
             {UnitVector({0, 1}), UnitVector({s, s})},
             {UnitVector({0, 1}), UnitVector({s, -s})}}};
}

ChshGameResult chsh_game_value(const protocols::ProtocolConfig& cfg, std::int64_t trials,
                               std::uint64_t seed) {
    if (trials < 4) throw std::invalid_argument("chsh_game_value: need at least 4 trials");
    const auto pairs = chsh_vector_pairs();
    const std::int64_t per_input = trials / 4;
    double rate_sum = 0.0;
    double var_sum = 0.0;
    for (int input = 0; input < 4; ++input) {
        const bool and_one = input == 3; // inputs ordered (0,0),(0,1),(1,0),(1,1)
        const auto& [a, b] = pairs[static_cast<std::size_t>(input)];
        std::int64_t wins = 0;
        for (std::int64_t t = 0; t < per_input; ++t) {
            rng::TrialRng gen(seed + static_cast<std::uint64_t>(input),
                              static_cast<std::uint64_t>(t));
            const protocols::Transcript tr = protocols::run_protocol(cfg, a, b, gen);
            const bool same = tr.alpha == tr.beta;
            if (same != and_one) ++wins;
        }
        const double p = static_cast<double>(wins) / static_cast<double>(per_input);
        rate_sum += p;
        var_sum += p * (1.0 - p) / static_cast<double>(per_input);
    }
    return {rate_sum / 4.0, std::sqrt(var_sum) / 4.0, per_input * 4};
}

ChshGameResult chsh_always_same_output() {
    // outputs agree on every input; the AND is 0 on three of the four
    return {0.75, 0.0, 0};
}

DensityMatrix random_density(int local_dim, rng::TrialRng& gen) {
    const Index dim = static_cast<Index>(local_dim) * local_dim;
    Matrix x(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) x(i, j) = std::complex<double>(gen.gaussian(), gen.gaussian());
    Matrix m = x * x.adjoint();
    m /= m.trace();
    // symmetrize away the last rounding dust
    m = 0.5 * (m + m.adjoint());
    return DensityMatrix(local_dim, std::move(m));
}

Observable random_observable(int dim, rng::TrialRng& gen) {
    Matrix h(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) h(i, j) = std::complex<double>(gen.gaussian(), gen.gaussian());
    h = 0.5 * (h + h.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Eigen::VectorXd lam = es.eigenvalues();
    for (Index i = 0; i < lam.size(); ++i) lam(i) = lam(i) >= 0.0 ? 1.0 : -1.0;
    Matrix a = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    a = 0.5 * (a + a.adjoint()).eval();
    return Observable(std::move(a));
}

} // namespace corrsim::quantum
