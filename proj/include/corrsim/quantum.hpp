#ifndef CORRSIM_QUANTUM_HPP
#define CORRSIM_QUANTUM_HPP

#include "corrsim/protocols.hpp"
#include "corrsim/stats.hpp"
#include "corrsim/unit_vector.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>

namespace corrsim::quantum {

using Matrix = Eigen::MatrixXcd;

/// Bipartite state on C^d (x) C^d: a d^2 x d^2 PSD matrix with unit trace.
/// Hermiticity to 1e-10 and trace to 1e-10 are enforced; eigenvalues in
/// [-1e-10, 0) are treated as rounding and clamped, anything lower rejected.
class DensityMatrix {
  public:
    DensityMatrix(int local_dim, Matrix entries);
    int local_dim() const { return d_; }
    const Matrix& entries() const { return m_; }
    /// PSD square root via the Hermitian eigendecomposition.
    Matrix sqrt() const;

  private:
    int d_;
    Matrix m_;
};

/// d x d Hermitian observable with +-1 eigenvalues (A^2 = I to 1e-8).
class Observable {
  public:
    explicit Observable(Matrix entries);
    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& entries() const { return m_; }

  private:
    Matrix m_;
};

/// Tr(A (x) B . rho); the imaginary residue must be below 1e-10.
double expectation(const DensityMatrix& rho, const Observable& A, const Observable& B);

/// The reduction output: unit vectors of dimension 2 d^4 whose inner product
/// equals the quantum expectation value.
struct ReducedVectors {
    UnitVector a;
    UnitVector b;
    double source_expectation;
    double raw_norm_a; // Frobenius norms before the unit-vector wrap
    double raw_norm_b;
};

/// Stacks real and imaginary parts of the entries of (A (x) 1) sqrt(rho) and
/// (1 (x) B) sqrt(rho) into unit vectors a, b with <a,b> = Tr(A (x) B rho).
ReducedVectors reduce_to_vectors(const DensityMatrix& rho, const Observable& A,
                                 const Observable& B);

/// The standard CHSH instance: EPR pair with A0 = Z, A1 = X,
/// B0 = (Z+X)/sqrt2, B1 = (Z-X)/sqrt2, so that <A_i (x) B_j> is -1/sqrt2
/// for i=j=1 and +1/sqrt2 otherwise.
struct ChshInstance {
    DensityMatrix rho;
    std::array<Observable, 2> alice;
    std::array<Observable, 2> bob;
};

ChshInstance chsh_instance();

/// The explicit 2-D vector formulation of the same game:
/// a0=(1,0), a1=(0,1), b0=(1,1)/sqrt2, b1=(1,-1)/sqrt2.
std::array<std::pair<UnitVector, UnitVector>, 4> chsh_vector_pairs();

struct ChshGameResult {
    double win_rate;
    double std_error;
    std::int64_t trials;
};

/// Win rate of the XOR-vs-AND game under a correlation protocol, evaluated
/// on the four inputs with a stratified trial allocation (trials/4 each).
ChshGameResult chsh_game_value(const protocols::ProtocolConfig& cfg, std::int64_t trials,
                               std::uint64_t seed);

/// The classical baseline: both parties always output the same fixed bit,
/// winning exactly the three inputs with AND(i,j) = 0.
ChshGameResult chsh_always_same_output();

/// Random test instances: a Wishart-style state X X^dagger / Tr and
/// observables sign(H) of random Hermitian H.
DensityMatrix random_density(int local_dim, rng::TrialRng& gen);
Observable random_observable(int dim, rng::TrialRng& gen);

} // namespace corrsim::quantum

#endif
