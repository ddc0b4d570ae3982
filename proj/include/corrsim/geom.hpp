#ifndef CORRSIM_GEOM_HPP
#define CORRSIM_GEOM_HPP

#include "corrsim/rng.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace corrsim::geom {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm(const Vec& v);

/// Area of the spherical triangle on S^2 spanned by three unit vectors,
/// computed from the three surface angles (Girard: alpha1+alpha2+alpha3-pi).
/// Throws on degenerate (linearly dependent) input.
double girard_area(const Vec& v1, const Vec& v2, const Vec& v3);

/// Gram-determinant inner product of two wedge triples:
/// det [ <a_i, b_j> ]_{3x3}. Vectors may live in any common dimension.
double wedge_ip(const Vec& a1, const Vec& a2, const Vec& a3,
                const Vec& b1, const Vec& b2, const Vec& b3);
double wedge_norm(const Vec& a1, const Vec& a2, const Vec& a3);

/// Spherical simplex given by its unit vertices, with cached pairwise
/// angles theta_ij = arccos<v_i,v_j>.
class SphericalSimplex {
  public:
    explicit SphericalSimplex(std::vector<Vec> vertices);
    const std::vector<Vec>& vertices() const { return vertices_; }
    double theta(int i, int j) const;

  private:
    std::vector<Vec> vertices_;
    std::vector<double> theta_; // row-major over vertex pairs
};

/// All six dihedral angles lambda_ij (i<j, lexicographic: 01,02,03,12,13,23)
/// of a 4-vertex simplex in R^4, from the wedge-determinant formula.
std::array<double, 6> dihedral_angles(const SphericalSimplex& s);

/// Volume of the spherical tetrahedron cut by the 2-bit orthant protocol's
/// cone at inner product rho, by integrating Schlaefli's identity
/// dVol = sum theta_ij/2 dlambda_ij along rho from -1.
double tetra_volume(double rho);

/// The four unit vertices of that tetrahedron (normalized rows of the
/// inverse Cholesky factor); k in {0,1,2} gives k+2 vertices in R^{k+2}.
std::vector<Vec> orthant_simplex_vertices(int k, double rho);

/// Covariance model of the joint (G a, Z) Gaussian vector for the k-bit
/// orthant protocol: M' is (k+2)x(k+2) with unit diagonal on the first k+1
/// entries, rho in the last row/column, and k+1 in the corner; C is the
/// upper-triangular factor with C^t C = M'.
struct OrthantModel {
    int k;
    double rho;
    std::vector<double> covariance;      // M', row-major (k+2)^2
    std::vector<double> cholesky;        // C, row-major, upper triangular
    int dim() const { return k + 2; }
};

OrthantModel orthant_model(int k, double rho);

/// Monte Carlo estimate of the positive-orthant probability of N(0, M').
struct OrthantProbEstimate {
    double prob;
    double prob_stderr;
    std::int64_t trials;
    int k;
    /// Implied protocol correlation 2^{k+2} P - 1 and its standard error.
    double corr() const;
    double corr_stderr() const;
};

OrthantProbEstimate orthant_prob_mc(const OrthantModel& m, std::int64_t trials,
                                    std::uint64_t seed);

} // namespace corrsim::geom

#endif
