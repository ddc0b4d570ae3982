#include "corrsim/geom.hpp"

#include "corrsim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace corrsim::geom {

namespace {

constexpr double kDegenerateWedge = 1e-10;

double safe_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

void check_dim(const Vec& v, std::size_t d, const char* who) {
    if (v.size() != d) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

// Surface angle at v1 between the arcs to v2 and v3: angle of the projections
// of v2, v3 onto the plane orthogonal to v1.
double surface_angle(const Vec& v1, const Vec& v2, const Vec& v3) {
    const std::size_t n = v1.size();
    Vec p2(n), p3(n);
    const double d2 = dot(v2, v1), d3 = dot(v3, v1);
    for (std::size_t i = 0; i < n; ++i) {
        p2[i] = v2[i] - d2 * v1[i];
        p3[i] = v3[i] - d3 * v1[i];
    }
    const double n2 = norm(p2), n3 = norm(p3);
    if (n2 < kDegenerateWedge || n3 < kDegenerateWedge)
        throw std::invalid_argument("girard_area: degenerate spherical triangle");
    return safe_acos(dot(p2, p3) / (n2 * n3));
}

} // namespace

double dot(const Vec& a, const Vec& b) {
    check_dim(b, a.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

double girard_area(const Vec& v1, const Vec& v2, const Vec& v3) {
    if (v1.size() != 3 || v2.size() != 3 || v3.size() != 3)
        throw std::invalid_argument("girard_area: vertices must live in R^3");
    const double a1 = surface_angle(v1, v2, v3);
    const double a2 = surface_angle(v2, v1, v3);
    const double a3 = surface_angle(v3, v1, v2);
    return a1 + a2 + a3 - std::numbers::pi;
}

double wedge_ip(const Vec& a1, const Vec& a2, const Vec& a3,
                const Vec& b1, const Vec& b2, const Vec& b3) {
    const double m00 = dot(a1, b1), m01 = dot(a1, b2), m02 = dot(a1, b3);
    const double m10 = dot(a2, b1), m11 = dot(a2, b2), m12 = dot(a2, b3);
    const double m20 = dot(a3, b1), m21 = dot(a3, b2), m22 = dot(a3, b3);
    return m00 * (m11 * m22 - m12 * m21) - m01 * (m10 * m22 - m12 * m20) +
           m02 * (m10 * m21 - m11 * m20);
}

double wedge_norm(const Vec& a1, const Vec& a2, const Vec& a3) {
    return std::sqrt(std::max(0.0, wedge_ip(a1, a2, a3, a1, a2, a3)));
}

SphericalSimplex::SphericalSimplex(std::vector<Vec> vertices) : vertices_(std::move(vertices)) {
    const std::size_t n = vertices_.size();
    if (n < 2) throw std::invalid_argument("SphericalSimplex: need at least 2 vertices");
    for (const Vec& v : vertices_) {
        check_dim(v, vertices_[0].size(), "SphericalSimplex");
        if (std::abs(norm(v) - 1.0) > 1e-12)
            throw std::invalid_argument("SphericalSimplex: vertex is not a unit vector");
    }
    theta_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            theta_[i * n + j] = safe_acos(dot(vertices_[i], vertices_[j]));
}

double SphericalSimplex::theta(int i, int j) const {
    const std::size_t n = vertices_.size();
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n)
        throw std::out_of_range("SphericalSimplex::theta");
    return theta_[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)];
}

std::array<double, 6> dihedral_angles(const SphericalSimplex& s) {
    const auto& v = s.vertices();
    if (v.size() != 4 || v[0].size() != 4)
        throw std::invalid_argument("dihedral_angles: need 4 vertices in R^4");
    std::array<double, 6> lambda{};
    int idx = 0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            int others[2], c = 0;
            for (int m = 0; m < 4; ++m)
                if (m != i && m != j) others[c++] = m;
            const Vec& f1 = v[static_cast<std::size_t>(others[0])];
            const Vec& f2 = v[static_cast<std::size_t>(others[1])];
            const double n1 = wedge_norm(v[i], v[j], f1);
            const double n2 = wedge_norm(v[i], v[j], f2);
            if (n1 < kDegenerateWedge || n2 < kDegenerateWedge)
                throw std::invalid_argument("dihedral_angles: degenerate simplex");
            lambda[static_cast<std::size_t>(idx++)] =
                safe_acos(wedge_ip(v[i], v[j], f1, v[i], v[j], f2) / (n1 * n2));
        }
    }
    return lambda;
}

namespace {

// Schlaefli integrand for the k=2 cone: only the three equal dihedral angles
// lambda_01 = lambda_02 = lambda_12 = arccos(-rho/sqrt3) move with rho, each
// with derivative (3-rho^2)^{-1/2}, so
// dVol/drho = 3 * theta_01/2 * (3-rho^2)^{-1/2}.
double schlaefli_integrand(double s) {
    return 1.5 * safe_acos(s * s / (3.0 - 2.0 * s * s)) / std::sqrt(3.0 - s * s);
}

double volume_half_integral(double r, double tol) {
    const double split = std::min(r, 0.5);
    double total = quadrature::integrate(schlaefli_integrand, 0.0, split, tol);
    if (r > 0.5) {
        const auto tail = [](double u) {
            const double s = 1.0 - u * u;
            return 2.0 * u * schlaefli_integrand(s);
        };
        total += quadrature::integrate(tail, std::sqrt(1.0 - r), std::sqrt(0.5), tol);
    }
    return total;
}

} // namespace

double tetra_volume(double rho) {
    if (!(std::abs(rho) <= 1.0 + 1e-12)) throw std::domain_error("tetra_volume: |rho| > 1");
    rho = std::clamp(rho, -1.0, 1.0);
    static const double half = volume_half_integral(1.0, 1e-12);
    const double signed_part = rho >= 0.0 ? volume_half_integral(rho, 2.5e-11)
                                          : -volume_half_integral(-rho, 2.5e-11);
    return half + signed_part;
}

OrthantModel orthant_model(int k, double rho) {
    if (k < 0 || k > 2) throw std::invalid_argument("orthant_model: k must be in {0,1,2}");
    if (!(std::abs(rho) <= 1.0 + 1e-12)) throw std::domain_error("orthant_model: |rho| > 1");
    rho = std::clamp(rho, -1.0, 1.0);
    const int d = k + 2;
    OrthantModel m{k, rho, std::vector<double>(static_cast<std::size_t>(d) * d, 0.0),
                   std::vector<double>(static_cast<std::size_t>(d) * d, 0.0)};
    auto& M = m.covariance;
    for (int i = 0; i <= k; ++i) {
        M[static_cast<std::size_t>(i) * d + i] = 1.0;
        M[static_cast<std::size_t>(i) * d + (d - 1)] = rho;
        M[static_cast<std::size_t>(d - 1) * d + i] = rho;
    }
    M[static_cast<std::size_t>(d - 1) * d + (d - 1)] = k + 1;

    // lower Cholesky L of M' (exists for all |rho| <= 1), stored transposed:
    // cholesky holds the upper-triangular C with C^t C = M'.
    std::vector<double> L(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = M[static_cast<std::size_t>(i) * d + j];
            for (int p = 0; p < j; ++p)
                sum -= L[static_cast<std::size_t>(i) * d + p] * L[static_cast<std::size_t>(j) * d + p];
            if (i == j) {
                if (sum < -1e-12) throw std::runtime_error("orthant_model: covariance not PSD");
                L[static_cast<std::size_t>(i) * d + j] = std::sqrt(std::max(0.0, sum));
            } else {
                const double diag = L[static_cast<std::size_t>(j) * d + j];
                L[static_cast<std::size_t>(i) * d + j] = diag == 0.0 ? 0.0 : sum / diag;
            }
        }
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            m.cholesky[static_cast<std::size_t>(i) * d + j] = L[static_cast<std::size_t>(j) * d + i];
    return m;
}

std::vector<Vec> orthant_simplex_vertices(int k, double rho) {
    const OrthantModel m = orthant_model(k, rho);
    const int d = m.dim();
    const auto& C = m.cholesky;
    if (std::abs(C[static_cast<std::size_t>(d - 1) * d + (d - 1)]) < 1e-14)
        throw std::domain_error("orthant_simplex_vertices: singular at |rho| = 1");
    // invert the upper-triangular C by back substitution, row by row
    std::vector<double> inv(static_cast<std::size_t>(d) * d, 0.0);
    for (int col = 0; col < d; ++col) {
        for (int row = col; row >= 0; --row) {
            double sum = row == col ? 1.0 : 0.0;
            for (int p = row + 1; p <= col; ++p)
                sum -= C[static_cast<std::size_t>(row) * d + p] * inv[static_cast<std::size_t>(p) * d + col];
            inv[static_cast<std::size_t>(row) * d + col] = sum / C[static_cast<std::size_t>(row) * d + row];
        }
    }
    std::vector<Vec> rows;
    rows.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        Vec r(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) r[static_cast<std::size_t>(j)] = inv[static_cast<std::size_t>(i) * d + j];
        const double nr = norm(r);
        for (double& x : r) x /= nr;
        rows.push_back(std::move(r));
    }
    return rows;
}

double OrthantProbEstimate::corr() const {
    return std::ldexp(prob, k + 2) - 1.0;
}

double OrthantProbEstimate::corr_stderr() const {
    return std::ldexp(prob_stderr, k + 2);
}

OrthantProbEstimate orthant_prob_mc(const OrthantModel& m, std::int64_t trials,
                                    std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("orthant_prob_mc: trials must be >= 1");
    const int d = m.dim();
    const auto& C = m.cholesky;
    std::int64_t hits = 0;
    Vec g(static_cast<std::size_t>(d));
    for (std::int64_t t = 0; t < trials; ++t) {
        rng::TrialRng r(seed, static_cast<std::uint64_t>(t));
        for (double& x : g) x = r.gaussian();
        bool inside = true;
        // x = C^t g; component i = sum_{j<=i} C[j][i] g[j]
        for (int i = 0; i < d && inside; ++i) {
            double x = 0.0;
            for (int j = 0; j <= i; ++j) x += C[static_cast<std::size_t>(j) * d + i] * g[static_cast<std::size_t>(j)];
            inside = x >= 0.0;
        }
        if (inside) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    const double se = std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(trials)));
    return {p, se, trials, m.k};
}

} // namespace corrsim::geom
