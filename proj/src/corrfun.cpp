#include "corrsim/corrfun.hpp"

#include "corrsim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace corrsim::corrfun {

using series::Parity;
using series::Series;

namespace {

constexpr double kPi = std::numbers::pi;

double checked_rho(double rho, const char* who) {
    if (!(std::abs(rho) <= 1.0 + 1e-12)) {
        std::ostringstream os;
        os << who << ": rho = " << rho << " outside [-1, 1]";
        throw std::domain_error(os.str());
    }
    return std::clamp(rho, -1.0, 1.0);
}

double safe_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

// Integrand of Eq.-style k=2 orthant integral: acos(s^2/(3-2s^2)) / sqrt(3-s^2).
double ort2_integrand(double s) {
    return safe_acos(s * s / (3.0 - 2.0 * s * s)) / std::sqrt(3.0 - s * s);
}

// F(r) = int_0^r ort2_integrand, r in [0,1]. The integrand has a sqrt(1-s)
// branch point at s=1; the substitution s = 1-u^2 makes the tail panel smooth.
double ort2_half_integral(double r, double tol) {
    const double split = std::min(r, 0.5);
    double total = quadrature::integrate(ort2_integrand, 0.0, split, tol);
    if (r > 0.5) {
        const auto tail = [](double u) {
            const double s = 1.0 - u * u;
            return 2.0 * u * ort2_integrand(s);
        };
        total += quadrature::integrate(tail, std::sqrt(1.0 - r), std::sqrt(0.5), tol);
    }
    return total;
}

double ort2_signed_integral(double rho, double tol = 2.5e-11) {
    return rho >= 0.0 ? ort2_half_integral(rho, tol) : -ort2_half_integral(-rho, tol);
}

double ort2_full_integral() {
    static const double value = ort2_half_integral(1.0, 1e-12);
    return value;
}

double binom_coeff(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

// inner series v = x^2/(3-2x^2) (even) and w = x/(3-2x) (all degrees),
// the arguments of the arccos compositions below.
Series ratio_series(int degree_step, int order) {
    const Series g = series::compose(series::elem("geom", order),
                                     Series::monomial(degree_step, 2.0 / 3.0, order), order);
    return series::mul(Series::monomial(degree_step, 1.0 / 3.0, order), g, order);
}

// arccos(v) = pi/2 - arcsin(v) as a series; v must have zero constant term.
Series acos_of(const Series& v, int order) {
    return series::sub(Series::constant(kPi / 2.0, order),
                       series::compose(series::elem("arcsin", order), v, order));
}

// (c - x)^alpha = c^alpha (1 - x/c)^alpha
Series shifted_binom(double c, double alpha, int order) {
    return series::scale(series::compose(series::binom(alpha, order),
                                         Series::monomial(1, 1.0 / c, order), order),
                         std::pow(c, alpha));
}

Series require_odd_after_snap(Series s, double tol, const char* who) {
    for (int k = 0; k <= s.max_order(); k += 2)
        if (std::abs(s[k]) > tol)
            throw std::runtime_error(std::string(who) + ": even coefficient above parity tolerance");
    return series::with_parity(std::move(s), Parity::odd);
}

} // namespace

double h_nocomm(double rho) { return 2.0 / kPi * std::asin(checked_rho(rho, "h_nocomm")); }

double g_maj(int k, double p) {
    if (k < 0 || k % 2 != 0) throw std::invalid_argument("g_maj: k must be even and >= 0");
    if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) throw std::domain_error("g_maj: p outside [0, 1]");
    p = std::clamp(p, 0.0, 1.0);
    const double q = 1.0 - p;
    double sum = 0.0;
    for (int i = 0; i <= k / 2; ++i)
        sum += binom_coeff(k + 1, i) * std::pow(q, i) * std::pow(p, k + 1 - i);
    return 1.0 - 2.0 * sum;
}

double h_maj(int k, double rho) {
    return g_maj(k, safe_acos(checked_rho(rho, "h_maj")) / kPi);
}

double h_ort(int k, double rho) {
    rho = checked_rho(rho, "h_ort");
    switch (k) {
        case 0: return 2.0 / kPi * std::asin(rho);
        case 1: return 4.0 / kPi * std::asin(rho / std::sqrt(2.0));
        case 2:
            return 12.0 / (kPi * kPi) * (ort2_full_integral() + ort2_signed_integral(rho)) - 1.0;
        default: throw std::invalid_argument("h_ort: k must be 0, 1 or 2");
    }
}

Series h_ort2_series(int order) {
    if (order < 3 || order > 61) throw std::invalid_argument("h_ort2_series: order must be in [3, 61]");
    if (order % 2 == 0) throw std::invalid_argument("h_ort2_series: order must be odd");
    // h'(x) = 12 arccos(x^2/(3-2x^2)) / (pi^2 sqrt(3-x^2)), an even series.
    const int n = order - 1;
    const Series v = ratio_series(2, n);
    const Series invsqrt = series::scale(
        series::compose(series::binom(-0.5, n), Series::monomial(2, 1.0 / 3.0, n), n),
        1.0 / std::sqrt(3.0));
    Series deriv = series::scale(series::mul(acos_of(v, n), invsqrt, n), 12.0 / (kPi * kPi));
    deriv = series::with_parity(std::move(deriv), Parity::even);
    return series::integrate(deriv).truncated(order);
}

Series h_ort1_series(int order) {
    return series::scale(
        series::scale_argument(series::elem("arcsin", order), 1.0 / std::sqrt(2.0)),
        4.0 / kPi);
}

Series h_maj_series(int k, int order) {
    if (k < 0 || k % 2 != 0) throw std::invalid_argument("h_maj_series: k must be even and >= 0");
    // polynomial g_maj(k, p) = 1 - 2 sum_i C(k+1,i) (1-p)^i p^{k+1-i}
    const Series p_var = Series::identity(k + 1);
    const Series one_minus_p(std::vector<double>{1.0, -1.0});
    Series acc = Series::zero(k + 1);
    for (int i = 0; i <= k / 2; ++i) {
        Series term = Series::constant(binom_coeff(k + 1, i), k + 1);
        for (int j = 0; j < i; ++j) term = series::mul(term, one_minus_p, k + 1);
        for (int j = 0; j < k + 1 - i; ++j) term = series::mul(term, p_var, k + 1);
        acc = series::add(acc, term);
    }
    const Series gpoly = series::sub(Series::constant(1.0, k + 1), series::scale(acc, 2.0));
    // p(x) = arccos(x)/pi = 1/2 - arcsin(x)/pi
    const Series p_of_x = series::sub(Series::constant(0.5, order),
                                      series::scale(series::elem("arcsin", order), 1.0 / kPi));
    Series h = series::polyval(gpoly, p_of_x, order);
    // oddness of h_maj is exact; the construction only leaves rounding dust
    return require_odd_after_snap(std::move(h), 1e-12, "h_maj_series");
}

double mixing_p() {
    return (8.0 - 2.0 * kPi) / (8.0 + (std::sqrt(6.0) - 2.0) * kPi);
}

double h_mixed(double rho) {
    const double p = mixing_p();
    return p * h_ort(1, rho) + (1.0 - p) * h_ort(2, rho);
}

Series h_mixed_series(int order) {
    const double p = mixing_p();
    return series::add(series::scale(h_ort1_series(order), p),
                       series::scale(h_ort2_series(order), 1.0 - p));
}

void SignReport::require(const std::string& label, bool cond, double value, std::string detail) {
    items.push_back({label, cond, value, std::move(detail)});
    if (!cond) ok = false;
}

Series h2_H1_series(int order) {
    // H1(t) = (3-t)^{-3/2} (3-2t)^{-1}
    const Series a = shifted_binom(3.0, -1.5, order);
    const Series b = series::scale(
        series::compose(series::elem("geom", order), Series::monomial(1, 2.0 / 3.0, order), order),
        1.0 / 3.0);
    return series::mul(a, b, order);
}

Series h2_H2_series(int order) {
    // H2(t) = sqrt(3(3-t)/(1-t)) - (3-2t)/2 * arccos(t/(3-2t))
    const Series root = series::scale(
        series::mul(shifted_binom(3.0, 0.5, order), series::binom(-0.5, order), order),
        std::sqrt(3.0));
    const Series w = ratio_series(1, order);
    const Series half_line(std::vector<double>{1.5, -1.0});
    return series::sub(root, series::mul(series::polyval(half_line, Series::identity(order), order),
                                         acos_of(w, order), order));
}

Series mixed_H1_series(int order) { return shifted_binom(2.0, -1.5, order); }

Series mixed_H3_series(int order) {
    // H3(t) = (2-t)^{3/2} [ sqrt(3(3-t)/(1-t)) / (3-2t) - arccos(t/(3-2t))/2 ]
    const Series root = series::scale(
        series::mul(shifted_binom(3.0, 0.5, order), series::binom(-0.5, order), order),
        std::sqrt(3.0));
    const Series inv3m2t = series::scale(
        series::compose(series::elem("geom", order), Series::monomial(1, 2.0 / 3.0, order), order),
        1.0 / 3.0);
    const Series bracket = series::sub(series::mul(root, inv3m2t, order),
                                       series::scale(acos_of(ratio_series(1, order), order), 0.5));
    return series::mul(shifted_binom(2.0, 1.5, order), bracket, order);
}

Series mixed_H2_series(int order) {
    const double p = mixing_p();
    const Series scaled = series::mul(shifted_binom(3.0, -1.5, order),
                                      mixed_H3_series(order), order);
    return series::add(Series::constant(-p * kPi / 6.0, order), series::scale(scaled, 1.0 - p));
}

Series mixed_H4_series(int order) {
    // H4(t) = (79 - 157t + 85t^2 + 11t^3 - 20t^4 + 4t^5) / ((3-2t)^3 (1-t)^{5/2} sqrt(3-t))
    //         - arccos(t/(3-2t)) / (2 sqrt 3)
    const Series num(std::vector<double>{79.0, -157.0, 85.0, 11.0, -20.0, 4.0});
    Series denom = series::mul(shifted_binom(3.0, -0.5, order), series::binom(-2.5, order), order);
    const Series inv3m2t = series::scale(
        series::compose(series::elem("geom", order), Series::monomial(1, 2.0 / 3.0, order), order),
        1.0 / 3.0);
    Series cube = inv3m2t;
    cube = series::mul(cube, inv3m2t, order);
    cube = series::mul(cube, inv3m2t, order);
    denom = series::mul(denom, cube, order);
    const Series first = series::mul(series::polyval(num, Series::identity(order), order), denom, order);
    return series::sub(first,
                       series::scale(acos_of(ratio_series(1, order), order), 0.5 / std::sqrt(3.0)));
}

namespace {

void require_nonneg_coeffs(SignReport& rep, const Series& s, const std::string& name,
                           double slack = 1e-10) {
    double worst = s[0];
    int worst_k = 0;
    for (int k = 1; k <= s.max_order(); ++k) {
        if (s[k] < worst) {
            worst = s[k];
            worst_k = k;
        }
    }
    std::ostringstream os;
    os << "min coefficient " << worst << " at degree " << worst_k;
    rep.require(name + " coefficients >= 0", worst >= -slack, worst, os.str());
}

} // namespace

SignReport check_h2_coeff_signs(int order) {
    SignReport rep;
    const int t_order = std::max(60, order - 1);
    const Series H1 = h2_H1_series(t_order);
    const Series H2 = h2_H2_series(t_order);

    rep.require("H1(0) = 3^{-5/2}", std::abs(H1[0] - std::pow(3.0, -2.5)) <= 1e-9, H1[0]);
    rep.require("H2(0) = 3 - 3pi/4", std::abs(H2[0] - (3.0 - 0.75 * kPi)) <= 1e-9, H2[0]);
    rep.require("H2'(0) = (3+pi)/2", std::abs(H2[1] - (3.0 + kPi) / 2.0) <= 1e-9, H2[1]);
    require_nonneg_coeffs(rep, H1, "H1");
    require_nonneg_coeffs(rep, H2, "H2");

    const Series h = h_ort2_series(order % 2 ? order : order - 1);
    rep.require("c1 = 2 sqrt(3)/pi", std::abs(h[1] - 2.0 * std::sqrt(3.0) / kPi) <= 1e-9, h[1]);
    double worst = -std::numeric_limits<double>::infinity();
    int worst_k = -1;
    for (int k = 3; k <= h.max_order(); k += 2) {
        if (h[k] > worst) {
            worst = h[k];
            worst_k = k;
        }
    }
    std::ostringstream os;
    os << "max higher coefficient " << worst << " at degree " << worst_k;
    rep.require("c_{2k+1} < 0 for k >= 1", worst < -1e-15, worst, os.str());
    return rep;
}

SignReport check_mixed_signs(int order) {
    SignReport rep;
    const int t_order = std::max(60, order - 1);
    const Series H1 = mixed_H1_series(t_order);
    const Series H2 = mixed_H2_series(t_order);
    const Series H3 = mixed_H3_series(t_order);
    const Series H4 = mixed_H4_series(t_order);

    rep.require("H2(0) = 0", std::abs(H2[0]) <= 1e-12, H2[0]);
    rep.require("H3(0) = (4-pi)/sqrt2",
                std::abs(H3[0] - (4.0 - kPi) / std::sqrt(2.0)) <= 1e-9, H3[0]);
    rep.require("H3'(0) = (20+9pi)/(12 sqrt2)",
                std::abs(H3[1] - (20.0 + 9.0 * kPi) / (12.0 * std::sqrt(2.0))) <= 1e-9, H3[1]);
    rep.require("H4(0) = (316-27pi)/(108 sqrt3)",
                std::abs(H4[0] - (316.0 - 27.0 * kPi) / (108.0 * std::sqrt(3.0))) <= 1e-9, H4[0]);
    require_nonneg_coeffs(rep, H1, "H1");
    require_nonneg_coeffs(rep, H2, "H2");
    require_nonneg_coeffs(rep, H3, "H3");
    require_nonneg_coeffs(rep, H4, "H4");

    const Series h = h_mixed_series(order % 2 ? order : order - 1);
    rep.require("c1 > 0", h[1] > 0.0, h[1]);
    double worst = -std::numeric_limits<double>::infinity();
    int worst_k = -1;
    for (int k = 3; k <= h.max_order(); k += 2) {
        if (h[k] > worst) {
            worst = h[k];
            worst_k = k;
        }
    }
    std::ostringstream os;
    os << "max higher coefficient " << worst << " at degree " << worst_k;
    rep.require("c_{2k+1} <= 0 for k >= 1", worst <= 1e-12, worst, os.str());
    return rep;
}

SignReport check_maj4_signs(int order) {
    SignReport rep;
    const Series h = h_maj_series(4, order % 2 ? order : order - 1);
    rep.require("c1 > 0", h[1] > 0.0, h[1]);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 3; k <= h.max_order(); k += 2) worst = std::max(worst, h[k]);
    rep.require("c_{2k+1} <= 0 for k >= 1", worst <= 1e-12, worst);
    return rep;
}

double b_eps_analytic(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::domain_error("b_eps_analytic: epsilon must be in (0, 1]");
    return 2.0 - 2.0 * h_ort(1, 1.0 - epsilon);
}

std::string CorrelationFunction::name() const {
    switch (kind_) {
        case Kind::nocomm: return "nocomm";
        case Kind::maj: return "maj" + std::to_string(k_);
        case Kind::ort: return "ort" + std::to_string(k_);
        case Kind::mixed: return "mixed";
    }
    return "?";
}

CorrelationFunction make_correlation(Kind kind, int k) {
    switch (kind) {
        case Kind::nocomm:
            return CorrelationFunction(kind, 0, [](double r) { return h_nocomm(r); });
        case Kind::maj:
            if (k < 0 || k % 2 != 0) throw std::invalid_argument("make_correlation: maj needs even k");
            return CorrelationFunction(kind, k, [k](double r) { return h_maj(k, r); });
        case Kind::ort: {
            if (k < 0 || k > 2) throw std::invalid_argument("make_correlation: ort needs k in {0,1,2}");
            std::optional<Series> cache;
            if (k == 2) cache = h_ort2_series(41);
            return CorrelationFunction(kind, k, [k](double r) { return h_ort(k, r); }, std::move(cache));
        }
        case Kind::mixed:
            return CorrelationFunction(kind, 0, [](double r) { return h_mixed(r); });
    }
    throw std::invalid_argument("make_correlation: unknown kind");
}

} // namespace corrsim::corrfun
