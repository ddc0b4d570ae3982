#ifndef CORRSIM_CORRFUN_HPP
#define CORRSIM_CORRFUN_HPP

#include "corrsim/series.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace corrsim::corrfun {

/// Correlation function of Protocol 1 (no communication): (2/pi) arcsin(rho).
double h_nocomm(double rho);

/// Probability-domain majority curve: 1 - 2 sum_{i<=k/2} C(k+1,i)(1-p)^i p^{k+1-i}.
/// k must be even and nonnegative, p in [0,1].
double g_maj(int k, double p);

/// Correlation function of the k-bit majority protocol: g_maj(k, arccos(rho)/pi).
double h_maj(int k, double rho);

/// Correlation function of the k-bit orthant protocol, k in {0,1,2}.
/// k=2 is quadrature-backed (absolute error <= 1e-10).
double h_ort(int k, double rho);

/// Odd Maclaurin series of h_ort(2,.) through the given (odd) order <= 61,
/// built by composing elementary series for the derivative and integrating
/// termwise.
series::Series h_ort2_series(int order);

/// Odd series of h_ort(1,.) = (4/pi) arcsin(x/sqrt(2)).
series::Series h_ort1_series(int order);

/// Odd series of the k-bit majority correlation function.
series::Series h_maj_series(int k, int order);

/// Mixing probability of the 1.82-bit protocol: (8-2pi)/(8+(sqrt6-2)pi).
double mixing_p();

/// p*h_ort(1,rho) + (1-p)*h_ort(2,rho) with p = mixing_p().
double h_mixed(double rho);

series::Series h_mixed_series(int order);

/// One checked fact inside a sign report.
struct SignCheckItem {
    std::string label;
    bool ok;
    double value;      // the offending or witnessed value
    std::string detail;
};

struct SignReport {
    bool ok = true;
    std::vector<SignCheckItem> items;
    void require(const std::string& label, bool cond, double value, std::string detail = "");
};

/// Verifies the sign structure behind the 2-bit orthant protocol's series:
/// H1 and H2 (of h'' = -(24x/pi^2) H1(x^2) H2(x^2)) have nonnegative
/// coefficients, the H2(0), H2'(0), H1(0) closed forms match, and the
/// h series itself has c1 > 0 with all higher odd coefficients negative.
SignReport check_h2_coeff_signs(int order = 61);

/// Same verification chain for the mixed (1.82-bit) protocol: H1..H4
/// coefficient signs, H2(0) = 0, the H3/H4 constants, and c1 > 0 with
/// c_{2k+1} <= 0 in the mixed h series.
SignReport check_mixed_signs(int order = 61);

/// Numeric-only sign check for the 4-bit majority protocol's series
/// (c1 > 0, higher coefficients <= 0).
SignReport check_maj4_signs(int order = 41);

/// B(eps) = 2 - 2 h_ort(1, 1-eps): the endpoint-sensitivity of the one-bit
/// orthant protocol; approaches 8 eps/pi as eps -> 0.
double b_eps_analytic(double epsilon);

/// Internal series used by the sign checks; exposed for reporting/tests.
series::Series h2_H1_series(int order);
series::Series h2_H2_series(int order);
series::Series mixed_H1_series(int order);
series::Series mixed_H2_series(int order);
series::Series mixed_H3_series(int order);
series::Series mixed_H4_series(int order);

enum class Kind { nocomm, maj, ort, mixed };

/// Immutable correlation-function handle: kind + evaluator + optional series.
class CorrelationFunction {
  public:
    CorrelationFunction(Kind kind, int k, std::function<double(double)> eval,
                        std::optional<series::Series> series_cache = std::nullopt)
        : kind_(kind), k_(k), eval_(std::move(eval)), series_(std::move(series_cache)) {}

    Kind kind() const { return kind_; }
    int k() const { return k_; }
    double operator()(double rho) const { return eval_(rho); }
    const std::optional<series::Series>& series_cache() const { return series_; }
    std::string name() const;

  private:
    Kind kind_;
    int k_;
    std::function<double(double)> eval_;
    std::optional<series::Series> series_;
};

CorrelationFunction make_correlation(Kind kind, int k = 0);

} // namespace corrsim::corrfun

#endif
