#ifndef CORRSIM_SERIES_HPP
#define CORRSIM_SERIES_HPP

#include <string>
#include <vector>

namespace corrsim::series {

/// Parity of a truncated power series. An odd series has all even-degree
/// coefficients exactly zero (and vice versa); `none` makes no claim.
enum class Parity { none, even, odd };

/// Truncated formal power series with real coefficients indexed by degree
/// 0..max_order(). Value type: all operations return new series.
class Series {
  public:
    Series() : coeffs_(1, 0.0) {}
    explicit Series(std::vector<double> coeffs, Parity parity = Parity::none);

    static Series zero(int max_order, Parity parity = Parity::none);
    static Series constant(double c, int max_order);
    /// The identity series x.
    static Series identity(int max_order);
    static Series monomial(int degree, double coeff, int max_order);

    int max_order() const { return static_cast<int>(coeffs_.size()) - 1; }
    Parity parity() const { return parity_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    /// Coefficient of x^degree; degrees beyond max_order read as 0.
    double operator[](int degree) const {
        return degree >= 0 && degree < static_cast<int>(coeffs_.size())
                   ? coeffs_[degree]
                   : 0.0;
    }

    Series truncated(int order) const;

    /// Horner evaluation of the truncating polynomial at x.
    double evaluate(double x) const;

    std::string to_string(int max_terms = 8) const;

  private:
    friend Series with_parity(Series s, Parity p);
    std::vector<double> coeffs_;
    Parity parity_ = Parity::none;
};

/// Declares (and enforces by zeroing the forbidden slots) the parity of s.
/// Only for series whose parity is known structurally but was lost in
/// bookkeeping; the zeroed entries must already be at rounding level.
Series with_parity(Series s, Parity p);

Series add(const Series& a, const Series& b);
Series sub(const Series& a, const Series& b);
Series scale(const Series& a, double s);

/// Cauchy product truncated to `order`.
Series mul(const Series& a, const Series& b, int order);

/// Taylor coefficients of outer(inner(x)) through degree `order`.
/// Requires inner to have zero constant term.
Series compose(const Series& outer, const Series& inner, int order);

/// Evaluates `poly` (treated as an exact polynomial, not a truncation) at the
/// series x, truncated to `order`. Unlike compose, x may have a constant term.
Series polyval(const Series& poly, const Series& x, int order);

/// Compositional inverse: returns g with compose(f, g) = identity through
/// `order`. Requires f[0] = 0 and f[1] != 0. Solves the composition
/// equations degree by degree; inverting an odd series yields an odd series
/// with even coefficients exactly zero.
Series revert(const Series& f, int order);

/// Termwise antiderivative with zero constant term.
Series integrate(const Series& f);
Series differentiate(const Series& f);

/// f(s*x): coefficient of degree k scaled by s^k.
Series scale_argument(const Series& f, double s);

/// Maclaurin series of (1-x)^alpha.
Series binom(double alpha, int order);

/// Named elementary series: "arcsin" (arcsin x), "sqrt1m" (sqrt(1-x)),
/// "geom" (1/(1-x)), "binom" ((1-x)^alpha). Throws on unknown names.
Series elem(const std::string& name, int order, double alpha = 0.0);

} // namespace corrsim::series

#endif
