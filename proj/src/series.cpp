#include "corrsim/series.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace corrsim::series {

namespace {

bool finite_all(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Zero out the slots a declared parity forbids. The arithmetic below already
// produces exact zeros there (every contributing product has a 0.0 factor);
// this just normalizes -0.0 and guards the class invariant.
void enforce_parity(std::vector<double>& c, Parity p) {
    if (p == Parity::none) return;
    const int keep = p == Parity::odd ? 1 : 0;
    for (int k = 0; k < static_cast<int>(c.size()); ++k)
        if (k % 2 != keep) c[k] = 0.0;
}

Parity mul_parity(Parity a, Parity b) {
    if (a == Parity::none || b == Parity::none) return Parity::none;
    return a == b ? Parity::even : Parity::odd;
}

Parity add_parity(Parity a, Parity b) { return a == b ? a : Parity::none; }

} // namespace

Series with_parity(Series s, Parity p) {
    enforce_parity(s.coeffs_, p);
    s.parity_ = p;
    return s;
}

Series::Series(std::vector<double> coeffs, Parity parity) : coeffs_(std::move(coeffs)), parity_(parity) {
    if (coeffs_.empty()) throw std::invalid_argument("Series: empty coefficient list");
    if (!finite_all(coeffs_)) throw std::invalid_argument("Series: non-finite coefficient");
    if (parity_ != Parity::none) {
        const int keep = parity_ == Parity::odd ? 1 : 0;
        for (int k = 0; k < static_cast<int>(coeffs_.size()); ++k)
            if (k % 2 != keep && coeffs_[k] != 0.0)
                throw std::invalid_argument("Series: coefficient violates declared parity");
    }
}

Series Series::zero(int max_order, Parity parity) {
    return Series(std::vector<double>(static_cast<std::size_t>(max_order) + 1, 0.0), parity);
}

Series Series::constant(double c, int max_order) {
    std::vector<double> v(static_cast<std::size_t>(max_order) + 1, 0.0);
    v[0] = c;
    return Series(std::move(v), Parity::even);
}

Series Series::identity(int max_order) { return monomial(1, 1.0, max_order); }

Series Series::monomial(int degree, double coeff, int max_order) {
    if (degree < 0 || degree > max_order)
        throw std::invalid_argument("Series::monomial: degree out of range");
    std::vector<double> v(static_cast<std::size_t>(max_order) + 1, 0.0);
    v[static_cast<std::size_t>(degree)] = coeff;
    return Series(std::move(v), degree % 2 ? Parity::odd : Parity::even);
}

Series Series::truncated(int order) const {
    if (order < 0) throw std::invalid_argument("Series::truncated: negative order");
    std::vector<double> v(static_cast<std::size_t>(order) + 1, 0.0);
    for (int k = 0; k <= order && k <= max_order(); ++k) v[static_cast<std::size_t>(k)] = coeffs_[static_cast<std::size_t>(k)];
    return Series(std::move(v), parity_);
}

double Series::evaluate(double x) const {
    double acc = 0.0;
    for (int k = max_order(); k >= 0; --k) acc = acc * x + coeffs_[static_cast<std::size_t>(k)];
    return acc;
}

std::string Series::to_string(int max_terms) const {
    std::ostringstream os;
    os.precision(12);
    int printed = 0;
    for (int k = 0; k <= max_order() && printed < max_terms; ++k) {
        const double c = coeffs_[static_cast<std::size_t>(k)];
        if (c == 0.0 && k > 0) continue;
        if (printed) os << " + ";
        os << c;
        if (k >= 1) os << "*x^" << k;
        ++printed;
    }
    if (printed == 0) os << "0";
    return os.str();
}

Series add(const Series& a, const Series& b) {
    const int n = std::max(a.max_order(), b.max_order());
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) v[static_cast<std::size_t>(k)] = a[k] + b[k];
    const Parity p = add_parity(a.parity(), b.parity());
    enforce_parity(v, p);
    return Series(std::move(v), p);
}

Series sub(const Series& a, const Series& b) { return add(a, scale(b, -1.0)); }

Series scale(const Series& a, double s) {
    std::vector<double> v = a.coeffs();
    for (double& x : v) x *= s;
    enforce_parity(v, a.parity());
    return Series(std::move(v), a.parity());
}

Series mul(const Series& a, const Series& b, int order) {
    if (order < 0) throw std::invalid_argument("mul: negative order");
    std::vector<double> v(static_cast<std::size_t>(order) + 1, 0.0);
    const int na = std::min(a.max_order(), order);
    for (int i = 0; i <= na; ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        const int nb = std::min(b.max_order(), order - i);
        for (int j = 0; j <= nb; ++j) v[static_cast<std::size_t>(i + j)] += ai * b[j];
    }
    const Parity p = mul_parity(a.parity(), b.parity());
    enforce_parity(v, p);
    return Series(std::move(v), p);
}

namespace {

Parity compose_parity(Parity outer, Parity inner) {
    if (inner == Parity::even) return Parity::even;
    if (inner == Parity::odd) return outer;
    return Parity::none;
}

Series horner_at_series(const Series& outer, const Series& inner, int order) {
    Series acc = Series::constant(outer[outer.max_order()], order);
    for (int k = outer.max_order() - 1; k >= 0; --k) {
        acc = mul(acc, inner, order);
        if (outer[k] != 0.0) acc = add(acc, Series::constant(outer[k], order));
    }
    return acc;
}

} // namespace

Series compose(const Series& outer, const Series& inner, int order) {
    if (inner[0] != 0.0)
        throw std::invalid_argument("compose: inner series must have zero constant term");
    Series r = horner_at_series(outer.truncated(order), inner, order);
    return with_parity(std::move(r), compose_parity(outer.parity(), inner.parity()));
}

Series polyval(const Series& poly, const Series& x, int order) {
    return horner_at_series(poly, x, order);
}

Series revert(const Series& f, int order) {
    if (order < 1) throw std::invalid_argument("revert: order must be >= 1");
    if (f[0] != 0.0) throw std::invalid_argument("revert: series must have zero constant term");
    if (f[1] == 0.0) throw std::invalid_argument("revert: zero linear coefficient");

    const bool odd = f.parity() == Parity::odd;
    std::vector<double> g(static_cast<std::size_t>(order) + 1, 0.0);
    g[1] = 1.0 / f[1];
    const Series ft = f.truncated(order);
    for (int m = 2; m <= order; ++m) {
        if (odd && m % 2 == 0) continue;
        // With g set through degree m-1, the degree-m coefficient of f(g)
        // depends on g_m only through the linear term f1*g_m.
        const Series comp = compose(ft, Series(g, odd ? Parity::odd : Parity::none), m);
        g[static_cast<std::size_t>(m)] = -comp[m] / f[1];
    }
    return Series(std::move(g), odd ? Parity::odd : Parity::none);
}

Series integrate(const Series& f) {
    std::vector<double> v(f.coeffs().size() + 1, 0.0);
    for (int k = 0; k <= f.max_order(); ++k) v[static_cast<std::size_t>(k) + 1] = f[k] / (k + 1);
    Parity p = Parity::none;
    if (f.parity() == Parity::even) p = Parity::odd;
    if (f.parity() == Parity::odd) p = Parity::even;
    return Series(std::move(v), p);
}

Series differentiate(const Series& f) {
    std::vector<double> v(std::max<std::size_t>(f.coeffs().size() - 1, 1), 0.0);
    for (int k = 1; k <= f.max_order(); ++k) v[static_cast<std::size_t>(k) - 1] = f[k] * k;
    Parity p = Parity::none;
    if (f.parity() == Parity::even) p = Parity::odd;
    if (f.parity() == Parity::odd) p = Parity::even;
    enforce_parity(v, p);
    return Series(std::move(v), p);
}

Series scale_argument(const Series& f, double s) {
    std::vector<double> v = f.coeffs();
    double pw = 1.0;
    for (int k = 1; k <= f.max_order(); ++k) {
        pw *= s;
        v[static_cast<std::size_t>(k)] *= pw;
    }
    enforce_parity(v, f.parity());
    return Series(std::move(v), f.parity());
}

Series binom(double alpha, int order) {
    std::vector<double> v(static_cast<std::size_t>(order) + 1, 0.0);
    v[0] = 1.0;
    // (1-x)^alpha: b_j = b_{j-1} * (j-1-alpha)/j
    for (int j = 1; j <= order; ++j)
        v[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j) - 1] * (j - 1 - alpha) / j;
    return Series(std::move(v));
}

Series elem(const std::string& name, int order, double alpha) {
    if (order < 0) throw std::invalid_argument("elem: negative order");
    if (name == "arcsin") {
        std::vector<double> v(static_cast<std::size_t>(order) + 1, 0.0);
        double a = 1.0; // coefficient of x^(2m+1)
        for (int m = 0; 2 * m + 1 <= order; ++m) {
            if (m > 0) a *= static_cast<double>((2 * m - 1) * (2 * m - 1)) / static_cast<double>(2 * m * (2 * m + 1));
            v[static_cast<std::size_t>(2 * m) + 1] = a;
        }
        return Series(std::move(v), Parity::odd);
    }
    if (name == "sqrt1m") return binom(0.5, order);
    if (name == "geom") return binom(-1.0, order);
    if (name == "binom") return binom(alpha, order);
    throw std::invalid_argument("elem: unknown series name '" + name + "'");
}

} // namespace corrsim::series
