#ifndef CORRSIM_UNIT_VECTOR_HPP
#define CORRSIM_UNIT_VECTOR_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace corrsim {

/// Real vector of declared dimension with unit norm. Inputs whose norm
/// deviates from 1 by at most 1e-8 are renormalized; larger deviations are
/// rejected.
class UnitVector {
  public:
    explicit UnitVector(std::vector<double> components) : c_(std::move(components)) {
        if (c_.empty()) throw std::invalid_argument("UnitVector: empty vector");
        double s = 0.0;
        for (double x : c_) s += x * x;
        const double n = std::sqrt(s);
        if (!(std::abs(n - 1.0) <= 1e-8))
            throw std::invalid_argument("UnitVector: norm deviates from 1 by more than 1e-8");
        if (n != 1.0)
            for (double& x : c_) x /= n;
    }

    int dim() const { return static_cast<int>(c_.size()); }
    const std::vector<double>& components() const { return c_; }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

  private:
    std::vector<double> c_;
};

inline double dot(const UnitVector& a, const UnitVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace corrsim

#endif
