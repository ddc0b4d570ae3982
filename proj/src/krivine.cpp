#include "corrsim/krivine.hpp"

#include "corrsim/corrfun.hpp"
#include "corrsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace corrsim::krivine {

using series::Parity;
using series::Series;

std::string to_string(SourceKind k) {
    switch (k) {
        case SourceKind::ort2: return "ort2";
        case SourceKind::mixed: return "mixed";
        case SourceKind::maj4: return "maj4";
        case SourceKind::identity: return "identity";
        case SourceKind::custom: return "custom";
    }
    return "?";
}

InverseSeries::InverseSeries(Series d, SourceKind source) : d_(std::move(d)), source_(source) {
    if (d_.parity() != Parity::odd)
        throw std::invalid_argument("InverseSeries: coefficients must form an odd series");
    for (int k = 1; k <= d_.max_order(); k += 2) {
        const double dk = d_[k];
        if (dk < -1e-15) {
            std::ostringstream os;
            os << "inverse series violates positivity: d_" << k << " = " << dk;
            throw InverseBoundError(os.str());
        }
        if (dk > 1.0 / k + 1e-12) {
            std::ostringstream os;
            os << "inverse series violates d_k <= 1/k: d_" << k << " = " << dk << " > 1/" << k;
            throw InverseBoundError(os.str());
        }
    }
    const double mass = total_mass();
    if (mass > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "inverse series mass " << mass << " exceeds 1";
        throw InverseBoundError(os.str());
    }
}

double InverseSeries::partial_mass(int K) const {
    double s = 0.0;
    for (int k = 1; k <= std::min(K, d_.max_order()); k += 2) s += d_[k];
    return s;
}

double InverseSeries::min_coefficient() const {
    double m = d_[1];
    for (int k = 1; k <= d_.max_order(); k += 2) m = std::min(m, d_[k]);
    return m;
}

double InverseSeries::max_bound_excess() const {
    double m = d_[1] - 1.0;
    for (int k = 1; k <= d_.max_order(); k += 2) m = std::max(m, d_[k] - 1.0 / k);
    return m;
}

InverseSeries::Eval InverseSeries::evaluate(double x) const {
    if (!(std::abs(x) <= 1.0 + 1e-12))
        throw std::domain_error("InverseSeries::evaluate: |x| > 1");
    x = std::clamp(x, -1.0, 1.0);
    const double tail = tail_mass_beyond(d_.max_order()) *
                        std::pow(std::abs(x), d_.max_order() + 2);
    return {d_.evaluate(x), tail};
}

InverseSeries invert_h(const Series& h, int order, SourceKind source) {
    if (h.parity() != Parity::odd) throw std::invalid_argument("invert_h: h must be odd");
    if (!(h[1] > 0.0)) throw std::invalid_argument("invert_h: h must have positive slope at 0");
    return InverseSeries(series::revert(h.truncated(order), order), source);
}

namespace {

std::int64_t checked_embedded_dim(int n, int max_degree, std::int64_t limit) {
    std::int64_t dim = 1; // the shared tail coordinate
    std::int64_t block = 1;
    for (int k = 0; k <= max_degree; ++k) {
        dim += block;
        if (dim > limit)
            throw std::invalid_argument("Embedding: coordinate count exceeds the memory budget");
        if (k < max_degree) {
            if (block > limit / n)
                throw std::invalid_argument("Embedding: coordinate count exceeds the memory budget");
            block *= n;
        }
    }
    return dim;
}

} // namespace

Embedding::Embedding(const Series& d, int source_dim, int max_degree, std::int64_t coord_limit)
    : n_(source_dim), max_degree_(max_degree) {
    if (source_dim < 1) throw std::invalid_argument("Embedding: source dimension must be >= 1");
    if (max_degree < 1 || max_degree > d.max_order())
        throw std::invalid_argument("Embedding: max_degree out of range");
    double mass = 0.0;
    scales_.assign(static_cast<std::size_t>(max_degree) + 1, 0.0);
    for (int k = 0; k <= max_degree; ++k) {
        const double dk = d[k];
        if (dk < -1e-12) throw std::invalid_argument("Embedding: negative series coefficient");
        scales_[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, dk));
        mass += std::max(0.0, dk);
    }
    double total = mass;
    for (int k = max_degree + 1; k <= d.max_order(); ++k) total += std::max(0.0, d[k]);
    if (total > 1.0 + 1e-9) throw std::invalid_argument("Embedding: series mass exceeds 1");
    tail_mass_ = std::max(0.0, 1.0 - mass);
    embedded_dim_ = checked_embedded_dim(source_dim, max_degree, coord_limit);
}

Embedding Embedding::build_auto(const Series& d, int source_dim, std::int64_t coord_budget,
                                double tail_target) {
    int best_fitting = -1;
    for (int K = 1; K <= d.max_order(); ++K) {
        std::int64_t dim;
        try {
            dim = checked_embedded_dim(source_dim, K, coord_budget);
        } catch (const std::invalid_argument&) {
            break;
        }
        (void)dim;
        best_fitting = K;
        double mass = 0.0;
        for (int k = 0; k <= K; ++k) mass += std::max(0.0, d[k]);
        if (1.0 - mass <= tail_target) return Embedding(d, source_dim, K, coord_budget);
    }
    if (best_fitting < 1) throw std::invalid_argument("Embedding: budget too small for degree 1");
    return Embedding(d, source_dim, best_fitting, coord_budget);
}

UnitVector Embedding::embed(const UnitVector& v) const {
    if (v.dim() != n_) throw std::invalid_argument("Embedding::embed: dimension mismatch");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(embedded_dim_));
    std::vector<double> power{1.0}; // v^{tensor k}, flattened, built incrementally
    for (int k = 0; k <= max_degree_; ++k) {
        const double s = scales_[static_cast<std::size_t>(k)];
        for (double x : power) out.push_back(s * x);
        if (k < max_degree_) {
            std::vector<double> next;
            next.reserve(power.size() * static_cast<std::size_t>(n_));
            for (double x : power)
                for (int i = 0; i < n_; ++i) next.push_back(x * v[i]);
            power = std::move(next);
        }
    }
    out.push_back(std::sqrt(tail_mass_));
    return UnitVector(std::move(out));
}

namespace {

double source_h(SourceKind kind, double x) {
    switch (kind) {
        case SourceKind::ort2: return corrfun::h_ort(2, x);
        case SourceKind::mixed: return corrfun::h_mixed(x);
        case SourceKind::maj4: return corrfun::h_maj(4, x);
        case SourceKind::identity: return x;
        case SourceKind::custom:
            throw std::logic_error("source_h: custom source has no evaluator");
    }
    throw std::logic_error("source_h: unknown source");
}

// Solve h(r) = rho for the odd increasing source correlation function by
// bisection, seeded with the series estimate.
double refine_inverse(SourceKind kind, double rho, double guess) {
    double lo = -1.0, hi = 1.0;
    if (std::abs(guess) < 1.0) {
        // widen a small bracket around the series estimate first
        double w = 0.1;
        lo = std::max(-1.0, guess - w);
        hi = std::min(1.0, guess + w);
        while ((source_h(kind, lo) > rho || source_h(kind, hi) < rho) && w < 2.0) {
            w *= 2.0;
            lo = std::max(-1.0, guess - w);
            hi = std::min(1.0, guess + w);
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (source_h(kind, mid) < rho)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double inverse_value(double rho, const InverseSeries& f) {
    if (!(std::abs(rho) <= 1.0 + 1e-12)) throw std::domain_error("inverse_value: |rho| > 1");
    rho = std::clamp(rho, -1.0, 1.0);
    if (rho == 1.0 || rho == -1.0) return rho; // h(+-1) = +-1 for admissible h
    const auto ev = f.evaluate(rho);
    if (ev.tail_bound <= 1e-12 || f.source() == SourceKind::custom) {
        if (!(std::abs(ev.value) <= 1.0 + 1e-9))
            throw std::runtime_error("inverse_value: series evaluation left [-1, 1]");
        return std::clamp(ev.value, -1.0, 1.0);
    }
    return refine_inverse(f.source(), rho, ev.value);
}

CorrEstimate exact_corr_oracle(double rho, const InverseSeries& f, int k,
                               std::int64_t trials, std::uint64_t seed) {
    if (k < 0) throw std::invalid_argument("exact_corr_oracle: k must be >= 0");
    if (trials < 1) throw std::invalid_argument("exact_corr_oracle: trials must be >= 1");
    const double r = inverse_value(rho, f);
    if (!(std::abs(r) <= 1.0)) throw std::runtime_error("exact_corr_oracle: |f(rho)| > 1");
    const double ortho = std::sqrt(std::max(0.0, 1.0 - r * r));
    std::int64_t sum = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        rng::TrialRng gen(seed, static_cast<std::uint64_t>(t));
        int alpha0 = 0;
        double bob = 0.0;
        for (int i = 0; i <= k; ++i) {
            const double gx = gen.gaussian();
            const double gy = r * gx + ortho * gen.gaussian();
            const int ai = gx >= 0.0 ? 1 : -1; // sgn(0) := +1
            if (i == 0) alpha0 = ai;
            const int ci = i == 0 ? 1 : alpha0 * ai;
            bob += ci * gy;
        }
        const int beta = bob >= 0.0 ? 1 : -1;
        sum += alpha0 * beta;
    }
    return CorrEstimate::from_sum(sum, trials);
}

} // namespace corrsim::krivine
