#ifndef CORRSIM_KRIVINE_HPP
#define CORRSIM_KRIVINE_HPP

#include "corrsim/series.hpp"
#include "corrsim/stats.hpp"
#include "corrsim/unit_vector.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrsim::krivine {

/// Which correlation function an inverse series came from; the oracle uses
/// this to evaluate the exact inverse by root finding when the truncated
/// series is not accurate enough.
enum class SourceKind { ort2, mixed, maj4, identity, custom };

std::string to_string(SourceKind k);

/// Thrown when a computed inverse violates the positivity or d_k <= 1/k
/// bounds that hold for inverses of admissible correlation functions.
struct InverseBoundError : std::runtime_error {
    explicit InverseBoundError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Inverse correlation series f = h^{-1} with its checked properties:
/// nonnegative odd coefficients (slack 1e-15) bounded by 1/k (slack 1e-12),
/// total mass at most 1 + 1e-9.
class InverseSeries {
  public:
    InverseSeries(series::Series d, SourceKind source);

    const series::Series& coefficients() const { return d_; }
    SourceKind source() const { return source_; }
    int max_order() const { return d_.max_order(); }

    /// Sum of coefficients through degree K.
    double partial_mass(int K) const;
    double total_mass() const { return partial_mass(d_.max_order()); }
    double tail_mass_beyond(int K) const { return std::max(0.0, 1.0 - partial_mass(K)); }

    double min_coefficient() const;
    /// max over represented odd k of d_k - 1/k; negative values are margin.
    double max_bound_excess() const;

    struct Eval {
        double value;
        double tail_bound;
    };
    /// Partial-sum evaluation at |x| <= 1 with the positivity-justified tail bound
    /// tailMass * |x|^(maxOrder+2).
    Eval evaluate(double x) const;

  private:
    series::Series d_;
    SourceKind source_;
};

/// Reverts h (odd, h_1 > 0) and wraps the result with the bound checks;
/// any violation throws InverseBoundError identifying the offending degree.
InverseSeries invert_h(const series::Series& h, int order, SourceKind source = SourceKind::custom);

/// Truncated tensor-power embedding: degrees 0..K scaled by sqrt(d_k), plus
/// one shared coordinate sqrt(tailMass) that keeps every embedded vector
/// exactly unit norm at the cost of biasing inner products upward by at most
/// tailMass (total deviation from f(rho) at most 2 tailMass).
class Embedding {
  public:
    /// Embeds vectors of dimension source_dim using degrees 0..max_degree.
    /// Requires nonnegative coefficients (slack 1e-12) with mass <= 1 + 1e-9.
    Embedding(const series::Series& d, int source_dim, int max_degree,
              std::int64_t coord_limit = kDefaultCoordLimit);

    /// Picks the truncation automatically: the smallest degree meeting
    /// tail_target if it fits in coord_budget, otherwise the largest degree
    /// that fits.
    static Embedding build_auto(const series::Series& d, int source_dim,
                                std::int64_t coord_budget = kDefaultCoordLimit,
                                double tail_target = 1e-3);

    int source_dim() const { return n_; }
    int truncation_order() const { return max_degree_; }
    double tail_mass() const { return tail_mass_; }
    std::int64_t embedded_dim() const { return embedded_dim_; }
    const std::vector<double>& degree_scales() const { return scales_; }

    UnitVector embed(const UnitVector& v) const;

    static constexpr std::int64_t kDefaultCoordLimit = 2'000'000;

  private:
    std::vector<double> scales_; // sqrt(d_k) for k = 0..max_degree
    int n_;
    int max_degree_;
    double tail_mass_;
    std::int64_t embedded_dim_;
};

/// Distribution-level simulation of the transformed protocol: each of the
/// k+1 shared-Gaussian rows induces an independent bivariate normal pair
/// with correlation f(rho), so the whole run reduces to sampling those pairs
/// and applying the orthant decision rules. Zero-bias: f(rho) is evaluated
/// through the series and refined by root finding against the source
/// correlation function whenever the series tail bound is not negligible.
CorrEstimate exact_corr_oracle(double rho, const InverseSeries& f, int k,
                               std::int64_t trials, std::uint64_t seed);

/// The exact inverse value f(rho) the oracle uses (exposed for tests).
double inverse_value(double rho, const InverseSeries& f);

} // namespace corrsim::krivine

#endif
