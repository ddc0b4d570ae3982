#ifndef CORRSIM_PROTOCOLS_HPP
#define CORRSIM_PROTOCOLS_HPP

#include "corrsim/krivine.hpp"
#include "corrsim/rng.hpp"
#include "corrsim/stats.hpp"
#include "corrsim/unit_vector.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace corrsim::protocols {

enum class ProtocolKind { nocomm, majority, orthant, transformed, mixed };

std::string to_string(ProtocolKind k);

/// One protocol run: both outputs and the bits Alice sent, in order.
struct Transcript {
    int alpha = 0;                  // in {-1, +1}
    int beta = 0;                   // in {-1, +1}
    std::vector<int> message_bits;  // each in {-1, +1}
    ProtocolKind kind = ProtocolKind::nocomm;

    std::string message_string() const; // '+'/'-' per bit, "" for no bits
};

/// Protocol 1: shared uniform unit vector, both parties output the sign of
/// their inner product with it. No communication.
Transcript run_nocomm(const UnitVector& a, const UnitVector& b, rng::TrialRng& rng);

/// Protocol 2: k+1 shared hyperplanes; Alice outputs alpha_0 and sends
/// alpha_0*alpha_i (k bits); Bob outputs the majority of
/// beta_0, alpha_0 alpha_1 beta_1, ..., alpha_0 alpha_k beta_k. k even.
Transcript run_majority(int k, const UnitVector& a, const UnitVector& b, rng::TrialRng& rng);

/// Protocol 3: shared (k+1) x n Gaussian matrix G; Alice outputs
/// sgn((Ga)_0) and sends the k orthant bits c_i = alpha_0 alpha_i; Bob
/// outputs sgn(<Gb, (1, c_1, ..., c_k)>).
Transcript run_orthant(int k, const UnitVector& a, const UnitVector& b, rng::TrialRng& rng);

/// Protocol 4: run the 2-bit orthant protocol on the embedded inputs.
Transcript run_transformed(const UnitVector& a, const UnitVector& b,
                           const krivine::Embedding& e, rng::TrialRng& rng);

/// Mixed protocol: with probability p (shared coin) the 1-bit orthant
/// protocol, otherwise the 2-bit one, both on inputs embedded with the mixed
/// inverse series.
Transcript run_mixed(const UnitVector& a, const UnitVector& b,
                     const krivine::Embedding& e, double p, rng::TrialRng& rng);

/// Full protocol configuration for the estimator front ends.
struct ProtocolConfig {
    ProtocolKind kind = ProtocolKind::nocomm;
    int k = 0;                                   // majority / orthant
    const krivine::Embedding* embedding = nullptr; // transformed / mixed
    double mix_p = 0.0;                          // mixed

    /// Worst-case message bits this configuration can send.
    int max_message_bits() const;
};

Transcript run_protocol(const ProtocolConfig& cfg, const UnitVector& a, const UnitVector& b,
                        rng::TrialRng& rng);

/// Monte Carlo estimate of E[alpha beta] over `trials` runs. Trials are
/// keyed by (seed, trial index), so the result is bit-identical no matter
/// how many threads execute it.
CorrEstimate estimate_correlation(const ProtocolConfig& cfg, const UnitVector& a,
                                  const UnitVector& b, std::int64_t trials, std::uint64_t seed,
                                  int threads = 0);

struct MessageStats {
    std::map<std::string, std::int64_t> counts; // by message string
    std::int64_t trials = 0;
    double avg_bits = 0.0;
    int max_bits = 0;

    double max_frequency() const;
    /// Binomial standard error of the most frequent message's frequency.
    double max_frequency_stderr() const;
};

/// Message-string statistics over runs on input pairs drawn uniformly from
/// `inputs` using the shared per-trial stream.
MessageStats transcript_stats(const ProtocolConfig& cfg,
                              const std::vector<std::pair<UnitVector, UnitVector>>& inputs,
                              std::int64_t trials, std::uint64_t seed);

/// One pass producing both the correlation estimate and the message
/// statistics of the same transcript stream.
struct SimulationSummary {
    CorrEstimate correlation;
    MessageStats messages;
};

SimulationSummary run_simulation(const ProtocolConfig& cfg, const UnitVector& a,
                                 const UnitVector& b, std::int64_t trials, std::uint64_t seed,
                                 int threads = 0);

/// Uniformly random unit vector (normalized Gaussian).
UnitVector sample_unit_vector(int n, rng::TrialRng& rng);

/// A uniformly oriented pair with exact inner product rho (n >= 2).
std::pair<UnitVector, UnitVector> sample_pair_with_rho(int n, double rho, rng::TrialRng& rng);

} // namespace corrsim::protocols

#endif
