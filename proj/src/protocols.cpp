#include "corrsim/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace corrsim::protocols {

namespace {

int sgn(double x) { return x >= 0.0 ? 1 : -1; } // sgn(0) := +1

void check_same_dim(const UnitVector& a, const UnitVector& b, const char* who) {
    if (a.dim() != b.dim()) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

} // namespace

std::string to_string(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::nocomm: return "nocomm";
        case ProtocolKind::majority: return "maj";
        case ProtocolKind::orthant: return "ort";
        case ProtocolKind::transformed: return "transformed";
        case ProtocolKind::mixed: return "mixed";
    }
    return "?";
}

std::string Transcript::message_string() const {
    std::string s;
    s.reserve(message_bits.size());
    for (int b : message_bits) s.push_back(b > 0 ? '+' : '-');
    return s;
}

UnitVector sample_unit_vector(int n, rng::TrialRng& rng) {
    if (n < 1) throw std::invalid_argument("sample_unit_vector: n must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(n));
    double s = 0.0;
    do {
        s = 0.0;
        for (double& x : v) {
            x = rng.gaussian();
            s += x * x;
        }
    } while (s == 0.0);
    const double inv = 1.0 / std::sqrt(s);
    for (double& x : v) x *= inv;
    return UnitVector(std::move(v));
}

std::pair<UnitVector, UnitVector> sample_pair_with_rho(int n, double rho, rng::TrialRng& rng) {
    if (n < 2) throw std::invalid_argument("sample_pair_with_rho: n must be >= 2");
    if (!(std::abs(rho) <= 1.0)) throw std::domain_error("sample_pair_with_rho: |rho| > 1");
    const UnitVector a = sample_unit_vector(n, rng);
    // random direction orthogonal to a
    std::vector<double> u(static_cast<std::size_t>(n));
    double norm2 = 0.0;
    do {
        double proj = 0.0;
        for (int i = 0; i < n; ++i) {
            u[static_cast<std::size_t>(i)] = rng.gaussian();
            proj += u[static_cast<std::size_t>(i)] * a[i];
        }
        norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            u[static_cast<std::size_t>(i)] -= proj * a[i];
            norm2 += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
        }
    } while (norm2 < 1e-24);
    const double w = std::sqrt(std::max(0.0, 1.0 - rho * rho)) / std::sqrt(norm2);
    std::vector<double> b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = rho * a[i] + w * u[static_cast<std::size_t>(i)];
    return {a, UnitVector(std::move(b))};
}

Transcript run_nocomm(const UnitVector& a, const UnitVector& b, rng::TrialRng& rng) {
    check_same_dim(a, b, "run_nocomm");
    const UnitVector lambda = sample_unit_vector(a.dim(), rng);
    Transcript t;
    t.kind = ProtocolKind::nocomm;
    t.alpha = sgn(dot(a, lambda));
    t.beta = sgn(dot(b, lambda));
    return t;
}

Transcript run_majority(int k, const UnitVector& a, const UnitVector& b, rng::TrialRng& rng) {
    if (k < 0 || k % 2 != 0) throw std::invalid_argument("run_majority: k must be even and >= 0");
    check_same_dim(a, b, "run_majority");
    Transcript t;
    t.kind = ProtocolKind::majority;
    int alpha0 = 0;
    int maj_sum = 0;
    for (int i = 0; i <= k; ++i) {
        const UnitVector lambda = sample_unit_vector(a.dim(), rng);
        const int ai = sgn(dot(a, lambda));
        const int bi = sgn(dot(b, lambda));
        if (i == 0) {
            alpha0 = ai;
            maj_sum += bi;
        } else {
            const int ci = alpha0 * ai;
            t.message_bits.push_back(ci);
            maj_sum += ci * bi;
        }
    }
    t.alpha = alpha0;
    t.beta = maj_sum > 0 ? 1 : -1; // k+1 odd terms, no ties
    return t;
}

Transcript run_orthant(int k, const UnitVector& a, const UnitVector& b, rng::TrialRng& rng) {
    if (k < 0) throw std::invalid_argument("run_orthant: k must be >= 0");
    check_same_dim(a, b, "run_orthant");
    const int n = a.dim();
    Transcript t;
    t.kind = ProtocolKind::orthant;
    int alpha0 = 0;
    double bob = 0.0;
    for (int i = 0; i <= k; ++i) {
        // row i of the shared Gaussian matrix G, applied to both inputs
        double ga = 0.0, gb = 0.0;
        for (int j = 0; j < n; ++j) {
            const double g = rng.gaussian();
            ga += g * a[j];
            gb += g * b[j];
        }
        const int ai = sgn(ga);
        if (i == 0) alpha0 = ai;
        const int ci = i == 0 ? 1 : alpha0 * ai;
        if (i > 0) t.message_bits.push_back(ci);
        bob += ci * gb;
    }
    t.alpha = alpha0;
    t.beta = sgn(bob);
    return t;
}

Transcript run_transformed(const UnitVector& a, const UnitVector& b,
                           const krivine::Embedding& e, rng::TrialRng& rng) {
    Transcript t = run_orthant(2, e.embed(a), e.embed(b), rng);
    t.kind = ProtocolKind::transformed;
    return t;
}

Transcript run_mixed(const UnitVector& a, const UnitVector& b, const krivine::Embedding& e,
                     double p, rng::TrialRng& rng) {
    const UnitVector ea = e.embed(a), eb = e.embed(b);
    const bool one_bit = rng.bernoulli(p); // shared coin
    Transcript t = run_orthant(one_bit ? 1 : 2, ea, eb, rng);
    t.kind = ProtocolKind::mixed;
    return t;
}

int ProtocolConfig::max_message_bits() const {
    switch (kind) {
        case ProtocolKind::nocomm: return 0;
        case ProtocolKind::majority: return k;
        case ProtocolKind::orthant: return k;
        case ProtocolKind::transformed: return 2;
        case ProtocolKind::mixed: return 2;
    }
    return 0;
}

Transcript run_protocol(const ProtocolConfig& cfg, const UnitVector& a, const UnitVector& b,
                        rng::TrialRng& rng) {
    switch (cfg.kind) {
        case ProtocolKind::nocomm: return run_nocomm(a, b, rng);
        case ProtocolKind::majority: return run_majority(cfg.k, a, b, rng);
        case ProtocolKind::orthant: return run_orthant(cfg.k, a, b, rng);
        case ProtocolKind::transformed:
            if (!cfg.embedding) throw std::invalid_argument("run_protocol: missing embedding");
            return run_transformed(a, b, *cfg.embedding, rng);
        case ProtocolKind::mixed:
            if (!cfg.embedding) throw std::invalid_argument("run_protocol: missing embedding");
            return run_mixed(a, b, *cfg.embedding, cfg.mix_p, rng);
    }
    throw std::invalid_argument("run_protocol: unknown protocol");
}

namespace {

// Pre-embedded view of a configuration: transformed/mixed run the orthant
// protocol on embedded inputs, so the estimator embeds once instead of per
// trial. Transcripts are unchanged (embedding consumes no randomness).
struct PreparedRun {
    ProtocolConfig cfg;
    UnitVector a, b;

    Transcript run(rng::TrialRng& rng) const {
        switch (cfg.kind) {
            case ProtocolKind::nocomm: return run_nocomm(a, b, rng);
            case ProtocolKind::majority: return run_majority(cfg.k, a, b, rng);
            case ProtocolKind::orthant: return run_orthant(cfg.k, a, b, rng);
            case ProtocolKind::transformed: {
                Transcript t = run_orthant(2, a, b, rng);
                t.kind = ProtocolKind::transformed;
                return t;
            }
            case ProtocolKind::mixed: {
                const bool one_bit = rng.bernoulli(cfg.mix_p);
                Transcript t = run_orthant(one_bit ? 1 : 2, a, b, rng);
                t.kind = ProtocolKind::mixed;
                return t;
            }
        }
        throw std::invalid_argument("PreparedRun: unknown protocol");
    }
};

PreparedRun prepare(const ProtocolConfig& cfg, const UnitVector& a, const UnitVector& b) {
    if (cfg.kind == ProtocolKind::transformed || cfg.kind == ProtocolKind::mixed) {
        if (!cfg.embedding) throw std::invalid_argument("estimate_correlation: missing embedding");
        return {cfg, cfg.embedding->embed(a), cfg.embedding->embed(b)};
    }
    return {cfg, a, b};
}

} // namespace

CorrEstimate estimate_correlation(const ProtocolConfig& cfg, const UnitVector& a,
                                  const UnitVector& b, std::int64_t trials, std::uint64_t seed,
                                  int threads) {
    if (trials < 1) throw std::invalid_argument("estimate_correlation: trials must be >= 1");
    const PreparedRun prep = prepare(cfg, a, b);
    int nthreads = threads > 0 ? threads
                               : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    nthreads = static_cast<int>(std::min<std::int64_t>(nthreads, trials));

    std::vector<std::int64_t> partial(static_cast<std::size_t>(nthreads), 0);
    auto worker = [&](int w) {
        const std::int64_t lo = trials * w / nthreads;
        const std::int64_t hi = trials * (w + 1) / nthreads;
        std::int64_t sum = 0;
        for (std::int64_t t = lo; t < hi; ++t) {
            rng::TrialRng gen(seed, static_cast<std::uint64_t>(t));
            const Transcript tr = prep.run(gen);
            sum += tr.alpha * tr.beta;
        }
        partial[static_cast<std::size_t>(w)] = sum;
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }
    std::int64_t sum = 0;
    for (std::int64_t s : partial) sum += s;
    return CorrEstimate::from_sum(sum, trials);
}

double MessageStats::max_frequency() const {
    std::int64_t best = 0;
    for (const auto& [msg, count] : counts) best = std::max(best, count);
    return trials > 0 ? static_cast<double>(best) / static_cast<double>(trials) : 0.0;
}

double MessageStats::max_frequency_stderr() const {
    const double f = max_frequency();
    return trials > 0 ? std::sqrt(std::max(0.0, f * (1.0 - f) / static_cast<double>(trials))) : 0.0;
}

SimulationSummary run_simulation(const ProtocolConfig& cfg, const UnitVector& a,
                                 const UnitVector& b, std::int64_t trials, std::uint64_t seed,
                                 int threads) {
    if (trials < 1) throw std::invalid_argument("run_simulation: trials must be >= 1");
    const PreparedRun prep = prepare(cfg, a, b);
    int nthreads = threads > 0 ? threads
                               : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    nthreads = static_cast<int>(std::min<std::int64_t>(nthreads, trials));

    struct Partial {
        std::int64_t sum = 0;
        std::int64_t bits = 0;
        int max_bits = 0;
        std::map<std::string, std::int64_t> counts;
    };
    std::vector<Partial> partial(static_cast<std::size_t>(nthreads));
    auto worker = [&](int w) {
        Partial p;
        const std::int64_t lo = trials * w / nthreads;
        const std::int64_t hi = trials * (w + 1) / nthreads;
        for (std::int64_t t = lo; t < hi; ++t) {
            rng::TrialRng gen(seed, static_cast<std::uint64_t>(t));
            const Transcript tr = prep.run(gen);
            p.sum += tr.alpha * tr.beta;
            p.bits += static_cast<std::int64_t>(tr.message_bits.size());
            p.max_bits = std::max(p.max_bits, static_cast<int>(tr.message_bits.size()));
            ++p.counts[tr.message_string()];
        }
        partial[static_cast<std::size_t>(w)] = std::move(p);
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }
    SimulationSummary out;
    std::int64_t sum = 0, bits = 0;
    for (const Partial& p : partial) {
        sum += p.sum;
        bits += p.bits;
        out.messages.max_bits = std::max(out.messages.max_bits, p.max_bits);
        for (const auto& [msg, count] : p.counts) out.messages.counts[msg] += count;
    }
    out.correlation = CorrEstimate::from_sum(sum, trials);
    out.messages.trials = trials;
    out.messages.avg_bits = static_cast<double>(bits) / static_cast<double>(trials);
    return out;
}

MessageStats transcript_stats(const ProtocolConfig& cfg,
                              const std::vector<std::pair<UnitVector, UnitVector>>& inputs,
                              std::int64_t trials, std::uint64_t seed) {
    if (inputs.empty()) throw std::invalid_argument("transcript_stats: no inputs");
    if (trials < 1) throw std::invalid_argument("transcript_stats: trials must be >= 1");
    std::vector<PreparedRun> prepared;
    prepared.reserve(inputs.size());
    for (const auto& [a, b] : inputs) prepared.push_back(prepare(cfg, a, b));

    MessageStats stats;
    stats.trials = trials;
    std::int64_t total_bits = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        rng::TrialRng gen(seed, static_cast<std::uint64_t>(t));
        const auto idx = static_cast<std::size_t>(gen.uniform() * static_cast<double>(prepared.size()));
        const Transcript tr = prepared[std::min(idx, prepared.size() - 1)].run(gen);
        ++stats.counts[tr.message_string()];
        total_bits += static_cast<std::int64_t>(tr.message_bits.size());
        stats.max_bits = std::max(stats.max_bits, static_cast<int>(tr.message_bits.size()));
    }
    stats.avg_bits = static_cast<double>(total_bits) / static_cast<double>(trials);
    return stats;
}

} // namespace corrsim::protocols
