// Acceptance suite: every release criterion in one binary. Each numbered
// criterion prints exactly one PASS/FAIL line; the process exits 0 iff all
// pass. --trials scales the Monte Carlo budget for quicker dev runs.

#include "corrsim/corrfun.hpp"
#include "corrsim/geom.hpp"
#include "corrsim/krivine.hpp"
#include "corrsim/protocols.hpp"
#include "corrsim/quantum.hpp"
#include "corrsim/series.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace corrsim;

namespace {

constexpr double kPi = std::numbers::pi;

struct Checker {
    int failed = 0;
    int total = 0;

    void criterion(int num, const std::string& label, bool ok, const std::string& detail) {
        ++total;
        if (!ok) ++failed;
        std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", num, label.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
    }
};

struct SubChecks {
    bool ok = true;
    double worst_ratio = 0.0; // |diff| / tolerance, worst case
    std::string note;

    void absorb(double diff, double tol, const std::string& where) {
        const double ratio = tol > 0.0 ? diff / tol : (diff == 0.0 ? 0.0 : 1e300);
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            note = where;
        }
        if (diff > tol) ok = false;
    }

    std::string detail() const {
        std::ostringstream os;
        os << "worst |diff|/tol = " << worst_ratio;
        if (!note.empty()) os << " (" << note << ")";
        return os.str();
    }
};

std::vector<double> grid21() {
    std::vector<double> g;
    for (int i = 0; i <= 20; ++i) g.push_back(-1.0 + i / 10.0);
    return g;
}

std::pair<UnitVector, UnitVector> pair_at(int n, double rho, std::uint64_t tag) {
    rng::TrialRng gen(rng::mix64(0xACCE97ULL) + tag, 0);
    return protocols::sample_pair_with_rho(n, rho, gen);
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

// grid comparison of a protocol estimate against an analytic curve;
// round_off covers the closed form's floating error where stderr vanishes.
SubChecks grid_protocol_check(const protocols::ProtocolConfig& cfg,
                              const std::function<double(double)>& analytic, int n,
                              std::int64_t trials, std::uint64_t seed, double round_off,
                              double extra_tol = 0.0) {
    SubChecks sc;
    std::uint64_t tag = 0;
    for (double rho : grid21()) {
        const auto [a, b] = pair_at(n, rho, seed * 1000 + tag);
        const CorrEstimate est =
            protocols::estimate_correlation(cfg, a, b, trials, seed + tag);
        sc.absorb(std::abs(est.mean - analytic(rho)),
                  4.0 * est.std_error + round_off + extra_tol, "rho = " + fmt(rho));
        ++tag;
    }
    return sc;
}

} // namespace

int main(int argc, char** argv) {
    std::int64_t trials = 1000000;
    std::uint64_t seed = 20250901;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--trials") == 0 && i + 1 < argc) trials = std::atoll(argv[++i]);
        if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) seed = std::strtoull(argv[++i], nullptr, 10);
    }
    std::printf("acceptance suite: trials=%lld seed=%llu\n", static_cast<long long>(trials),
                static_cast<unsigned long long>(seed));
    Checker ck;

    const series::Series h2s = corrfun::h_ort2_series(61);
    const krivine::InverseSeries f_ort2 = krivine::invert_h(h2s, 61, krivine::SourceKind::ort2);
    const krivine::InverseSeries f_mixed =
        krivine::invert_h(corrfun::h_mixed_series(61), 61, krivine::SourceKind::mixed);
    const krivine::Embedding embed3(f_ort2.coefficients(), 3, 5);   // 365 coordinates
    const krivine::Embedding embed2(f_ort2.coefficients(), 2, 9);   // 1024 coordinates
    const krivine::Embedding embed2s(f_ort2.coefficients(), 2, 7);  // 256 coordinates
    const krivine::Embedding embed_mixed(f_mixed.coefficients(), 3, 5);

    // 1. Protocol 1 vs (2/pi) arcsin
    {
        protocols::ProtocolConfig cfg;
        cfg.kind = protocols::ProtocolKind::nocomm;
        const SubChecks sc = grid_protocol_check(
            cfg, [](double r) { return corrfun::h_nocomm(r); }, 3, trials, seed + 100, 1e-12);
        ck.criterion(1, "Protocol 1 correlation matches (2/pi) arcsin(rho) on the grid", sc.ok,
                     sc.detail());
    }

    // 2. orthant closed forms, k = 0 and k = 1
    {
        protocols::ProtocolConfig cfg;
        cfg.kind = protocols::ProtocolKind::orthant;
        cfg.k = 0;
        SubChecks sc = grid_protocol_check(
            cfg, [](double r) { return corrfun::h_ort(0, r); }, 3, trials, seed + 200, 1e-12);
        cfg.k = 1;
        const SubChecks sc1 = grid_protocol_check(
            cfg, [](double r) { return corrfun::h_ort(1, r); }, 3, trials, seed + 300, 1e-12);
        sc.ok = sc.ok && sc1.ok;
        if (sc1.worst_ratio > sc.worst_ratio) {
            sc.worst_ratio = sc1.worst_ratio;
            sc.note = sc1.note + " (k=1)";
        }
        ck.criterion(2, "orthant k=0/k=1 correlations match the closed forms", sc.ok, sc.detail());
    }

    // 3. k=2: protocol MC vs quadrature, endpoint, and the Gaussian-orthant oracle
    {
        protocols::ProtocolConfig cfg;
        cfg.kind = protocols::ProtocolKind::orthant;
        cfg.k = 2;
        SubChecks sc = grid_protocol_check(
            cfg, [](double r) { return corrfun::h_ort(2, r); }, 3, trials, seed + 400, 1e-8);
        const double endpoint = std::abs(corrfun::h_ort(2, 1.0) - 1.0);
        sc.absorb(endpoint, 1e-8, "h2(1) endpoint");
        std::uint64_t tag = 0;
        for (double rho : grid21()) {
            const auto est = geom::orthant_prob_mc(geom::orthant_model(2, rho), trials,
                                                   seed + 500 + tag++);
            sc.absorb(std::abs(est.corr() - corrfun::h_ort(2, rho)),
                      4.0 * est.corr_stderr() + 1e-8, "oracle rho = " + fmt(rho));
        }
        ck.criterion(3, "orthant k=2 MC, quadrature endpoint, and Gaussian-orthant oracle agree",
                     sc.ok, sc.detail());
    }

    // 4. transformed protocol = rho (up to the declared tail), 2 bits always
    {
        protocols::ProtocolConfig cfg;
        cfg.kind = protocols::ProtocolKind::transformed;
        cfg.embedding = &embed3;
        SubChecks sc;
        bool two_bits = true;
        std::uint64_t tag = 0;
        for (double rho : grid21()) {
            const auto [a, b] = pair_at(3, rho, 600000 + tag);
            const protocols::SimulationSummary sum =
                protocols::run_simulation(cfg, a, b, trials, seed + 600 + tag);
            sc.absorb(std::abs(sum.correlation.mean - rho),
                      4.0 * sum.correlation.std_error + 2.0 * embed3.tail_mass(),
                      "embedded rho = " + fmt(rho));
            two_bits = two_bits && sum.messages.max_bits == 2 && sum.messages.avg_bits == 2.0;
            const CorrEstimate oracle =
                krivine::exact_corr_oracle(rho, f_ort2, 2, trials, seed + 700 + tag);
            sc.absorb(std::abs(oracle.mean - rho), 4.0 * oracle.std_error + 1e-12,
                      "oracle rho = " + fmt(rho));
            ++tag;
        }
        sc.ok = sc.ok && two_bits;
        ck.criterion(4,
                     "transformed protocol reproduces rho (2 bits worst case); oracle is unbiased",
                     sc.ok, sc.detail() + (two_bits ? "" : "; message length violated"));
    }

    // 5. sign structure of the 2-bit orthant series
    {
        SubChecks sc;
        sc.absorb(std::abs(h2s[1] - 2.0 * std::sqrt(3.0) / kPi), 1e-9, "c1");
        bool all_negative = true;
        for (int d = 3; d <= 61; d += 2) all_negative = all_negative && h2s[d] < -1e-15;
        const corrfun::SignReport rep = corrfun::check_h2_coeff_signs(61);
        const series::Series H2 = corrfun::h2_H2_series(60);
        sc.absorb(std::abs(H2[0] - (3.0 - 0.75 * kPi)), 1e-9, "H2(0)");
        sc.absorb(std::abs(H2[1] - (3.0 + kPi) / 2.0), 1e-9, "H2'(0)");
        sc.ok = sc.ok && all_negative && rep.ok;
        ck.criterion(5, "c1 = 2 sqrt3/pi, c_{2k+1} < 0 through 61, H2 coefficients >= 0",
                     sc.ok, sc.detail());
    }

    // 6. inverse-series bounds for both inverses
    {
        bool ok = true;
        std::ostringstream os;
        for (const auto* f : {&f_ort2, &f_mixed}) {
            ok = ok && f->min_coefficient() >= -1e-15 && f->max_bound_excess() <= 1e-12;
            double prev = 0.0;
            for (int K = 1; K <= 61; K += 2) {
                const double pm = f->partial_mass(K);
                ok = ok && pm >= prev - 1e-15;
                prev = pm;
            }
            ok = ok && prev <= 1.0 + 1e-9;
        }
        os << "ort2: min d = " << f_ort2.min_coefficient() << ", mass = " << f_ort2.total_mass()
           << "; mixed: min d = " << f_mixed.min_coefficient()
           << ", mass = " << f_mixed.total_mass();
        ck.criterion(6, "inverse-series coefficients in [-1e-15, 1/k + 1e-12], mass <= 1", ok,
                     os.str());
    }

    // 7. reversion of known inverse pairs
    {
        SubChecks sc;
        const series::Series f(std::vector<double>{0.0, 0.9, 0.0, 0.1, 0.0, 0.0},
                               series::Parity::odd);
        const series::Series g = series::revert(f, 5);
        sc.absorb(std::abs(g[1] - 1.11), 0.005, "g1");
        sc.absorb(std::abs(g[3] + 0.15), 0.005, "g3");
        sc.absorb(std::abs(g[5] - 0.06), 0.005, "g5");
        const series::Series h(std::vector<double>{0.0, 1.0, 0.0, 0.1, 0.0, -0.1},
                               series::Parity::odd);
        sc.absorb(std::abs(series::revert(h, 5)[3] + 0.1), 1e-9, "counterexample d3");
        ck.criterion(7, "reversion reproduces the known inverse-pair examples", sc.ok, sc.detail());
    }

    // 8. the 1.82-bit protocol
    {
        SubChecks sc;
        const double p = corrfun::mixing_p();
        const double reference = (8.0 - 2.0 * kPi) / (8.0 + std::sqrt(6.0) * kPi - 2.0 * kPi);
        sc.absorb(std::abs(p - reference), 1e-12, "closed form");
        sc.absorb(std::abs(p - 0.18240479793619065), 1e-12, "frozen digits");

        protocols::ProtocolConfig cfg;
        cfg.kind = protocols::ProtocolKind::mixed;
        cfg.embedding = &embed_mixed;
        cfg.mix_p = p;
        const auto [a, b] = pair_at(3, 0.5, 800);
        const protocols::SimulationSummary sum =
            protocols::run_simulation(cfg, a, b, trials, seed + 800);
        sc.absorb(std::abs(sum.messages.avg_bits - (2.0 - p)),
                  4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), "avg bits");

        const series::Series H3 = corrfun::mixed_H3_series(40);
        const series::Series H4 = corrfun::mixed_H4_series(40);
        sc.absorb(std::abs(H3[0] - (4.0 - kPi) / std::sqrt(2.0)), 1e-9, "H3(0)");
        sc.absorb(std::abs(H3[1] - (20.0 + 9.0 * kPi) / (12.0 * std::sqrt(2.0))), 1e-9, "H3'(0)");
        sc.absorb(std::abs(H4[0] - (316.0 - 27.0 * kPi) / (108.0 * std::sqrt(3.0))), 1e-9, "H4(0)");
        sc.ok = sc.ok && corrfun::check_mixed_signs(61).ok;
        ck.criterion(8, "mixing p, 2-p average communication, and the H3/H4 constants", sc.ok,
                     sc.detail());
    }

    // 9. geometry: dihedral angles, Schlaefli derivative, Girard identity
    {
        SubChecks sc;
        for (double rho : {-0.9, -0.4, 0.0, 0.4, 0.9}) {
            const auto lam = geom::dihedral_angles(
                geom::SphericalSimplex(geom::orthant_simplex_vertices(2, rho)));
            sc.absorb(std::abs(lam[0] - std::acos(-rho / std::sqrt(3.0))), 1e-9,
                      "lambda01 rho = " + fmt(rho));
            sc.absorb(std::abs(lam[2] - kPi / 2.0), 1e-9, "lambda03 rho = " + fmt(rho));
        }
        for (double rho : {-0.6, -0.2, 0.1, 0.5, 0.7}) {
            const double h = 1e-4;
            const double fd = (geom::tetra_volume(rho + h) - geom::tetra_volume(rho - h)) / (2.0 * h);
            const double integrand = 1.5 * std::acos(rho * rho / (3.0 - 2.0 * rho * rho)) /
                                     std::sqrt(3.0 - rho * rho);
            sc.absorb(std::abs(fd - integrand), 1e-6, "dVol/drho rho = " + fmt(rho));
        }
        for (double rho : {-0.8, -0.25, 0.0, 0.35, 0.85}) {
            const auto v = geom::orthant_simplex_vertices(1, rho);
            const double area = geom::girard_area(v[0], v[1], v[2]);
            sc.absorb(std::abs(8.0 * area / (4.0 * kPi) - 1.0 - corrfun::h_ort(1, rho)), 1e-10,
                      "girard rho = " + fmt(rho));
        }
        ck.criterion(9, "wedge dihedral angles, Schlaefli derivative, Girard area identity",
                     sc.ok, sc.detail());
    }

    // 10. the quantum-to-vector reduction identity
    {
        SubChecks sc;
        for (int d : {2, 3}) {
            for (int rep = 0; rep < 50; ++rep) {
                rng::TrialRng gen(seed + 900 + static_cast<std::uint64_t>(d),
                                  static_cast<std::uint64_t>(rep));
                const quantum::DensityMatrix rho = quantum::random_density(d, gen);
                const quantum::Observable A = quantum::random_observable(d, gen);
                const quantum::Observable B = quantum::random_observable(d, gen);
                const quantum::ReducedVectors rv = quantum::reduce_to_vectors(rho, A, B);
                sc.absorb(std::abs(dot(rv.a, rv.b) - rv.source_expectation), 1e-10, "identity");
                sc.absorb(std::abs(rv.raw_norm_a - 1.0), 1e-10, "norm a");
                sc.absorb(std::abs(rv.raw_norm_b - 1.0), 1e-10, "norm b");
            }
        }
        ck.criterion(10, "reduction: <a,b> = Tr(A x B rho) and unit norms on random instances",
                     sc.ok, sc.detail());
    }

    // 11. CHSH game values
    {
        SubChecks sc;
        protocols::ProtocolConfig tr;
        tr.kind = protocols::ProtocolKind::transformed;
        tr.embedding = &embed2;
        const auto game = quantum::chsh_game_value(tr, trials, seed + 1000);
        const double quantum_value = 0.5 + 0.5 / std::sqrt(2.0);
        sc.absorb(std::abs(game.win_rate - quantum_value),
                  4.0 * game.std_error + 2.0 * embed2.tail_mass(), "transformed");

        const auto fixed = quantum::chsh_always_same_output();
        sc.absorb(std::abs(fixed.win_rate - 0.75), 0.0, "always-same-output");

        protocols::ProtocolConfig nc;
        nc.kind = protocols::ProtocolKind::nocomm;
        const auto local = quantum::chsh_game_value(nc, trials, seed + 1100);
        if (local.win_rate > 0.75 + 4.0 * local.std_error) sc.ok = false;
        ck.criterion(11, "CHSH: transformed ~ 0.8536, always-same = 0.75, Protocol 1 <= 0.75",
                     sc.ok, sc.detail());
    }

    // 12. endpoint sensitivity and the transcript bound
    {
        SubChecks sc;
        const double ratio = corrfun::b_eps_analytic(1e-3) / (8.0 * 1e-3 / kPi);
        const bool ratio_ok = ratio >= 0.99 && ratio <= 1.01;
        if (!ratio_ok) sc.ok = false;

        protocols::ProtocolConfig tr;
        tr.kind = protocols::ProtocolKind::transformed;
        tr.embedding = &embed2s;
        const auto pairs = quantum::chsh_vector_pairs();
        const std::vector<std::pair<UnitVector, UnitVector>> inputs(pairs.begin(), pairs.end());
        const protocols::MessageStats stats =
            protocols::transcript_stats(tr, inputs, trials, seed + 1200);
        const double bound = (3.0 - std::sqrt(2.0)) / 2.0;
        sc.absorb(std::max(0.0, stats.max_frequency() - bound),
                  4.0 * stats.max_frequency_stderr(), "transcript bound");
        std::ostringstream os;
        os << "B ratio = " << ratio << ", max transcript freq = " << stats.max_frequency();
        ck.criterion(12, "B(1e-3) within 1% of 8 eps/pi; transcript frequency below (3-sqrt2)/2",
                     sc.ok && ratio_ok, os.str());
    }

    // 13. property suite
    {
        bool ok = true;
        std::ostringstream os;
        // oddness / endpoints / monotonicity for every correlation function
        const std::pair<corrfun::Kind, int> kinds[] = {
            {corrfun::Kind::nocomm, 0}, {corrfun::Kind::maj, 0}, {corrfun::Kind::maj, 2},
            {corrfun::Kind::maj, 4},    {corrfun::Kind::ort, 0}, {corrfun::Kind::ort, 1},
            {corrfun::Kind::ort, 2},    {corrfun::Kind::mixed, 0}};
        for (const auto& [kind, kk] : kinds) {
            const corrfun::CorrelationFunction cf = corrfun::make_correlation(kind, kk);
            const double tol =
                (kind == corrfun::Kind::ort && kk == 2) || kind == corrfun::Kind::mixed ? 1e-6
                                                                                        : 1e-8;
            ok = ok && std::abs(cf(1.0) - 1.0) <= tol && std::abs(cf(-1.0) + 1.0) <= tol;
            double prev = -1.0 - 1e-9;
            for (int i = 0; i <= 200; ++i) {
                const double r = -1.0 + i / 100.0;
                const double v = cf(r);
                ok = ok && std::abs(v + cf(-r)) <= tol && v >= prev - tol;
                prev = v;
            }
        }
        if (!ok) os << "correlation-function invariants failed; ";

        // reversion round trip (error relative to the inverse's coefficient scale)
        for (std::uint64_t rep = 0; rep < 10 && ok; ++rep) {
            rng::TrialRng gen(seed + 1300, rep);
            std::vector<double> c(42, 0.0);
            c[1] = 0.5 + 1.5 * gen.uniform();
            for (int d = 3; d <= 41; d += 2) c[static_cast<std::size_t>(d)] = 0.4 * gen.uniform() - 0.2;
            const series::Series f(c, series::Parity::odd);
            const series::Series g = series::revert(f, 41);
            const series::Series round = series::compose(f, g, 41);
            double scale = 1.0;
            for (int d = 1; d <= 41; ++d) scale = std::max(scale, std::abs(g[d]));
            ok = ok && std::abs(round[1] - 1.0) <= 1e-9 * scale;
            for (int d = 2; d <= 41; ++d) ok = ok && std::abs(round[d]) <= 1e-9 * scale;
        }
        if (!ok && os.str().empty()) os << "reversion round trip failed; ";

        // marginal uniformity + seed determinism + rotation invariance
        const std::int64_t prop_trials = std::min<std::int64_t>(trials, 200000);
        const auto [a, b] = pair_at(3, 0.55, 1400);
        const protocols::ProtocolConfig configs[] = {
            {protocols::ProtocolKind::nocomm, 0, nullptr, 0.0},
            {protocols::ProtocolKind::majority, 2, nullptr, 0.0},
            {protocols::ProtocolKind::orthant, 2, nullptr, 0.0},
            {protocols::ProtocolKind::transformed, 0, &embed3, 0.0},
            {protocols::ProtocolKind::mixed, 0, &embed_mixed, corrfun::mixing_p()},
        };
        for (const auto& cfg : configs) {
            std::int64_t alpha_pos = 0, beta_pos = 0;
            for (std::int64_t t = 0; t < prop_trials; ++t) {
                rng::TrialRng gen(seed + 1500, static_cast<std::uint64_t>(t));
                const protocols::Transcript trn = protocols::run_protocol(cfg, a, b, gen);
                alpha_pos += trn.alpha > 0;
                beta_pos += trn.beta > 0;
            }
            const double se = 0.5 / std::sqrt(static_cast<double>(prop_trials));
            const double da = std::abs(static_cast<double>(alpha_pos) / prop_trials - 0.5);
            const double db = std::abs(static_cast<double>(beta_pos) / prop_trials - 0.5);
            if (da > 4.0 * se || db > 4.0 * se) {
                ok = false;
                os << "marginals not uniform for " << to_string(cfg.kind) << "; ";
            }
        }

        protocols::ProtocolConfig oc;
        oc.kind = protocols::ProtocolKind::orthant;
        oc.k = 2;
        const CorrEstimate e1 = protocols::estimate_correlation(oc, a, b, 50000, seed + 1600, 1);
        const CorrEstimate e2 = protocols::estimate_correlation(oc, a, b, 50000, seed + 1600, 4);
        if (e1.mean != e2.mean) {
            ok = false;
            os << "seed determinism violated; ";
        }

        rng::TrialRng rot_gen(seed + 1700, 0);
        const auto [ra, rb] = [&] {
            // shared random rotation applied to both inputs via Gram-Schmidt
            std::vector<std::vector<double>> q;
            for (int r = 0; r < 3; ++r) {
                std::vector<double> v(3);
                for (double& x : v) x = rot_gen.gaussian();
                for (const auto& prevrow : q) {
                    double proj = 0.0;
                    for (int i = 0; i < 3; ++i) proj += v[static_cast<std::size_t>(i)] * prevrow[static_cast<std::size_t>(i)];
                    for (int i = 0; i < 3; ++i) v[static_cast<std::size_t>(i)] -= proj * prevrow[static_cast<std::size_t>(i)];
                }
                double nn = 0.0;
                for (double x : v) nn += x * x;
                nn = std::sqrt(nn);
                for (double& x : v) x /= nn;
                q.push_back(std::move(v));
            }
            auto apply = [&](const UnitVector& u) {
                std::vector<double> outv(3, 0.0);
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        outv[static_cast<std::size_t>(i)] += q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * u[j];
                return UnitVector(outv);
            };
            return std::make_pair(apply(a), apply(b));
        }();
        const CorrEstimate plain = protocols::estimate_correlation(oc, a, b, prop_trials, seed + 1800);
        const CorrEstimate rot = protocols::estimate_correlation(oc, ra, rb, prop_trials, seed + 1900);
        const double comb =
            std::sqrt(plain.std_error * plain.std_error + rot.std_error * rot.std_error);
        if (std::abs(plain.mean - rot.mean) > 4.0 * comb) {
            ok = false;
            os << "rotation invariance violated; ";
        }
        ck.criterion(13, "property suite: invariants, round trips, marginals, determinism",
                     ok, os.str());
    }

    std::printf("%d/%d criteria passed\n", ck.total - ck.failed, ck.total);
    return ck.failed == 0 ? 0 : 1;
}
