// corrsim: simulate two-outcome quantum correlations with bounded classical
// communication, and verify the series/geometry facts behind the protocols.

#include "corrsim/corrfun.hpp"
#include "corrsim/geom.hpp"
#include "corrsim/instance_io.hpp"
#include "corrsim/krivine.hpp"
#include "corrsim/protocols.hpp"
#include "corrsim/quantum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

using namespace corrsim;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct ProtocolBundle {
    protocols::ProtocolConfig cfg;
    std::unique_ptr<krivine::Embedding> embedding;
    std::function<double(double)> analytic; // expected correlation at rho
    std::string name;
};

ProtocolBundle make_bundle(const std::string& protocol, int k, int n, int order,
                           std::int64_t embed_budget) {
    ProtocolBundle b;
    b.name = protocol;
    if (protocol == "nocomm") {
        b.cfg.kind = protocols::ProtocolKind::nocomm;
        b.analytic = [](double r) { return corrfun::h_nocomm(r); };
    } else if (protocol == "maj") {
        b.cfg.kind = protocols::ProtocolKind::majority;
        b.cfg.k = k;
        b.analytic = [k](double r) { return corrfun::h_maj(k, r); };
    } else if (protocol == "ort") {
        b.cfg.kind = protocols::ProtocolKind::orthant;
        b.cfg.k = k;
        b.analytic = [k](double r) { return corrfun::h_ort(k, r); };
    } else if (protocol == "transformed") {
        const auto f = krivine::invert_h(corrfun::h_ort2_series(order), order,
                                         krivine::SourceKind::ort2);
        b.embedding = std::make_unique<krivine::Embedding>(
            krivine::Embedding::build_auto(f.coefficients(), n, embed_budget));
        b.cfg.kind = protocols::ProtocolKind::transformed;
        b.cfg.embedding = b.embedding.get();
        b.analytic = [](double r) { return r; };
    } else if (protocol == "mixed") {
        const auto f = krivine::invert_h(corrfun::h_mixed_series(order), order,
                                         krivine::SourceKind::mixed);
        b.embedding = std::make_unique<krivine::Embedding>(
            krivine::Embedding::build_auto(f.coefficients(), n, embed_budget));
        b.cfg.kind = protocols::ProtocolKind::mixed;
        b.cfg.embedding = b.embedding.get();
        b.cfg.mix_p = corrfun::mixing_p();
        b.analytic = [](double r) { return r; };
    } else {
        throw CLI::ValidationError("--protocol", "unknown protocol '" + protocol + "'");
    }
    return b;
}

std::pair<UnitVector, UnitVector> pair_for_point(int n, double rho, std::uint64_t seed,
                                                 std::uint64_t point) {
    rng::TrialRng gen(rng::mix64(seed ^ 0xC0115E1D0A1BULL) + point, 0);
    return protocols::sample_pair_with_rho(n, rho, gen);
}

json message_frequencies(const protocols::MessageStats& stats) {
    json freq = json::object();
    for (const auto& [msg, count] : stats.counts)
        freq[msg.empty() ? "(none)" : msg] =
            static_cast<double>(count) / static_cast<double>(stats.trials);
    return freq;
}

// ---- curve ----------------------------------------------------------------

int cmd_curve(const std::string& protocol, int k, int n, int points, std::int64_t trials,
              std::uint64_t seed, int order, std::int64_t embed_budget, const std::string& out) {
    if (points < 2) throw CLI::ValidationError("--points", "need at least 2 points");
    const ProtocolBundle bundle = make_bundle(protocol, k, n, order, embed_budget);
    std::ostringstream csv;
    csv << "rho,analytic,mc_mean,mc_stderr,trials\n";
    for (int i = 0; i < points; ++i) {
        const double rho = -1.0 + 2.0 * i / (points - 1);
        const auto [a, b] = pair_for_point(n, rho, seed, static_cast<std::uint64_t>(i));
        const CorrEstimate est = protocols::estimate_correlation(
            bundle.cfg, a, b, trials, seed + static_cast<std::uint64_t>(i));
        csv << io::format_full(rho) << ',' << io::format_full(bundle.analytic(rho)) << ',' << io::format_full(est.mean) << ','
            << io::format_full(est.std_error) << ',' << est.trials << '\n';
    }
    io::write_text_atomic(out, csv.str());
    return 0;
}

// ---- series ---------------------------------------------------------------

json sign_report_json(const corrfun::SignReport& rep) {
    json items = json::array();
    for (const auto& item : rep.items)
        items.push_back({{"label", item.label},
                         {"ok", item.ok},
                         {"value", item.value},
                         {"detail", item.detail}});
    return {{"ok", rep.ok}, {"items", items}};
}

int cmd_series(const std::string& target, int order, bool as_json, const std::string& out) {
    if (order > 61) throw CLI::ValidationError("--order", "order must be <= 61");
    if (order % 2 == 0) --order;

    series::Series h = [&] {
        if (target == "ort2") return corrfun::h_ort2_series(order);
        if (target == "mixed") return corrfun::h_mixed_series(order);
        if (target == "maj4") return corrfun::h_maj_series(4, order);
        throw CLI::ValidationError("--target", "unknown target '" + target + "'");
    }();

    const auto source = target == "ort2"   ? krivine::SourceKind::ort2
                        : target == "mixed" ? krivine::SourceKind::mixed
                                            : krivine::SourceKind::maj4;
    std::optional<krivine::InverseSeries> inverse;
    std::string inverse_error;
    try {
        inverse = krivine::invert_h(h, order, source);
    } catch (const krivine::InverseBoundError& e) {
        inverse_error = e.what();
    }

    const corrfun::SignReport rep = target == "ort2"   ? corrfun::check_h2_coeff_signs(order)
                                    : target == "mixed" ? corrfun::check_mixed_signs(order)
                                                        : corrfun::check_maj4_signs(order);
    const bool ok = rep.ok && inverse.has_value();

    std::ostringstream text;
    json j;
    j["target"] = target;
    j["order"] = order;
    text << "series report: " << target << " (order " << order << ")\n";
    json cs = json::object(), ds = json::object();
    text << "  c coefficients:\n";
    for (int d = 1; d <= h.max_order(); d += 2) {
        cs["c_" + std::to_string(d)] = h[d];
        text << "    c_" << d << " = " << io::format_full(h[d]) << '\n';
    }
    j["c"] = cs;
    if (inverse) {
        text << "  d coefficients (inverse):\n";
        for (int d = 1; d <= inverse->max_order(); d += 2) {
            ds["d_" + std::to_string(d)] = inverse->coefficients()[d];
            text << "    d_" << d << " = " << io::format_full(inverse->coefficients()[d]) << '\n';
        }
        j["d"] = ds;
        j["inverse_bounds"] = {{"min_coefficient", inverse->min_coefficient()},
                             {"max_excess_over_1_over_k", inverse->max_bound_excess()},
                             {"partial_mass", inverse->total_mass()},
                             {"tail_mass", inverse->tail_mass_beyond(inverse->max_order())}};
        text << "  inverse bounds: min d = " << io::format_full(inverse->min_coefficient())
             << ", max(d_k - 1/k) = " << io::format_full(inverse->max_bound_excess())
             << ", partial mass = " << io::format_full(inverse->total_mass()) << '\n';
    } else {
        j["inverse_error"] = inverse_error;
        text << "  inverse: FAILED (" << inverse_error << ")\n";
    }
    j["sign_checks"] = sign_report_json(rep);
    text << "  sign checks:\n";
    for (const auto& item : rep.items)
        text << "    [" << (item.ok ? "PASS" : "FAIL") << "] " << item.label << " (value "
             << io::format_full(item.value) << (item.detail.empty() ? "" : "; " + item.detail) << ")\n";
    j["ok"] = ok;
    text << "  verdict: " << (ok ? "PASS" : "FAIL") << '\n';

    io::write_text_atomic(out, as_json ? j.dump(2) + "\n" : text.str());
    return ok ? 0 : 1;
}

// ---- simulate ---------------------------------------------------------------

int cmd_simulate(const std::string& protocol, std::optional<double> rho,
                 const std::string& instance_path, int k, int n, std::int64_t trials,
                 std::uint64_t seed, int order, std::int64_t embed_budget,
                 const std::string& out) {
    json j;
    std::optional<std::pair<UnitVector, UnitVector>> pair;
    double target = 0.0;
    if (!instance_path.empty()) {
        const io::Instance inst = io::load_instance(instance_path);
        const quantum::ReducedVectors rv = quantum::reduce_to_vectors(inst.rho, inst.A, inst.B);
        n = rv.a.dim();
        target = rv.source_expectation;
        j["instance"] = {{"path", instance_path},
                         {"expectation", rv.source_expectation},
                         {"reduced_dim", rv.a.dim()},
                         {"identity_abs_error", std::abs(dot(rv.a, rv.b) - rv.source_expectation)}};
        pair = {rv.a, rv.b};
    } else {
        if (!rho) throw CLI::ValidationError("--rho", "either --rho or --instance is required");
        pair = pair_for_point(n, *rho, seed, 0);
        target = *rho;
    }

    const ProtocolBundle bundle = make_bundle(protocol, k, n, order, embed_budget);
    const protocols::SimulationSummary sum =
        protocols::run_simulation(bundle.cfg, pair->first, pair->second, trials, seed);

    j["protocol"] = protocol;
    if (protocol == "maj" || protocol == "ort") j["k"] = k;
    j["n"] = n;
    j["rho"] = dot(pair->first, pair->second);
    j["trials"] = trials;
    j["seed"] = seed;
    j["mean"] = sum.correlation.mean;
    j["stderr"] = sum.correlation.std_error;
    j["analytic"] = bundle.analytic(target);
    j["abs_diff"] = std::abs(sum.correlation.mean - bundle.analytic(target));
    j["avg_message_bits"] = sum.messages.avg_bits;
    j["max_message_bits"] = sum.messages.max_bits;
    j["message_frequencies"] = message_frequencies(sum.messages);
    if (bundle.embedding) {
        j["embedding"] = {{"truncation_order", bundle.embedding->truncation_order()},
                          {"tail_mass", bundle.embedding->tail_mass()},
                          {"embedded_dim", bundle.embedding->embedded_dim()}};
    }
    io::write_text_atomic(out, j.dump(2) + "\n");
    return 0;
}

// ---- chsh -------------------------------------------------------------------

int cmd_chsh(const std::string& protocol, int k, std::int64_t trials, std::uint64_t seed,
             int order, std::int64_t embed_budget, const std::string& out) {
    json j;
    j["protocol"] = protocol;
    j["classical_bound"] = 0.75;
    j["quantum_value"] = 0.5 + 0.5 / std::sqrt(2.0);
    if (protocol == "always0") {
        const auto r = quantum::chsh_always_same_output();
        j["win_rate"] = r.win_rate;
        j["stderr"] = 0.0;
        j["trials"] = 0;
    } else {
        const ProtocolBundle bundle = make_bundle(protocol, k, 2, order, embed_budget);
        const auto r = quantum::chsh_game_value(bundle.cfg, trials, seed);
        j["win_rate"] = r.win_rate;
        j["stderr"] = r.std_error;
        j["trials"] = r.trials;
        if (bundle.embedding) j["tail_mass"] = bundle.embedding->tail_mass();
    }
    io::write_text_atomic(out, j.dump(2) + "\n");
    return 0;
}

// ---- reduce -----------------------------------------------------------------

int cmd_reduce(const std::string& instance_path, const std::string& out) {
    const io::Instance inst = io::load_instance(instance_path);
    const quantum::ReducedVectors rv = quantum::reduce_to_vectors(inst.rho, inst.A, inst.B);
    io::write_text_atomic(out, io::reduced_to_json(rv).dump(2) + "\n");
    return 0;
}

// ---- experiment ---------------------------------------------------------------

int cmd_experiment(const std::string& name, std::vector<double> eps_list, int k, int n,
                   std::int64_t trials, std::uint64_t seed, int order,
                   std::int64_t embed_budget, const std::string& out) {
    json j;
    j["name"] = name;
    if (name == "bneps") {
        if (k != 1) throw CLI::ValidationError("--k", "the analytic B(eps) is for the k=1 protocol");
        if (eps_list.empty()) eps_list = {1e-1, 1e-2, 1e-3, 1e-4};
        json rows = json::array();
        for (std::size_t i = 0; i < eps_list.size(); ++i) {
            const double eps = eps_list[i];
            const double analytic = corrfun::b_eps_analytic(eps);
            const double limit = 8.0 * eps / kPi;
            json row = {{"eps", eps}, {"analytic", analytic}, {"ratio_to_8eps_over_pi", analytic / limit}};
            if (trials > 0) {
                protocols::ProtocolConfig cfg;
                cfg.kind = protocols::ProtocolKind::orthant;
                cfg.k = 1;
                const auto [ap, bp] = pair_for_point(n, 1.0 - eps, seed, 2 * i);
                const auto [am, bm] = pair_for_point(n, -1.0 + eps, seed, 2 * i + 1);
                const CorrEstimate ep = protocols::estimate_correlation(cfg, ap, bp, trials, seed + 2 * i);
                const CorrEstimate em = protocols::estimate_correlation(cfg, am, bm, trials, seed + 2 * i + 1);
                row["mc"] = 2.0 - ep.mean + em.mean;
                row["mc_stderr"] = std::sqrt(ep.std_error * ep.std_error + em.std_error * em.std_error);
            }
            rows.push_back(std::move(row));
        }
        j["rows"] = rows;
        io::write_text_atomic(out, j.dump(2) + "\n");
        return 0;
    }
    if (name == "transcript-bound") {
        const ProtocolBundle bundle = make_bundle("transformed", 2, 2, order, embed_budget);
        const auto pairs = quantum::chsh_vector_pairs();
        const std::vector<std::pair<UnitVector, UnitVector>> inputs(pairs.begin(), pairs.end());
        const protocols::MessageStats stats =
            protocols::transcript_stats(bundle.cfg, inputs, trials, seed);
        const double bound = (3.0 - std::sqrt(2.0)) / 2.0;
        const bool pass = stats.max_frequency() <= bound + 4.0 * stats.max_frequency_stderr();
        j["max_transcript_frequency"] = stats.max_frequency();
        j["stderr"] = stats.max_frequency_stderr();
        j["bound"] = bound;
        j["trials"] = trials;
        j["frequencies"] = message_frequencies(stats);
        j["pass"] = pass;
        io::write_text_atomic(out, j.dump(2) + "\n");
        return pass ? 0 : 1;
    }
    throw CLI::ValidationError("--name", "unknown experiment '" + name + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"classical protocols that exactly simulate quantum two-outcome correlations"};
    app.require_subcommand(1);

    std::string protocol = "nocomm", target = "ort2", instance_path, out = "-", name = "bneps";
    int k = 0, n = 3, points = 41, order = 41;
    std::int64_t trials = 1000000, embed_budget = 1024;
    std::uint64_t seed = 0;
    bool as_json = false;
    std::optional<double> rho;
    std::vector<double> eps_list;

    auto add_common = [&](CLI::App* cmd, bool with_protocol = true) {
        if (with_protocol)
            cmd->add_option("--protocol", protocol, "protocol: nocomm|maj|ort|transformed|mixed");
        cmd->add_option("--k", k, "communication parameter for maj/ort");
        cmd->add_option("--n", n, "input vector dimension")->default_val(3);
        cmd->add_option("--trials", trials, "Monte Carlo trials")->default_val(1000000);
        cmd->add_option("--seed", seed, "master seed")->default_val(0);
        cmd->add_option("--order", order, "series truncation order (odd, <= 61)")->default_val(41);
        cmd->add_option("--embed-budget", embed_budget,
                        "max coordinates per embedded vector")->default_val(1024);
        cmd->add_option("--out", out, "output path ('-' = stdout)")->default_val("-");
    };

    CLI::App* curve = app.add_subcommand("curve", "correlation curves as CSV");
    add_common(curve);
    curve->add_option("--points", points, "grid points in [-1,1]")->default_val(41);

    CLI::App* series_cmd = app.add_subcommand("series", "series coefficients and sign checks");
    series_cmd->add_option("--target", target, "ort2|mixed|maj4")->default_val("ort2");
    series_cmd->add_option("--order", order, "series truncation order (odd, <= 61)")->default_val(41);
    series_cmd->add_flag("--json", as_json, "emit JSON instead of text");
    series_cmd->add_option("--out", out, "output path ('-' = stdout)")->default_val("-");

    CLI::App* simulate = app.add_subcommand("simulate", "run a protocol and summarize as JSON");
    add_common(simulate);
    simulate->add_option("--rho", rho, "target inner product in [-1,1]");
    simulate->add_option("--instance", instance_path, "quantum instance JSON file");

    CLI::App* chsh = app.add_subcommand("chsh", "CHSH game win rate");
    add_common(chsh);
    chsh->get_option("--protocol")->description("nocomm|maj|ort|transformed|mixed|always0");

    CLI::App* reduce = app.add_subcommand("reduce", "quantum instance -> unit vectors");
    reduce->add_option("--instance", instance_path, "quantum instance JSON file")->required();
    reduce->add_option("--out", out, "output path ('-' = stdout)")->default_val("-");

    CLI::App* experiment = app.add_subcommand("experiment", "endpoint sensitivity / transcript bound");
    add_common(experiment, false);
    experiment->add_option("--name", name, "bneps|transcript-bound")->default_val("bneps");
    experiment->add_option("--eps", eps_list, "epsilon values for bneps");

    CLI11_PARSE(app, argc, argv);

    try {
        if (curve->parsed())
            return cmd_curve(protocol, k, n, points, trials, seed, order, embed_budget, out);
        if (series_cmd->parsed()) return cmd_series(target, order, as_json, out);
        if (simulate->parsed())
            return cmd_simulate(protocol, rho, instance_path, k, n, trials, seed, order,
                                embed_budget, out);
        if (chsh->parsed()) return cmd_chsh(protocol, k, trials, seed, order, embed_budget, out);
        if (reduce->parsed()) return cmd_reduce(instance_path, out);
        if (experiment->parsed())
            return cmd_experiment(name, eps_list, k == 0 ? 1 : k, n, trials, seed, order,
                                  embed_budget, out);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
