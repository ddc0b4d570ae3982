#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corrsim/corrfun.hpp"
#include "corrsim/krivine.hpp"
#include "corrsim/quantum.hpp"

#include <cmath>
#include <numbers>

using namespace corrsim;
using namespace corrsim::quantum;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.7071067811865476;
} // namespace

TEST_CASE("density matrix validation") {
    Matrix good = Matrix::Identity(4, 4) / 4.0;
    CHECK_NOTHROW(DensityMatrix(2, good));

    Matrix wrong_trace = Matrix::Identity(4, 4);
    CHECK_THROWS_AS(DensityMatrix(2, wrong_trace), std::invalid_argument);

    Matrix not_herm = good;
    not_herm(0, 1) = 0.5;
    CHECK_THROWS_AS(DensityMatrix(2, not_herm), std::invalid_argument);

    Matrix negative = Matrix::Zero(4, 4);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix(2, negative), std::invalid_argument);
}

TEST_CASE("observable validation") {
    Matrix z(2, 2);
    z << 1, 0, 0, -1;
    CHECK_NOTHROW((void)Observable(z));
    Matrix bad(2, 2);
    bad << 1, 0, 0, 0.5;
    CHECK_THROWS_AS((void)Observable(bad), std::invalid_argument);
}

TEST_CASE("expectation values") {
    // maximally mixed state with traceless observables gives 0
    rng::TrialRng gen(31, 0);
    const DensityMatrix mixed(2, Matrix::Identity(4, 4) / 4.0);
    Matrix z(2, 2), x(2, 2);
    z << 1, 0, 0, -1;
    x << 0, 1, 1, 0;
    CHECK(expectation(mixed, Observable(z), Observable(x)) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(expectation(mixed, Observable(z), Observable(z)) == doctest::Approx(0.0).epsilon(1e-14));

    // product states factorize
    Matrix pa(2, 2), pb(2, 2);
    pa << 0.75, 0.25, 0.25, 0.25;
    pb << 0.5, std::complex<double>(0.0, -0.25), std::complex<double>(0.0, 0.25), 0.5;
    Matrix prod(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            prod.block(2 * i, 2 * j, 2, 2) = pa(i, j) * pb;
    const DensityMatrix rho(2, prod);
    const Observable A(z), B(x);
    const double lhs = expectation(rho, A, B);
    const double rhs = (z * pa).trace().real() * (x * pb).trace().real();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("CHSH instance expectations") {
    const ChshInstance inst = chsh_instance();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double e = expectation(inst.rho, inst.alice[static_cast<std::size_t>(i)],
                                         inst.bob[static_cast<std::size_t>(j)]);
            const double want = (i == 1 && j == 1) ? -kInvSqrt2 : kInvSqrt2;
            CHECK(e == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("reduction identity on the CHSH instance") {
    const ChshInstance inst = chsh_instance();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const ReducedVectors rv = reduce_to_vectors(inst.rho, inst.alice[static_cast<std::size_t>(i)],
                                                        inst.bob[static_cast<std::size_t>(j)]);
            CHECK(rv.a.dim() == 2 * 16);
            const double want = (i == 1 && j == 1) ? -kInvSqrt2 : kInvSqrt2;
            CHECK(dot(rv.a, rv.b) == doctest::Approx(want).epsilon(1e-12));
            CHECK(std::abs(rv.raw_norm_a - 1.0) <= 1e-10);
            CHECK(std::abs(rv.raw_norm_b - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("reduction identity on random instances") {
    for (int d : {2, 3}) {
        for (int rep = 0; rep < 50; ++rep) {
            rng::TrialRng gen(100 + static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(rep));
            const DensityMatrix rho = random_density(d, gen);
            const Observable A = random_observable(d, gen);
            const Observable B = random_observable(d, gen);
            const ReducedVectors rv = reduce_to_vectors(rho, A, B);
            CHECK(rv.a.dim() == 2 * d * d * d * d);
            CHECK(std::abs(dot(rv.a, rv.b) - rv.source_expectation) <= 1e-10);
            CHECK(std::abs(rv.source_expectation - expectation(rho, A, B)) <= 1e-12);
            CHECK(std::abs(rv.raw_norm_a - 1.0) <= 1e-10);
            CHECK(std::abs(rv.raw_norm_b - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("identity-like observable gives inner product 1") {
    const DensityMatrix mixed(2, Matrix::Identity(4, 4) / 4.0);
    const Observable I(Matrix::Identity(2, 2));
    const ReducedVectors rv = reduce_to_vectors(mixed, I, I);
    CHECK(dot(rv.a, rv.b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("CHSH game values") {
    // deterministic same-output strategy: exactly 3/4
    const ChshGameResult base = chsh_always_same_output();
    CHECK(base.win_rate == 0.75);

    // Protocol 1 scores exactly 0.75 in expectation (arcsin(1/sqrt2) = pi/4)
    protocols::ProtocolConfig nc;
    nc.kind = protocols::ProtocolKind::nocomm;
    const ChshGameResult local = chsh_game_value(nc, 400000, 41);
    CHECK(std::abs(local.win_rate - 0.75) <= 4.0 * local.std_error);
    CHECK(local.win_rate <= 0.75 + 4.0 * local.std_error);

    // transformed protocol reaches the quantum value up to the tail bias
    const krivine::InverseSeries f =
        krivine::invert_h(corrfun::h_ort2_series(61), 61, krivine::SourceKind::ort2);
    const krivine::Embedding e(f.coefficients(), 2, 7);
    protocols::ProtocolConfig tr;
    tr.kind = protocols::ProtocolKind::transformed;
    tr.embedding = &e;
    const ChshGameResult game = chsh_game_value(tr, 100000, 42);
    const double quantum_value = 0.5 + 0.5 * kInvSqrt2;
    CHECK(std::abs(game.win_rate - quantum_value) <= 4.0 * game.std_error + 2.0 * e.tail_mass());
}

TEST_CASE("end to end: reduce the CHSH instance and run the transformed protocol") {
    const ChshInstance inst = chsh_instance();
    const ReducedVectors rv = reduce_to_vectors(inst.rho, inst.alice[0], inst.bob[0]);
    const krivine::InverseSeries f =
        krivine::invert_h(corrfun::h_ort2_series(61), 61, krivine::SourceKind::ort2);
    // n = 32 is wide, so the coordinate budget limits the truncation degree
    const krivine::Embedding e = krivine::Embedding::build_auto(f.coefficients(), rv.a.dim(), 2000);
    CHECK(e.truncation_order() == 2); // 32 + 1024 coordinates fit, degree 3 does not
    protocols::ProtocolConfig cfg;
    cfg.kind = protocols::ProtocolKind::transformed;
    cfg.embedding = &e;
    const CorrEstimate est = protocols::estimate_correlation(cfg, rv.a, rv.b, 30000, 43);
    CHECK(std::abs(est.mean - rv.source_expectation) <= 4.0 * est.std_error + 2.0 * e.tail_mass());
}
