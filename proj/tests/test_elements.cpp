#include "catch_amalgamated.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <heraldq/elements.hpp>
#include <heraldq/fock.hpp>

#include "test_helpers.hpp"

using namespace heraldq;
using Catch::Matchers::WithinAbs;

namespace {
constexpr double pi = std::numbers::pi;
const double r2 = std::sqrt(2.0);

double block_diff(const MatrixBlock& a, const MatrixBlock& b) {
    double d = 0;
    for (std::size_t r = 0; r < a.dim; ++r)
        for (std::size_t c = 0; c < a.dim; ++c) d = std::max(d, std::abs(a(r, c) - b(r, c)));
    return d;
}
}  // namespace

TEST_CASE("beam splitter single photon") {
    PureState in = basis_state({{1, 0}, {0, 0}});
    PureState out = apply_bs(in, 0, 1);
    REQUIRE_THAT(std::abs(out.amplitudes.at({{1, 0}, {0, 0}}) - cplx{1 / r2, 0}), WithinAbs(0, 1e-14));
    REQUIRE_THAT(std::abs(out.amplitudes.at({{0, 0}, {1, 0}}) - cplx{0, 1 / r2}), WithinAbs(0, 1e-14));

    REQUIRE_THAT(fidelity(apply_bs(vacuum(2), 0, 1), vacuum(2)), WithinAbs(1.0, 1e-14));
    REQUIRE_THROWS_AS(apply_bs(vacuum(2), 0, 0), std::invalid_argument);
}

TEST_CASE("beam splitter Hong-Ou-Mandel bunching") {
    PureState in = basis_state({{1, 0}, {1, 0}});
    PureState out = apply_bs(in, 0, 1);
    // cross terms cancel: (i/sqrt2)(|2,0>|0,0> + |0,0>|2,0>)
    REQUIRE(out.amplitudes.size() == 2);
    REQUIRE_THAT(std::abs(out.amplitudes.at({{2, 0}, {0, 0}}) - cplx{0, 1 / r2}), WithinAbs(0, 1e-14));
    REQUIRE_THAT(std::abs(out.amplitudes.at({{0, 0}, {2, 0}}) - cplx{0, 1 / r2}), WithinAbs(0, 1e-14));
}

TEST_CASE("rotator on one and two photons") {
    // θ=π/2: |1,0> -> -|0,1>
    PureState out = apply_rotator(basis_state({{1, 0}}), 0, pi / 2);
    REQUIRE_THAT(std::abs(out.amplitudes.at({{0, 1}}) - cplx{-1, 0}), WithinAbs(0, 1e-14));

    // θ=π/4 on |1,1>: (|2,0> - |0,2>)/sqrt2
    out = apply_rotator(basis_state({{1, 1}}), 0, pi / 4);
    REQUIRE(out.amplitudes.size() == 2);
    REQUIRE_THAT(std::abs(out.amplitudes.at({{2, 0}}) - cplx{1 / r2, 0}), WithinAbs(0, 1e-14));
    REQUIRE_THAT(std::abs(out.amplitudes.at({{0, 2}}) - cplx{-1 / r2, 0}), WithinAbs(0, 1e-14));

    REQUIRE_THAT(fidelity(apply_rotator(basis_state({{1, 1}}), 0, 0.0), basis_state({{1, 1}})),
                 WithinAbs(1.0, 1e-14));
}

TEST_CASE("phase shifter") {
    PureState out = apply_phase(basis_state({{1, 1}}), 0, 0.3, 0.4);
    REQUIRE_THAT(std::abs(out.amplitudes.at({{1, 1}}) - std::polar(1.0, 0.7)), WithinAbs(0, 1e-14));

    out = apply_phase(basis_state({{2, 0}}), 0, 0.3, 0.4);
    REQUIRE_THAT(std::abs(out.amplitudes.at({{2, 0}}) - std::polar(1.0, 0.6)), WithinAbs(0, 1e-14));

    REQUIRE_THAT(fidelity(apply_phase(basis_state({{1, 1}}), 0, 0, 0), basis_state({{1, 1}})),
                 WithinAbs(1.0, 1e-14));
}

TEST_CASE("polarizing beam splitter") {
    PureState out = apply_pbs(basis_state({{0, 1}, {0, 0}}), 0, 1);
    REQUIRE_THAT(std::abs(out.amplitudes.at({{0, 0}, {0, 1}}) - cplx{1, 0}), WithinAbs(0, 1e-14));

    PureState h = basis_state({{1, 0}, {0, 0}});
    REQUIRE_THAT(fidelity(apply_pbs(h, 0, 1), h), WithinAbs(1.0, 1e-14));

    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        PureState s = testing::random_state(rng, 2, 5);
        REQUIRE_THAT(testing::max_entry_diff(apply_pbs(apply_pbs(s, 0, 1), 0, 1), s),
                     WithinAbs(0, 1e-14));
    }
}

TEST_CASE("rotator block values") {
    MatrixBlock u = rotator_block(pi / 4, 2);
    // (1/2)[[1, sqrt2, 1], [-sqrt2, 0, sqrt2], [1, -sqrt2, 1]]
    const double expected[3][3] = {{1, r2, 1}, {-r2, 0, r2}, {1, -r2, 1}};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            REQUIRE_THAT(std::abs(u(r, c) - cplx{expected[r][c] / 2, 0}), WithinAbs(0, 1e-14));

    MatrixBlock id = rotator_block(0.0, 2);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            REQUIRE_THAT(std::abs(id(r, c) - (r == c ? cplx{1, 0} : cplx{0, 0})), WithinAbs(0, 1e-14));

    REQUIRE_THROWS_AS(rotator_block(0.1, 3), std::invalid_argument);
}

TEST_CASE("phase block values") {
    MatrixBlock p = phase_block(0.7, 0.7, 2);
    for (int r = 0; r < 3; ++r)
        REQUIRE_THAT(std::abs(p(r, r) - std::polar(1.0, 1.4)), WithinAbs(0, 1e-14));

    p = phase_block(0.5, 0.0, 2);
    REQUIRE_THAT(std::abs(p(0, 0) - std::polar(1.0, 1.0)), WithinAbs(0, 1e-14));
    REQUIRE_THAT(std::abs(p(1, 1) - std::polar(1.0, 0.5)), WithinAbs(0, 1e-14));
    REQUIRE_THAT(std::abs(p(2, 2) - cplx{1, 0}), WithinAbs(0, 1e-14));

    REQUIRE(is_unitary(phase_block(1.3, -2.1, 2), 1e-12));
    REQUIRE(is_unitary(phase_block(1.3, -2.1, 1), 1e-12));
}

TEST_CASE("norm preservation and photon-number conservation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ang(-pi, pi);
    for (int t = 0; t < 100; ++t) {
        PureState s = testing::random_state(rng, 2, 6);
        auto before = total_photons(s);
        for (const PureState& out :
             {apply_bs(s, 0, 1), apply_rotator(s, 0, ang(rng)), apply_phase(s, 1, ang(rng), ang(rng)),
              apply_pbs(s, 0, 1)}) {
            REQUIRE_THAT(out.norm_squared(), WithinAbs(1.0, 1e-12));
            auto after = total_photons(out);
            for (const auto& [n, p] : before) REQUIRE_THAT(after[n], WithinAbs(p, 1e-12));
        }
    }
}

TEST_CASE("polarization bookkeeping") {
    auto hv_counts = [](const PureState& s) {
        // distribution of (total H, total V) across all modes
        std::map<std::pair<int, int>, double> d;
        for (const auto& [occ, amp] : s.amplitudes) {
            int h = 0, v = 0;
            for (const auto& o : occ) h += o.h, v += o.v;
            d[{h, v}] += std::norm(amp);
        }
        return d;
    };
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ang(-pi, pi);
    for (int t = 0; t < 30; ++t) {
        PureState s = testing::random_state(rng, 2, 5);
        auto before = hv_counts(s);
        // PBS, phase, and BS conserve H and V counts separately
        for (const PureState& out :
             {apply_pbs(s, 0, 1), apply_phase(s, 0, ang(rng), ang(rng)), apply_bs(s, 0, 1)}) {
            auto after = hv_counts(out);
            for (const auto& [k, p] : before) REQUIRE_THAT(after[k], WithinAbs(p, 1e-12));
        }
        // rotator conserves the per-mode total m+n
        auto mode_totals = [](const PureState& st) {
            std::map<std::pair<int, int>, double> d;
            for (const auto& [occ, amp] : st.amplitudes)
                d[{occ[0].total(), occ[1].total()}] += std::norm(amp);
            return d;
        };
        auto bt = mode_totals(s);
        auto at = mode_totals(apply_rotator(s, 0, ang(rng)));
        for (const auto& [k, p] : bt) REQUIRE_THAT(at[k], WithinAbs(p, 1e-12));
    }
}

TEST_CASE("substitution path matches generator exponentiation") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> ang(-pi, pi);

    SECTION("rotator vs exp(θ J_R), including the printed blocks") {
        for (int t = 0; t < 100; ++t) {
            const double theta = ang(rng);
            PureState s = testing::random_state(rng, 1, 2);
            PureState direct = apply_rotator(s, 0, theta);
            PureState oracle = testing::exp_series(testing::rotator_generator(0), theta, s);
            REQUIRE_THAT(testing::max_entry_diff(direct, oracle), WithinAbs(0, 1e-12));
        }
    }

    SECTION("rotator block vs one-photon exponentiation") {
        for (int t = 0; t < 100; ++t) {
            const double theta = ang(rng);
            MatrixBlock u = rotator_block(theta, 1);
            MatrixBlock ref;
            ref.dim = 2;
            const PureState kets[2] = {basis_state({{1, 0}}), basis_state({{0, 1}})};
            for (int c = 0; c < 2; ++c) {
                PureState col = testing::exp_series(testing::rotator_generator(0), theta, kets[c]);
                for (int r = 0; r < 2; ++r) ref.at(r, c) = inner(kets[r], col);
            }
            REQUIRE_THAT(block_diff(u, ref), WithinAbs(0, 1e-12));
        }
    }

    SECTION("two-photon blocks vs Fock application") {
        const PureState kets[3] = {basis_state({{2, 0}}), basis_state({{1, 1}}),
                                   basis_state({{0, 2}})};
        for (int t = 0; t < 100; ++t) {
            const double theta = ang(rng), dH = ang(rng), dV = ang(rng);
            MatrixBlock ur = rotator_block(theta, 2), up = phase_block(dH, dV, 2);
            for (int c = 0; c < 3; ++c) {
                PureState rcol = apply_rotator(kets[c], 0, theta);
                PureState pcol = apply_phase(kets[c], 0, dH, dV);
                for (int r = 0; r < 3; ++r) {
                    REQUIRE_THAT(std::abs(inner(kets[r], rcol) - ur(r, c)), WithinAbs(0, 1e-12));
                    REQUIRE_THAT(std::abs(inner(kets[r], pcol) - up(r, c)), WithinAbs(0, 1e-12));
                }
            }
        }
    }

    SECTION("phase vs exp(i(δH n_H + δV n_V))") {
        for (int t = 0; t < 50; ++t) {
            const double dH = ang(rng), dV = ang(rng);
            PureState s = testing::random_state(rng, 1, 4);
            PureState direct = apply_phase(s, 0, dH, dV);
            PureState oracle =
                testing::exp_series(testing::phase_generator(0, dH, dV), cplx{0, 1}, s);
            REQUIRE_THAT(testing::max_entry_diff(direct, oracle), WithinAbs(0, 1e-12));
        }
    }

    SECTION("BS vs exp(i(π/4) J_BS), and doubled BS vs exp(i(π/2) J_BS)") {
        for (int t = 0; t < 25; ++t) {
            PureState s = testing::random_state(rng, 2, 4);
            PureState direct = apply_bs(s, 0, 1);
            PureState oracle =
                testing::exp_series(testing::bs_generator(0, 1), cplx{0, pi / 4}, s);
            REQUIRE_THAT(testing::max_entry_diff(direct, oracle), WithinAbs(0, 1e-11));

            PureState twice = apply_bs(direct, 0, 1);
            PureState oracle2 =
                testing::exp_series(testing::bs_generator(0, 1), cplx{0, pi / 2}, s);
            REQUIRE_THAT(testing::max_entry_diff(twice, oracle2), WithinAbs(0, 1e-11));
        }
    }
}
