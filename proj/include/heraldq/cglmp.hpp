// cglmp.hpp
// CGLMP inequality evaluation for two-qutrit states under the restricted
// measurement family U_tot(θ, δH, δV) = U3(θ) P3(δH, δV), plus the (x, y)
// sweep, the 12-parameter restricted search, and an unrestricted-U(3)
// evaluator.
//
// Convention for the shifted probabilities: P(X = Y + k) sums the joint
// outcomes with X - Y = k (mod 3). This is the reading under which the
// reference settings reproduce B1 = -1/3 and the sweep attains 2.5295.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "circuits.hpp"
#include "detection.hpp"
#include "elements.hpp"
#include "fock.hpp"
#include "nelder_mead.hpp"

namespace heraldq {

// One party's restricted measurement setting.
struct QutritSetting {
    double theta = 0.0;
    double dH = 0.0;
    double dV = 0.0;
};

struct SettingsQuartet {
    QutritSetting A1, A2, B1, B2;
};

// 3x3 outcome probability table p[a][b].
struct JointProbTable {
    std::array<std::array<double, 3>, 3> p{};

    double sum() const {
        double s = 0;
        for (const auto& row : p)
            for (double x : row) s += x;
        return s;
    }
};

// U_tot(θ, δH, δV) = U3(θ) · P3(δH, δV) on the two-photon block.
inline MatrixBlock u_tot(const QutritSetting& s) {
    return matmul(rotator_block(s.theta, 2), phase_block(s.dH, s.dV, 2));
}

namespace detail {

// p[a][b] = |(U_A C U_B^T)_{ab}|² for the 3x3 amplitude matrix C of the
// two-qutrit state.
inline JointProbTable joint_probs_matrix(const std::array<std::array<cplx, 3>, 3>& c,
                                         const MatrixBlock& ua, const MatrixBlock& ub) {
    JointProbTable t;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            cplx amp{0, 0};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) amp += ua(a, i) * c[i][j] * ub(b, j);
            t.p[a][b] = std::norm(amp);
        }
    return t;
}

inline std::array<std::array<cplx, 3>, 3> amplitude_matrix(const PureState& state) {
    if (state.mode_count != 2)
        throw std::invalid_argument("joint_probs: expected a two-mode state");
    std::array<std::array<cplx, 3>, 3> c{};
    for (const auto& [occ, amp] : state.amplitudes) {
        int i = -1, j = -1;
        for (int l = 0; l < 3; ++l) {
            if (occ[0] == qutrit_occupation(l)) i = l;
            if (occ[1] == qutrit_occupation(l)) j = l;
        }
        if (i < 0 || j < 0)
            throw std::invalid_argument("joint_probs: state outside the 4-photon qutrit subspace");
        c[i][j] = amp;
    }
    return c;
}

}  // namespace detail

// Matrix-path joint probabilities.
inline JointProbTable joint_probs(const PureState& state, const QutritSetting& sa,
                                  const QutritSetting& sb) {
    return detail::joint_probs_matrix(detail::amplitude_matrix(state), u_tot(sa), u_tot(sb));
}

// Full Fock path: realizes each U_tot photonically — PBS split to an
// auxiliary path, per-path phase shifters, PBS merge, rotator — then counts
// photons in both modes. Must agree with the matrix path.
inline JointProbTable joint_probs_fock(const PureState& state, const QutritSetting& sa,
                                       const QutritSetting& sb) {
    if (state.mode_count != 2)
        throw std::invalid_argument("joint_probs_fock: expected a two-mode state");
    PureState s = tensor(state, vacuum(2));  // modes: A=0, B=1, aux 2 and 3
    auto apply_utot = [](PureState in, ModeId mode, ModeId aux, const QutritSetting& set) {
        in = apply_pbs(in, mode, aux);           // V photons to the aux path
        in = apply_phase(in, mode, set.dH, 0.0);
        in = apply_phase(in, aux, 0.0, set.dV);
        in = apply_pbs(in, mode, aux);           // recombine
        return apply_rotator(in, mode, set.theta);
    };
    s = apply_utot(std::move(s), 0, 2, sa);
    s = apply_utot(std::move(s), 1, 3, sb);

    JointProbTable t;
    for (const auto& [occ, amp] : s.amplitudes) {
        int a = -1, b = -1;
        for (int l = 0; l < 3; ++l) {
            if (occ[0] == qutrit_occupation(l)) a = l;
            if (occ[1] == qutrit_occupation(l)) b = l;
        }
        if (a < 0 || b < 0)
            throw std::invalid_argument("joint_probs_fock: outcome outside the qutrit subspace");
        t.p[a][b] += std::norm(amp);
    }
    return t;
}

enum class ShiftDirection { AEqualsBPlusK, BEqualsAPlusK };

// P(A = B + k) or P(B = A + k) from a joint table, k taken mod 3.
inline double prob_shift(const JointProbTable& t, int k, ShiftDirection dir) {
    const int kk = ((k % 3) + 3) % 3;
    double s = 0;
    for (int l = 0; l < 3; ++l) {
        if (dir == ShiftDirection::AEqualsBPlusK)
            s += t.p[(l + kk) % 3][l];
        else
            s += t.p[l][(l + kk) % 3];
    }
    return s;
}

namespace detail {

// The four correlation functions from precomputed tables for the setting
// pairs (A1,B1), (A2,B1), (A2,B2), (A1,B2).
inline std::array<double, 4> b_values_from_tables(const JointProbTable& t11,
                                                  const JointProbTable& t21,
                                                  const JointProbTable& t22,
                                                  const JointProbTable& t12) {
    using SD = ShiftDirection;
    std::array<double, 4> b;
    b[0] = prob_shift(t11, 0, SD::AEqualsBPlusK) - prob_shift(t11, -1, SD::AEqualsBPlusK);
    b[1] = prob_shift(t21, 1, SD::BEqualsAPlusK) - prob_shift(t21, 0, SD::BEqualsAPlusK);
    b[2] = prob_shift(t22, 0, SD::AEqualsBPlusK) - prob_shift(t22, -1, SD::AEqualsBPlusK);
    b[3] = prob_shift(t12, 0, SD::BEqualsAPlusK) - prob_shift(t12, -1, SD::BEqualsAPlusK);
    return b;
}

template <typename TableFn>
inline std::array<double, 4> b_values_impl(TableFn&& table) {
    return b_values_from_tables(table(0, 0), table(1, 0), table(1, 1), table(0, 1));
}

}  // namespace detail

// B_i, i in 1..4: B1 = P(A1=B1) - P(A1=B1-1), B2 = P(B1=A2+1) - P(B1=A2),
// B3 = P(A2=B2) - P(A2=B2-1), B4 = P(B2=A1) - P(B2=A1-1).
inline double b_value(int i, const SettingsQuartet& q, const PureState& state) {
    if (i < 1 || i > 4) throw std::invalid_argument("b_value: i must be in 1..4");
    const auto c = detail::amplitude_matrix(state);
    auto table = [&](int ai, int bi) {
        const QutritSetting& sa = ai == 0 ? q.A1 : q.A2;
        const QutritSetting& sb = bi == 0 ? q.B1 : q.B2;
        return detail::joint_probs_matrix(c, u_tot(sa), u_tot(sb));
    };
    return detail::b_values_impl(table)[i - 1];
}

// I3 = Σ B_i.
inline double i3(const SettingsQuartet& q, const PureState& state) {
    double s = 0;
    const auto c = detail::amplitude_matrix(state);
    auto table = [&](int ai, int bi) {
        const QutritSetting& sa = ai == 0 ? q.A1 : q.A2;
        const QutritSetting& sb = bi == 0 ? q.B1 : q.B2;
        return detail::joint_probs_matrix(c, u_tot(sa), u_tot(sb));
    };
    for (double b : detail::b_values_impl(table)) s += b;
    return s;
}

// Same functional with four arbitrary 3x3 unitary measurement blocks.
inline double i3_general(const PureState& state, const MatrixBlock& a1, const MatrixBlock& a2,
                         const MatrixBlock& b1, const MatrixBlock& b2) {
    for (const MatrixBlock* u : {&a1, &a2, &b1, &b2})
        if (u->dim != 3 || !is_unitary(*u, 1e-10))
            throw std::invalid_argument("i3_general: blocks must be 3x3 unitaries");
    const auto c = detail::amplitude_matrix(state);
    auto table = [&](int ai, int bi) {
        const MatrixBlock& ua = ai == 0 ? a1 : a2;
        const MatrixBlock& ub = bi == 0 ? b1 : b2;
        return detail::joint_probs_matrix(c, ua, ub);
    };
    double s = 0;
    for (double b : detail::b_values_impl(table)) s += b;
    return s;
}

// --- Fig-4 sweep ---------------------------------------------------------

// Settings of the reference phase sweep at fixed θ = π/4:
// A1 = (π/4, x, y), B1 = (π/4, x, 2y), A2 = (π/4, x, 3y), B2 = (π/4, x, 0).
inline SettingsQuartet fig4_settings(double x, double y) {
    const double q = std::numbers::pi / 4;
    return {{q, x, y}, {q, x, 3 * y}, {q, x, 2 * y}, {q, x, 0.0}};
}

struct SweepCell {
    double x, y, i3;
};

struct SweepResult {
    std::vector<SweepCell> cells;  // row-major over x then y
    double max_i3 = -4.0;
    double argmax_x = 0.0, argmax_y = 0.0;
};

inline SweepResult sweep_fig4(double x_min, double x_max, double y_min, double y_max,
                              int steps, const PureState& state) {
    if (steps < 2) throw std::invalid_argument("sweep_fig4: steps must be >= 2");
    const auto c = detail::amplitude_matrix(state);
    SweepResult res;
    res.cells.reserve(static_cast<std::size_t>(steps) * steps);
    for (int ix = 0; ix < steps; ++ix) {
        const double x = x_min + (x_max - x_min) * ix / (steps - 1);
        for (int iy = 0; iy < steps; ++iy) {
            const double y = y_min + (y_max - y_min) * iy / (steps - 1);
            const SettingsQuartet q = fig4_settings(x, y);
            auto table = [&](int ai, int bi) {
                const QutritSetting& sa = ai == 0 ? q.A1 : q.A2;
                const QutritSetting& sb = bi == 0 ? q.B1 : q.B2;
                return detail::joint_probs_matrix(c, u_tot(sa), u_tot(sb));
            };
            double v = 0;
            for (double b : detail::b_values_impl(table)) v += b;
            res.cells.push_back({x, y, v});
            if (v > res.max_i3) {
                res.max_i3 = v;
                res.argmax_x = x;
                res.argmax_y = y;
            }
        }
    }
    return res;
}

inline SweepResult sweep_fig4_default(const PureState& state, int steps = 400) {
    return sweep_fig4(0.0, std::numbers::pi, 0.0, std::numbers::pi, steps, state);
}

// --- restricted 12-parameter optimization --------------------------------

struct OptimizeResult {
    SettingsQuartet settings;
    double i3 = -4.0;
    std::size_t evaluations = 0;
};

inline SettingsQuartet quartet_from_params(const std::vector<double>& v) {
    auto set = [&](int off) { return QutritSetting{v[off], v[off + 1], v[off + 2]}; };
    return {set(0), set(3), set(6), set(9)};
}

// Seeded multistart simplex search over the 12 restricted parameters.
inline OptimizeResult optimize12(int multistart, std::uint64_t seed, const PureState& state) {
    if (multistart < 1) throw std::invalid_argument("optimize12: multistart must be >= 1");
    const auto c = detail::amplitude_matrix(state);
    auto objective = [&](const std::vector<double>& v) {
        const SettingsQuartet q = quartet_from_params(v);
        auto table = [&](int ai, int bi) {
            const QutritSetting& sa = ai == 0 ? q.A1 : q.A2;
            const QutritSetting& sb = bi == 0 ? q.B1 : q.B2;
            return detail::joint_probs_matrix(c, u_tot(sa), u_tot(sb));
        };
        double s = 0;
        for (double b : detail::b_values_impl(table)) s += b;
        return -s;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, std::numbers::pi);
    OptimizeResult best;
    for (int k = 0; k < multistart; ++k) {
        std::vector<double> start(12);
        for (double& x : start) x = uni(rng);
        SimplexResult r = nelder_mead(objective, std::move(start));
        best.evaluations += r.evaluations;
        if (-r.value > best.i3) {
            best.i3 = -r.value;
            best.settings = quartet_from_params(r.x);
        }
    }
    return best;
}

// --- unrestricted U(3) optimization --------------------------------------

// General U(3) up to global phase: three Givens rotations with phases plus
// two diagonal phases (8 parameters).
inline MatrixBlock u3_from_params(const double* v) {
    auto givens = [](int i, int j, double th, double ph) {
        MatrixBlock g;
        g.dim = 3;
        for (int k = 0; k < 3; ++k) g.at(k, k) = 1.0;
        g.at(i, i) = std::cos(th);
        g.at(j, j) = std::cos(th);
        g.at(i, j) = -std::sin(th) * std::polar(1.0, -ph);
        g.at(j, i) = std::sin(th) * std::polar(1.0, ph);
        return g;
    };
    MatrixBlock d;
    d.dim = 3;
    d.at(0, 0) = std::polar(1.0, v[0]);
    d.at(1, 1) = std::polar(1.0, v[1]);
    d.at(2, 2) = 1.0;
    return matmul(givens(1, 2, v[2], v[3]),
                  matmul(givens(0, 2, v[4], v[5]), matmul(givens(0, 1, v[6], v[7]), d)));
}

struct GeneralOptimizeResult {
    double i3 = -4.0;
    std::vector<double> params;  // 32 entries, 8 per unitary (A1, A2, B1, B2)
    std::size_t evaluations = 0;
};

// Multistart search over four general unitaries; each start is polished by
// a second simplex run from its own optimum.
inline GeneralOptimizeResult optimize_general(int multistart, std::uint64_t seed,
                                              const PureState& state) {
    if (multistart < 1) throw std::invalid_argument("optimize_general: multistart must be >= 1");
    const auto c = detail::amplitude_matrix(state);
    auto objective = [&](const std::vector<double>& v) {
        auto table = [&](int ai, int bi) {
            const MatrixBlock ua = u3_from_params(v.data() + (ai == 0 ? 0 : 8));
            const MatrixBlock ub = u3_from_params(v.data() + (bi == 0 ? 16 : 24));
            return detail::joint_probs_matrix(c, ua, ub);
        };
        double s = 0;
        for (double b : detail::b_values_impl(table)) s += b;
        return -s;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
    GeneralOptimizeResult best;
    for (int k = 0; k < multistart; ++k) {
        std::vector<double> start(32);
        for (double& x : start) x = uni(rng);
        SimplexResult r = nelder_mead(objective, std::move(start), {0.5, 1e-10, 20000});
        r = nelder_mead(objective, std::move(r.x), {0.1, 1e-10, 20000});  // polish
        best.evaluations += r.evaluations;
        if (-r.value > best.i3) {
            best.i3 = -r.value;
            best.params = std::move(r.x);
        }
    }
    return best;
}

// Minimizes B1 over two general unitaries; unrestricted measurements can
// push it well below the -1/3 floor of the restricted family.
inline double minimize_b1_general(int multistart, std::uint64_t seed, const PureState& state) {
    const auto c = detail::amplitude_matrix(state);
    auto objective = [&](const std::vector<double>& v) {
        const MatrixBlock ua = u3_from_params(v.data());
        const MatrixBlock ub = u3_from_params(v.data() + 8);
        const JointProbTable t = detail::joint_probs_matrix(c, ua, ub);
        return prob_shift(t, 0, ShiftDirection::AEqualsBPlusK) -
               prob_shift(t, -1, ShiftDirection::AEqualsBPlusK);
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
    double best = 1.0;
    for (int k = 0; k < multistart; ++k) {
        std::vector<double> start(16);
        for (double& x : start) x = uni(rng);
        SimplexResult r = nelder_mead(objective, std::move(start), {0.5, 1e-10, 20000});
        best = std::min(best, r.value);
    }
    return best;
}

}  // namespace heraldq
