// elements.hpp
// The optical element set as exact unitary actions on PureState, applied by
// creation-operator substitution with multinomial expansion. Closed-form
// one- and two-photon matrix blocks are provided alongside for the
// polarization rotator and phase shifter.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fock.hpp"

namespace heraldq {

// A dense 2x2 or 3x3 unitary block with its basis label list.
struct MatrixBlock {
    std::size_t dim = 0;
    std::array<std::array<cplx, 3>, 3> m{};  // top-left dim x dim is valid
    std::vector<std::string> basis;

    cplx operator()(std::size_t r, std::size_t c) const { return m[r][c]; }
    cplx& at(std::size_t r, std::size_t c) { return m[r][c]; }
};

inline MatrixBlock matmul(const MatrixBlock& a, const MatrixBlock& b) {
    if (a.dim != b.dim) throw std::invalid_argument("matmul: dimension mismatch");
    MatrixBlock out;
    out.dim = a.dim;
    out.basis = a.basis;
    for (std::size_t r = 0; r < a.dim; ++r)
        for (std::size_t c = 0; c < a.dim; ++c) {
            cplx s{0, 0};
            for (std::size_t k = 0; k < a.dim; ++k) s += a(r, k) * b(k, c);
            out.at(r, c) = s;
        }
    return out;
}

inline bool is_unitary(const MatrixBlock& u, double tol = 1e-10) {
    for (std::size_t r = 0; r < u.dim; ++r)
        for (std::size_t c = 0; c < u.dim; ++c) {
            cplx s{0, 0};
            for (std::size_t k = 0; k < u.dim; ++k) s += std::conj(u(k, r)) * u(k, c);
            if (std::abs(s - (r == c ? cplx{1, 0} : cplx{0, 0})) > tol) return false;
        }
    return true;
}

namespace detail {

// Slot = one (mode, polarization) creation operator.
struct Slot {
    ModeId mode;
    Pol pol;
};

inline int& slot_count(OccupationVector& occ, const Slot& s) {
    return s.pol == Pol::H ? occ[s.mode].h : occ[s.mode].v;
}

inline double binom(int n, int k) {
    return factorial(n) / (factorial(k) * factorial(n - k));
}

// Applies the substitution  a†_1 -> u00 a†_1 + u10 a†_2,
//                           a†_2 -> u01 a†_1 + u11 a†_2
// exactly on every basis entry, expanding the resulting binomials.
inline PureState mix_slots(const PureState& state, const Slot& s1, const Slot& s2,
                           const std::array<std::array<cplx, 2>, 2>& u) {
    PureState out(state.mode_count);
    for (const auto& [occ, amp] : state.amplitudes) {
        OccupationVector base = occ;
        const int m = std::exchange(slot_count(base, s1), 0);
        const int n = std::exchange(slot_count(base, s2), 0);
        const cplx pref = amp / std::sqrt(factorial(m) * factorial(n));
        for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= n; ++j) {
                cplx coeff = pref * binom(m, i) * binom(n, j);
                coeff *= std::pow(u[0][0], i) * std::pow(u[1][0], m - i);
                coeff *= std::pow(u[0][1], j) * std::pow(u[1][1], n - j);
                const int p = i + j;
                const int q = (m - i) + (n - j);
                OccupationVector k = base;
                slot_count(k, s1) = p;
                slot_count(k, s2) = q;
                out.add(k, coeff * std::sqrt(factorial(p) * factorial(q)));
            }
        }
    }
    out.prune();
    return out;
}

}  // namespace detail

// 50:50 beam splitter between spatial modes a and c, acting on both
// polarizations: a† -> (a† + i c†)/√2, c† -> (i a† + c†)/√2.
inline PureState apply_bs(const PureState& state, ModeId a, ModeId c) {
    if (a == c) throw std::invalid_argument("apply_bs: modes must differ");
    if (a >= state.mode_count || c >= state.mode_count)
        throw std::invalid_argument("apply_bs: mode out of range");
    const double r = 1.0 / std::sqrt(2.0);
    const std::array<std::array<cplx, 2>, 2> u{{{cplx{r, 0}, cplx{0, r}},
                                                {cplx{0, r}, cplx{r, 0}}}};
    PureState s = detail::mix_slots(state, {a, Pol::H}, {c, Pol::H}, u);
    return detail::mix_slots(s, {a, Pol::V}, {c, Pol::V}, u);
}

// Polarization rotator: a†_H -> cosθ a†_H - sinθ a†_V,
//                       a†_V -> sinθ a†_H + cosθ a†_V.
// Signs fixed so the one- and two-photon actions equal the U2/U3 blocks
// below under the column-vector convention.
inline PureState apply_rotator(const PureState& state, ModeId mode, double theta) {
    if (mode >= state.mode_count) throw std::invalid_argument("apply_rotator: mode out of range");
    const double c = std::cos(theta), s = std::sin(theta);
    const std::array<std::array<cplx, 2>, 2> u{{{cplx{c, 0}, cplx{s, 0}},
                                                {cplx{-s, 0}, cplx{c, 0}}}};
    return detail::mix_slots(state, {mode, Pol::H}, {mode, Pol::V}, u);
}

// Phase shifter in both polarizations: each entry with (m,n) photons in the
// mode acquires e^{i(m δH + n δV)}.
inline PureState apply_phase(const PureState& state, ModeId mode, double dH, double dV) {
    if (mode >= state.mode_count) throw std::invalid_argument("apply_phase: mode out of range");
    PureState out(state.mode_count);
    for (const auto& [occ, amp] : state.amplitudes) {
        const double phi = occ[mode].h * dH + occ[mode].v * dV;
        out.amplitudes.emplace(occ, amp * std::polar(1.0, phi));
    }
    return out;
}

// Polarizing beam splitter: H transmitted, V exchanged between the two
// modes, no reflection phase. Involutive under this convention.
inline PureState apply_pbs(const PureState& state, ModeId a, ModeId b) {
    if (a == b) throw std::invalid_argument("apply_pbs: modes must differ");
    if (a >= state.mode_count || b >= state.mode_count)
        throw std::invalid_argument("apply_pbs: mode out of range");
    PureState out(state.mode_count);
    for (const auto& [occ, amp] : state.amplitudes) {
        OccupationVector k = occ;
        std::swap(k[a].v, k[b].v);
        out.add(k, amp);
    }
    return out;
}

// One-photon (U2) and two-photon (U3) rotator blocks on the column bases
// (|1,0⟩, |0,1⟩) and (|2,0⟩, |1,1⟩, |0,2⟩).
inline MatrixBlock rotator_block(double theta, int photons) {
    const double c = std::cos(theta), s = std::sin(theta);
    MatrixBlock b;
    if (photons == 1) {
        b.dim = 2;
        b.basis = {"|1,0>", "|0,1>"};
        b.at(0, 0) = c;  b.at(0, 1) = s;
        b.at(1, 0) = -s; b.at(1, 1) = c;
    } else if (photons == 2) {
        const double r2 = std::sqrt(2.0);
        b.dim = 3;
        b.basis = {"|2,0>", "|1,1>", "|0,2>"};
        b.at(0, 0) = c * c;       b.at(0, 1) = r2 * c * s;    b.at(0, 2) = s * s;
        b.at(1, 0) = -r2 * c * s; b.at(1, 1) = c * c - s * s; b.at(1, 2) = r2 * c * s;
        b.at(2, 0) = s * s;       b.at(2, 1) = -r2 * c * s;   b.at(2, 2) = c * c;
    } else {
        throw std::invalid_argument("rotator_block: photons must be 1 or 2");
    }
    return b;
}

// One-photon (P2) and two-photon (P3) phase-shifter blocks, same bases.
inline MatrixBlock phase_block(double dH, double dV, int photons) {
    MatrixBlock b;
    if (photons == 1) {
        b.dim = 2;
        b.basis = {"|1,0>", "|0,1>"};
        b.at(0, 0) = std::polar(1.0, dH);
        b.at(1, 1) = std::polar(1.0, dV);
    } else if (photons == 2) {
        b.dim = 3;
        b.basis = {"|2,0>", "|1,1>", "|0,2>"};
        b.at(0, 0) = std::polar(1.0, 2 * dH);
        b.at(1, 1) = std::polar(1.0, dH + dV);
        b.at(2, 2) = std::polar(1.0, 2 * dV);
    } else {
        throw std::invalid_argument("phase_block: photons must be 1 or 2");
    }
    return b;
}

}  // namespace heraldq
