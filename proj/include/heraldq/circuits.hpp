// circuits.hpp
// The named linear-optical constructions: truncated PDC source, heralded
// Bell-pair generator, heralded two-qutrit (and qudit) generation, the
// unbalanced (2,1,2)/3 resource, and conclusive qutrit teleportation.
// Every routine returns exact states and probabilities.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "detection.hpp"
#include "elements.hpp"
#include "fock.hpp"

namespace heraldq {

// |ψ^d⟩ = (1/√d) Σ_i |d-1-i, i⟩_A |d-1-i, i⟩_B.
inline PureState max_entangled(int d) {
    if (d < 1) throw std::invalid_argument("max_entangled: d must be >= 1");
    PureState s(2);
    const double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) {
        Occupation o{d - 1 - i, i};
        s.add({o, o}, a);
    }
    return s;
}

inline PureState bell_pair() { return max_entangled(2); }

// cosϑ |1,0⟩|1,0⟩ + e^{iφ} sinϑ |0,1⟩|0,1⟩.
inline PureState unbalanced_bell(double vartheta, double phi) {
    PureState s(2);
    s.add({{1, 0}, {1, 0}}, std::cos(vartheta));
    s.add({{0, 1}, {0, 1}}, std::polar(std::sin(vartheta), phi));
    s.prune();
    return s;
}

struct PdcParams {
    double tau = 0.0;  // effective interaction time
    int d_max = 3;     // truncation order
};

// Pair-number weights tanh^{d-1}τ / cosh²τ.
inline double pdc_alpha(double tau, int d) {
    return std::pow(std::tanh(tau), d - 1) / (std::cosh(tau) * std::cosh(tau));
}

// Σ_d d α_d² over the kept orders.
inline double pdc_norm_factor(const PdcParams& p) {
    double n = 0;
    for (int d = 1; d <= p.d_max; ++d) n += d * pdc_alpha(p.tau, d) * pdc_alpha(p.tau, d);
    return n;
}

// |ψ⁻_d⟩ = (1/√d) Σ_i (-1)^i |d-i-1, i⟩_A |i, d-i-1⟩_B.
inline PureState pdc_singlet(int d) {
    PureState s(2);
    const double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i)
        s.add({{d - i - 1, i}, {i, d - i - 1}}, (i % 2 == 0 ? a : -a));
    return s;
}

// Truncated Type-II PDC state (1/√N) Σ_d √d α_d |ψ⁻_d⟩.
inline PureState pdc_truncated(const PdcParams& p) {
    if (p.tau < 0) throw std::invalid_argument("pdc_truncated: tau must be >= 0");
    if (p.d_max < 1 || p.d_max > 4)
        throw std::invalid_argument("pdc_truncated: d_max must be in [1,4]");
    PureState s(2);
    for (int d = 1; d <= p.d_max; ++d) {
        const double w = std::sqrt(static_cast<double>(d)) * pdc_alpha(p.tau, d);
        for (const auto& [occ, amp] : pdc_singlet(d).amplitudes) s.add(occ, w * amp);
    }
    s.normalize();
    s.prune();
    return s;
}

// PDC state after the π/2 polarization rotation in mode B; equals
// (1/√N)(α₁|ψ¹⟩ - √2 α₂|ψ²⟩ + √3 α₃|ψ³⟩) for d_max = 3. The rotation
// direction is -π/2 under this library's rotator sign convention; +π/2
// produces the same state with the two-pair term's sign flipped.
inline PureState pdc_rotated(const PdcParams& p) {
    return apply_rotator(pdc_truncated(p), 1, -std::numbers::pi / 2);
}

// Weight of the qutrit component, 3α₃²/N.
inline double pdc_qutrit_weight(const PdcParams& p) {
    const double a3 = pdc_alpha(p.tau, 3);
    return 3.0 * a3 * a3 / pdc_norm_factor(p);
}

// --- heralded qutrit circuit (two BSs + two null detections) -------------

// Mixes AB with CD on BS_AC and BS_BD (modes A=0,B=1,C=2,D=3) and heralds
// on null detections in C and D. The returned conditional state keeps all
// four modes, with C and D in vacuum.
inline HeraldRecord herald_qutrit(const PureState& input_AB, const PureState& input_CD) {
    if (input_AB.mode_count != 2 || input_CD.mode_count != 2)
        throw std::invalid_argument("herald_qutrit: inputs must be two-mode states");
    PureState s = tensor(input_AB, input_CD);
    s = apply_bs(s, 0, 2);
    s = apply_bs(s, 1, 3);
    HeraldRecord nullC = threshold_null(s, 2);
    if (!nullC.possible()) return nullC;
    HeraldRecord nullD = threshold_null(nullC.state, 3);
    nullD.probability *= nullC.probability;
    nullD.outcome_label = "null@C,null@D";
    return nullD;
}

// Drops trailing vacuum heralding modes, returning the two-mode AB state.
inline PureState drop_vacuum_tail(const PureState& state, std::size_t keep) {
    PureState out(keep);
    for (const auto& [occ, amp] : state.amplitudes) {
        for (std::size_t i = keep; i < occ.size(); ++i)
            if (occ[i].total() != 0)
                throw std::invalid_argument("drop_vacuum_tail: mode not in vacuum");
        out.add(OccupationVector(occ.begin(), occ.begin() + keep), amp);
    }
    return out;
}

struct UnbalancedParams {
    double vartheta = 0.0;
    double phi = 0.0;
};

// Closed-form normalization of the unbalanced output amplitudes
// (cosϑ, (cosϑ + e^{iφ} sinϑ)/2, e^{iφ} sinϑ).
inline double unbalanced_norm_factor(const UnbalancedParams& p) {
    return (5.0 + std::cos(p.phi) * std::sin(2.0 * p.vartheta)) / 4.0;
}

inline QutritAmplitudes unbalanced_amplitudes(const UnbalancedParams& p) {
    const double rn = std::sqrt(unbalanced_norm_factor(p));
    const cplx e = std::polar(1.0, p.phi);
    QutritAmplitudes q;
    q.a0 = std::cos(p.vartheta) / rn;
    q.a1 = (std::cos(p.vartheta) + e * std::sin(p.vartheta)) / (2.0 * rn);
    q.a2 = e * std::sin(p.vartheta) / rn;
    return q;
}

// Heralded unbalanced two-qutrit state from an unbalanced Bell pair in AB
// and a balanced one in CD.
inline HeraldRecord herald_unbalanced(const UnbalancedParams& p) {
    return herald_qutrit(unbalanced_bell(p.vartheta, p.phi), bell_pair());
}

// --- heralded Bell-pair generator (four single photons) ------------------

// Acceptance set and per-pattern output of the fusion stage.
struct FusionBranch {
    Occupation detector_a;  // counting outcome at the first detector
    Occupation detector_b;  // and at the second
    double probability = 0.0;
    PureState state;  // conditional two-mode output (modes A, B)
};

struct HbpgResult {
    double total_probability = 0.0;
    std::vector<FusionBranch> branches;
};

// Two fusion layouts. PlainFusion detects directly after the fusion PBS and
// a U(π/4) on each detector mode; it accepts with total probability 1/4 but
// each branch carries equal-weight bunched terms alongside the Bell
// component. RotatedFusion adds a U(π/4) on each detector mode before the
// fusion PBS as well (eight rotators in total); the bunched terms then land
// as two photons in one detector and are rejected, leaving four clean Bell
// branches with total probability 1/8.
enum class FusionKind { PlainFusion, RotatedFusion };

inline HbpgResult hbpg(FusionKind kind = FusionKind::PlainFusion) {
    const double q = std::numbers::pi / 4;
    // modes: 0 = A (output), 1 and 2 = detected, 3 = B (output)
    PureState s = basis_state({{1, 0}, {1, 0}, {1, 0}, {1, 0}});
    for (ModeId m = 0; m < 4; ++m) s = apply_rotator(s, m, q);
    s = apply_pbs(s, 0, 1);
    s = apply_pbs(s, 2, 3);
    if (kind == FusionKind::RotatedFusion) {
        s = apply_rotator(s, 1, q);
        s = apply_rotator(s, 2, q);
    }
    s = apply_pbs(s, 1, 2);
    s = apply_rotator(s, 1, q);
    s = apply_rotator(s, 2, q);

    HbpgResult res;
    const std::array<Occupation, 2> outcomes{{{1, 0}, {0, 1}}};
    for (const auto& oa : outcomes) {
        HeraldRecord first = postselect_counts(s, 1, oa.h, oa.v);
        if (!first.possible()) continue;
        for (const auto& ob : outcomes) {
            // after removing mode 1, the second detector sits at index 1
            HeraldRecord second = postselect_counts(first.state, 1, ob.h, ob.v);
            if (!second.possible()) continue;
            FusionBranch br;
            br.detector_a = oa;
            br.detector_b = ob;
            br.probability = first.probability * second.probability;
            br.state = second.state;
            res.total_probability += br.probability;
            res.branches.push_back(std::move(br));
        }
    }
    return res;
}

// Best fidelity of a two-mode, one-photon-per-mode branch with a Bell pair
// (|HH⟩ + |VV⟩)/√2 after the branch's own fixed local correction
// (polarization flips and phases per mode). Used to certify HBPG branches.
inline double bell_fidelity_after_correction(const PureState& branch) {
    // amplitude matrix over per-mode polarization (H=0, V=1); any weight
    // outside the one-photon-per-mode subspace caps the fidelity.
    std::array<std::array<cplx, 2>, 2> mat{};
    for (const auto& [occ, amp] : branch.amplitudes) {
        if (occ[0].total() == 1 && occ[1].total() == 1)
            mat[occ[0].v][occ[1].v] = amp;
    }
    // candidate corrections: identity or V-flip on either side, then phases.
    // After correction the target is (|HH⟩ + |VV⟩)/√2, so the achievable
    // fidelity is max over pairings of (|x| + |y|)²/2 for the matched pair.
    const double diag = std::pow(std::abs(mat[0][0]) + std::abs(mat[1][1]), 2) / 2.0;
    const double anti = std::pow(std::abs(mat[0][1]) + std::abs(mat[1][0]), 2) / 2.0;
    return std::max(diag, anti);
}

// --- qudit nesting -------------------------------------------------------

struct NestResult {
    PureState state;                     // final |ψ^d⟩ (two modes)
    std::vector<double> step_probability;  // heralding probability per step
    double cumulative_probability = 1.0;
};

// Iterates the heralding circuit with |ψ^{d-1}⟩ and a fresh Bell pair per
// step. The detected modes are removed between steps.
inline NestResult nest_qudit(int d) {
    if (d < 3 || d > 6) throw std::invalid_argument("nest_qudit: d must be in [3,6]");
    NestResult res;
    res.state = bell_pair();
    for (int k = 3; k <= d; ++k) {
        HeraldRecord rec = herald_qutrit(res.state, bell_pair());
        res.step_probability.push_back(rec.probability);
        res.cumulative_probability *= rec.probability;
        res.state = drop_vacuum_tail(rec.state, 2);
    }
    return res;
}

// --- Appendix-B unbalanced (2,1,2)/3 resource ----------------------------

// (2|0⟩|0⟩ + |1⟩|1⟩ + 2|2⟩|2⟩)/3 in the photonic qutrit encoding.
inline PureState unbalanced_212_ket() {
    QutritAmplitudes q{2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0};
    return qutrit_pair_ket(q);
}

// (|2,0⟩|2,0⟩ + |0,2⟩|0,2⟩)/√2, the plus-sign intermediate.
inline PureState sign_fixed_bell4() {
    PureState s(2);
    const double a = 1.0 / std::sqrt(2.0);
    s.add({{2, 0}, {2, 0}}, a);
    s.add({{0, 2}, {0, 2}}, a);
    return s;
}

// Builds the (2,1,2)/3 state: sign-fix the four-photon Bell pair, mix with
// the (4,1)/√17 ancilla pair on the two BSs, detect one horizontal photon
// in each auxiliary mode.
inline HeraldRecord build_unbalanced_212() {
    // starting point: the φ=π heralded output (|2,0⟩|2,0⟩ - |0,2⟩|0,2⟩)/√2
    PureState s(2);
    const double a = 1.0 / std::sqrt(2.0);
    s.add({{2, 0}, {2, 0}}, a);
    s.add({{0, 2}, {0, 2}}, -a);
    // relative-phase fix: a δV = π/2 phase on mode A maps the minus sign to
    // plus (each V photon pair picks up e^{iπ})
    s = apply_phase(s, 0, 0.0, std::numbers::pi / 2);

    PureState ancilla(2);
    const double rn = std::sqrt(17.0);
    ancilla.add({{1, 0}, {1, 0}}, 4.0 / rn);
    ancilla.add({{0, 1}, {0, 1}}, 1.0 / rn);

    PureState merged = tensor(s, ancilla);
    merged = apply_bs(merged, 0, 2);
    merged = apply_bs(merged, 1, 3);
    HeraldRecord first = postselect_counts(merged, 2, 1, 0);
    if (!first.possible()) return first;
    HeraldRecord second = postselect_counts(first.state, 2, 1, 0);
    second.probability *= first.probability;
    second.outcome_label = "H@C,H@D";
    return second;
}

// --- conclusive teleportation --------------------------------------------

struct TeleportPattern {
    Occupation detector_b;
    Occupation detector_c;
    double probability = 0.0;          // for the given input
    QutritAmplitudes output;           // corrected conditional state in mode A
    std::array<cplx, 3> correction{};  // diagonal correction that was applied
};

struct TeleportResult {
    double conclusive_probability = 0.0;
    std::vector<TeleportPattern> patterns;
};

namespace detail {

// Effective qutrit-space operator of one detection pattern, columns built
// by propagating the three basis inputs through the circuit.
struct TeleportKraus {
    Occupation det_b, det_c;
    std::array<std::array<cplx, 3>, 3> op{};
};

inline const std::vector<TeleportKraus>& teleport_kraus_table() {
    static const std::vector<TeleportKraus> table = [] {
        const double q = std::numbers::pi / 4;
        std::map<std::pair<Occupation, Occupation>, std::array<std::array<cplx, 3>, 3>> acc;
        for (int b = 0; b < 3; ++b) {
            QutritAmplitudes in;
            (b == 0 ? in.a0 : b == 1 ? in.a1 : in.a2) = 1.0;
            PureState s = tensor(unbalanced_212_ket(), qutrit_ket(in));  // modes A,B,C
            s = apply_pbs(s, 1, 2);
            s = apply_rotator(s, 1, q);
            s = apply_rotator(s, 2, q);
            for (const auto& [occ, amp] : s.amplitudes) {
                if (occ[1].total() + occ[2].total() != 4) continue;
                int level = -1;
                for (int i = 0; i < 3; ++i)
                    if (occ[0] == qutrit_occupation(i)) level = i;
                if (level < 0) continue;  // output outside the qutrit subspace
                acc[{occ[1], occ[2]}][level][b] += amp;
            }
        }
        std::vector<TeleportKraus> out;
        for (const auto& [pat, op] : acc) out.push_back({pat.first, pat.second, op});
        return out;
    }();
    return table;
}

// A pattern is conclusive iff its operator satisfies M†M = c·I; the
// correction is then the diagonal unitary M/√c (all conclusive patterns
// turn out diagonal).
inline bool is_conclusive(const std::array<std::array<cplx, 3>, 3>& m, double& c_out) {
    std::array<std::array<cplx, 3>, 3> g{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            for (int k = 0; k < 3; ++k) g[r][c] += std::conj(m[k][r]) * m[k][c];
    const double c = (g[0][0].real() + g[1][1].real() + g[2][2].real()) / 3.0;
    if (c < kZeroBranch) return false;
    for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 3; ++col) {
            const cplx want = (r == col) ? cplx{c, 0} : cplx{0, 0};
            if (std::abs(g[r][col] - want) > 1e-10) return false;
        }
    c_out = c;
    return true;
}

}  // namespace detail

// Teleports an arbitrary qutrit through the (2,1,2)/3 resource. Enumerates
// every four-photon detection pattern on modes B and C; the conclusive
// subset reproduces the input up to a fixed diagonal correction.
inline TeleportResult teleport(const QutritAmplitudes& input) {
    if (std::abs(input.norm_squared() - 1.0) > kNormTolerance)
        throw std::invalid_argument("teleport: input must be normalized");
    TeleportResult res;
    const cplx in[3] = {input.a0, input.a1, input.a2};
    for (const auto& kraus : detail::teleport_kraus_table()) {
        double c = 0;
        if (!detail::is_conclusive(kraus.op, c)) continue;
        TeleportPattern pat;
        pat.detector_b = kraus.det_b;
        pat.detector_c = kraus.det_c;
        cplx out[3] = {};
        for (int r = 0; r < 3; ++r)
            for (int k = 0; k < 3; ++k) out[r] += kraus.op[r][k] * in[k];
        pat.probability = std::norm(out[0]) + std::norm(out[1]) + std::norm(out[2]);
        // undo the pattern's unitary M/√c by applying its adjoint:
        // M†(Mψ) = cψ, so the corrected, renormalized output equals ψ.
        cplx corrected[3] = {};
        for (int r = 0; r < 3; ++r)
            for (int k = 0; k < 3; ++k) corrected[r] += std::conj(kraus.op[k][r]) * out[k];
        for (int r = 0; r < 3; ++r) {
            corrected[r] /= c;
            pat.correction[r] = kraus.op[r][r] / std::sqrt(c);
        }
        pat.output = {corrected[0], corrected[1], corrected[2]};
        res.conclusive_probability += pat.probability;
        res.patterns.push_back(std::move(pat));
    }
    return res;
}

}  // namespace heraldq
