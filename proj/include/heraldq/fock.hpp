// fock.hpp
// Sparse second-quantized representation of multi-mode polarized photonic
// pure states. Basis labels are per-mode occupation pairs (m horizontal,
// n vertical photons); amplitudes live in a sorted associative map so that
// iteration order is the canonical (mode, m, n) lexicographic order.

#pragma once

#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace heraldq {

using cplx = std::complex<double>;

using ModeId = std::size_t;

enum class Pol : int { H = 0, V = 1 };

// Photon counts of one spatial mode: m horizontal, n vertical.
struct Occupation {
    int h = 0;
    int v = 0;
    friend auto operator<=>(const Occupation&, const Occupation&) = default;
    int total() const { return h + v; }
};

// One computational basis label: an occupation per spatial mode.
using OccupationVector = std::vector<Occupation>;

inline int total_photons_of(const OccupationVector& occ) {
    int t = 0;
    for (const auto& o : occ) t += o.total();
    return t;
}

// Amplitudes below this are dropped after every element application; exact
// cancellations in the circuits otherwise leave numerically-zero entries.
inline constexpr double kPruneEpsilon = 1e-14;

inline constexpr double kNormTolerance = 1e-12;

inline double factorial(int n) {
    static const double table[] = {1., 1., 2., 6., 24., 120., 720., 5040.,
                                   40320., 362880., 3628800., 39916800., 479001600.};
    return table[n];
}

// A sparse pure state over a fixed number of spatial modes.
struct PureState {
    std::size_t mode_count = 0;
    std::map<OccupationVector, cplx> amplitudes;

    PureState() = default;
    explicit PureState(std::size_t modes) : mode_count(modes) {}

    bool empty() const { return amplitudes.empty(); }

    void add(const OccupationVector& occ, cplx amp) {
        auto [it, inserted] = amplitudes.try_emplace(occ, amp);
        if (!inserted) it->second += amp;
    }

    void prune(double eps = kPruneEpsilon) {
        for (auto it = amplitudes.begin(); it != amplitudes.end();) {
            if (std::abs(it->second) < eps)
                it = amplitudes.erase(it);
            else
                ++it;
        }
    }

    double norm_squared() const {
        double s = 0;
        for (const auto& [occ, amp] : amplitudes) s += std::norm(amp);
        return s;
    }

    bool is_normalized(double tol = kNormTolerance) const {
        return std::abs(norm_squared() - 1.0) <= tol;
    }

    PureState& scale(cplx factor) {
        for (auto& [occ, amp] : amplitudes) amp *= factor;
        return *this;
    }

    PureState& normalize() {
        double n = std::sqrt(norm_squared());
        if (n > 0) scale(1.0 / n);
        return *this;
    }
};

// |0,0,...⟩ over the given number of modes.
inline PureState vacuum(std::size_t mode_count) {
    if (mode_count == 0) throw std::invalid_argument("vacuum: mode_count must be >= 1");
    PureState s(mode_count);
    s.amplitudes.emplace(OccupationVector(mode_count), cplx{1.0, 0.0});
    return s;
}

// Creation operator a†_pol on the given mode: |n⟩ -> √(n+1)|n+1⟩ per entry.
// The result is generally unnormalized.
inline PureState create(const PureState& state, ModeId mode, Pol pol) {
    if (mode >= state.mode_count) throw std::invalid_argument("create: mode out of range");
    PureState out(state.mode_count);
    for (const auto& [occ, amp] : state.amplitudes) {
        OccupationVector k = occ;
        int& n = (pol == Pol::H) ? k[mode].h : k[mode].v;
        ++n;
        out.add(k, amp * std::sqrt(static_cast<double>(n)));
    }
    return out;
}

// Normalized basis ket |m0,n0⟩ ⊗ |m1,n1⟩ ⊗ ...
inline PureState basis_state(const std::vector<std::pair<int, int>>& spec) {
    PureState s(spec.size());
    OccupationVector occ;
    occ.reserve(spec.size());
    for (auto [m, n] : spec) {
        if (m < 0 || n < 0) throw std::invalid_argument("basis_state: negative photon count");
        occ.push_back({m, n});
    }
    s.amplitudes.emplace(std::move(occ), cplx{1.0, 0.0});
    return s;
}

// ⟨a|b⟩, conjugating a's amplitudes.
inline cplx inner(const PureState& a, const PureState& b) {
    if (a.mode_count != b.mode_count)
        throw std::invalid_argument("inner: mode count mismatch");
    cplx s{0, 0};
    // iterate the smaller map
    const PureState& small = a.amplitudes.size() <= b.amplitudes.size() ? a : b;
    const PureState& large = a.amplitudes.size() <= b.amplitudes.size() ? b : a;
    const bool small_is_a = &small == &a;
    for (const auto& [occ, amp] : small.amplitudes) {
        auto it = large.amplitudes.find(occ);
        if (it == large.amplitudes.end()) continue;
        s += small_is_a ? std::conj(amp) * it->second : std::conj(it->second) * amp;
    }
    return s;
}

// Tensor product; b's modes are appended after a's.
inline PureState tensor(const PureState& a, const PureState& b) {
    PureState out(a.mode_count + b.mode_count);
    for (const auto& [ka, va] : a.amplitudes) {
        for (const auto& [kb, vb] : b.amplitudes) {
            OccupationVector k = ka;
            k.insert(k.end(), kb.begin(), kb.end());
            out.add(k, va * vb);
        }
    }
    out.prune();
    return out;
}

// |⟨a|b⟩|² for normalized states; global-phase insensitive.
inline double fidelity(const PureState& a, const PureState& b) {
    if (!a.is_normalized() || !b.is_normalized())
        throw std::invalid_argument("fidelity: inputs must be normalized");
    return std::norm(inner(a, b));
}

// Distribution of the total photon number.
inline std::map<int, double> total_photons(const PureState& state) {
    std::map<int, double> dist;
    for (const auto& [occ, amp] : state.amplitudes)
        dist[total_photons_of(occ)] += std::norm(amp);
    return dist;
}

// Linear combination helper: out = alpha*a + beta*b (same mode sets).
inline PureState superpose(cplx alpha, const PureState& a, cplx beta, const PureState& b) {
    if (a.mode_count != b.mode_count)
        throw std::invalid_argument("superpose: mode count mismatch");
    PureState out(a.mode_count);
    for (const auto& [occ, amp] : a.amplitudes) out.add(occ, alpha * amp);
    for (const auto& [occ, amp] : b.amplitudes) out.add(occ, beta * amp);
    out.prune();
    return out;
}

// Amplitudes of a two-mode state of the Σ a_i |2-i,i⟩|2-i,i⟩ form, or of a
// single-mode qutrit in the |2,0⟩,|1,1⟩,|0,2⟩ basis.
struct QutritAmplitudes {
    cplx a0{0, 0}, a1{0, 0}, a2{0, 0};

    double norm_squared() const { return std::norm(a0) + std::norm(a1) + std::norm(a2); }
};

inline Occupation qutrit_occupation(int level) { return {2 - level, level}; }

// Single-mode qutrit ket from amplitudes.
inline PureState qutrit_ket(const QutritAmplitudes& q) {
    PureState s(1);
    const cplx a[3] = {q.a0, q.a1, q.a2};
    for (int i = 0; i < 3; ++i)
        if (std::abs(a[i]) > 0) s.add({qutrit_occupation(i)}, a[i]);
    return s;
}

// Two-mode correlated ket Σ a_i |2-i,i⟩|2-i,i⟩ from amplitudes.
inline PureState qutrit_pair_ket(const QutritAmplitudes& q) {
    PureState s(2);
    const cplx a[3] = {q.a0, q.a1, q.a2};
    for (int i = 0; i < 3; ++i)
        if (std::abs(a[i]) > 0) s.add({qutrit_occupation(i), qutrit_occupation(i)}, a[i]);
    return s;
}

// Extract the a_i from a state of the qutrit_pair_ket form; entries outside
// that form raise invalid-argument.
inline QutritAmplitudes extract_pair_amplitudes(const PureState& state) {
    if (state.mode_count != 2)
        throw std::invalid_argument("extract_pair_amplitudes: expected a two-mode state");
    QutritAmplitudes q;
    for (const auto& [occ, amp] : state.amplitudes) {
        bool matched = false;
        for (int i = 0; i < 3; ++i) {
            if (occ[0] == qutrit_occupation(i) && occ[1] == qutrit_occupation(i)) {
                (i == 0 ? q.a0 : i == 1 ? q.a1 : q.a2) = amp;
                matched = true;
                break;
            }
        }
        if (!matched)
            throw std::invalid_argument("extract_pair_amplitudes: state outside the correlated qutrit subspace");
    }
    return q;
}

}  // namespace heraldq
