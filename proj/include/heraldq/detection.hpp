// detection.hpp
// Ideal threshold-detector POVM, polarization-resolved photon counting,
// post-selection and heralding with exact probability accounting.

#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "fock.hpp"

namespace heraldq {

// Probabilities below this are analytic zeros: the branch is impossible and
// its state is left empty.
inline constexpr double kZeroBranch = 1e-13;

// A conditional state together with the exact probability of the heralding
// event that produced it.
struct HeraldRecord {
    double probability = 0.0;
    PureState state;
    std::string outcome_label;

    bool possible() const { return probability > 0.0; }
};

namespace detail {

inline HeraldRecord make_record(PureState projected, std::string label) {
    HeraldRecord rec;
    rec.outcome_label = std::move(label);
    const double p = projected.norm_squared();
    if (p < kZeroBranch) {
        rec.probability = 0.0;
        rec.state = PureState(projected.mode_count);
        return rec;
    }
    rec.probability = p;
    projected.scale(1.0 / std::sqrt(p));
    rec.state = std::move(projected);
    return rec;
}

}  // namespace detail

// Null outcome Π₀ = |0,0⟩⟨0,0| of an ideal threshold detector. The detected
// mode stays in the state (it remains vacuum), keeping mode indices stable.
inline HeraldRecord threshold_null(const PureState& state, ModeId mode) {
    if (mode >= state.mode_count) throw std::invalid_argument("threshold_null: mode out of range");
    PureState proj(state.mode_count);
    for (const auto& [occ, amp] : state.amplitudes)
        if (occ[mode].total() == 0) proj.amplitudes.emplace(occ, amp);
    return detail::make_record(std::move(proj), "null@" + std::to_string(mode));
}

// Complementary outcome Π_{>0} = I - Π₀.
inline HeraldRecord threshold_click(const PureState& state, ModeId mode) {
    if (mode >= state.mode_count) throw std::invalid_argument("threshold_click: mode out of range");
    PureState proj(state.mode_count);
    for (const auto& [occ, amp] : state.amplitudes)
        if (occ[mode].total() > 0) proj.amplitudes.emplace(occ, amp);
    return detail::make_record(std::move(proj), "click@" + std::to_string(mode));
}

// Exact outcome distribution of an ideal polarization-resolved photon
// counter on one mode.
inline std::map<Occupation, double> count_photons(const PureState& state, ModeId mode) {
    if (mode >= state.mode_count) throw std::invalid_argument("count_photons: mode out of range");
    std::map<Occupation, double> dist;
    for (const auto& [occ, amp] : state.amplitudes) dist[occ[mode]] += std::norm(amp);
    return dist;
}

// Projects onto the |m,n⟩ counting outcome in the mode and removes the mode
// from the state (the detected photons are destroyed).
inline HeraldRecord postselect_counts(const PureState& state, ModeId mode, int m, int n) {
    if (mode >= state.mode_count) throw std::invalid_argument("postselect_counts: mode out of range");
    PureState proj(state.mode_count - 1);
    const Occupation want{m, n};
    for (const auto& [occ, amp] : state.amplitudes) {
        if (occ[mode] != want) continue;
        OccupationVector k;
        k.reserve(occ.size() - 1);
        for (std::size_t i = 0; i < occ.size(); ++i)
            if (i != mode) k.push_back(occ[i]);
        proj.add(k, amp);
    }
    return detail::make_record(std::move(proj),
                               "count(" + std::to_string(m) + "," + std::to_string(n) + ")@" +
                                   std::to_string(mode));
}

}  // namespace heraldq
