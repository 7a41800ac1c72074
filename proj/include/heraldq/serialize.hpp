// serialize.hpp
// JSON serialization of sparse states and circuit results, in the canonical
// (mode, m, n) basis order.

#pragma once

#include <json.hpp>

#include "cglmp.hpp"
#include "circuits.hpp"
#include "detection.hpp"
#include "fock.hpp"

namespace heraldq {

using json = nlohmann::json;

// List of {mode_occupations: [[m,n],...], re, im}, sorted canonically.
inline json state_to_json(const PureState& state) {
    json entries = json::array();
    for (const auto& [occ, amp] : state.amplitudes) {
        json occs = json::array();
        for (const auto& o : occ) occs.push_back({o.h, o.v});
        entries.push_back({{"mode_occupations", occs}, {"re", amp.real()}, {"im", amp.imag()}});
    }
    return entries;
}

inline PureState state_from_json(const json& j, std::size_t mode_count) {
    PureState s(mode_count);
    for (const auto& e : j) {
        OccupationVector occ;
        for (const auto& pair : e.at("mode_occupations"))
            occ.push_back({pair.at(0).get<int>(), pair.at(1).get<int>()});
        if (occ.size() != mode_count)
            throw std::invalid_argument("state_from_json: mode count mismatch");
        s.add(occ, {e.at("re").get<double>(), e.at("im").get<double>()});
    }
    return s;
}

inline json herald_to_json(const HeraldRecord& rec) {
    return {{"probability", rec.probability},
            {"outcome", rec.outcome_label},
            {"state", state_to_json(rec.state)}};
}

inline json setting_to_json(const QutritSetting& s) {
    return {{"theta", s.theta}, {"dH", s.dH}, {"dV", s.dV}};
}

inline json quartet_to_json(const SettingsQuartet& q) {
    return {{"A1", setting_to_json(q.A1)},
            {"A2", setting_to_json(q.A2)},
            {"B1", setting_to_json(q.B1)},
            {"B2", setting_to_json(q.B2)}};
}

}  // namespace heraldq
