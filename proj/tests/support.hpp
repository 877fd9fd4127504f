#pragma once

#include "polscale/core.hpp"
#include "polscale/positioning.hpp"

#include <string>
#include <vector>

namespace testing {

inline std::string data(const std::string& name) { return std::string(POLSCALE_TEST_DATA) + "/" + name; }

/// Published angles for Linke, B90, SPD, FDP, CDU, AfD.
inline const std::vector<double> kTableAngles = {-90.0, -65.2, -53.9, 0.0, 37.9, 90.0};

inline polscale::PartyVectorSet table_vectors() {
    return polscale::PartyVectorSet::from_angles(polscale::PartyRegistry::german_default(), kTableAngles,
                                                 polscale::Provenance::WahlomatDerived);
}

/// Probabilities of the worked example in registry order.
inline const std::vector<double> kWorkedProbs = {0.0307, 0.2806, 0.2743, 0.4508, 0.0698, 0.0011};

inline polscale::ClassifiedRecord record(std::string id, double politicalness, std::vector<double> probs,
                                         std::optional<std::string> outlet = std::nullopt) {
    polscale::ClassifiedRecord r;
    r.record_id = std::move(id);
    r.politicalness = politicalness;
    r.party_probs = std::move(probs);
    r.outlet = std::move(outlet);
    return r;
}

}  // namespace testing
