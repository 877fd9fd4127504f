#pragma once

// Stateless HTTP scoring endpoint.

#include "polscale/positioning.hpp"

#include <string>

namespace polscale {

struct HttpReply {
    int status = 200;
    std::string body;
};

/// POST /score handler: {politicalness, party_probs} -> {score, angle_deg}
/// or {filtered: true}. 400 with field messages on invalid input, 422 when
/// the resultant vector is zero.
HttpReply handle_score_request(const std::string& body, const PartyVectorSet& vectors, double tau);

/// Serves POST /score and GET /healthz until the process is stopped.
/// Returns false if the socket cannot be bound.
bool serve(const std::string& host, int port, const PartyVectorSet& vectors, double tau);

}  // namespace polscale
