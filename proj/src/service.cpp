#include "polscale/service.hpp"

#include "polscale/io.hpp"
#include "polscale/projection.hpp"

#include <httplib.h>

namespace polscale {

using io::ordered_json;

HttpReply handle_score_request(const std::string& body, const PartyVectorSet& vectors, double tau) {
    ordered_json input;
    try {
        input = ordered_json::parse(body);
    } catch (const nlohmann::json::exception&) {
        return {400, ordered_json{{"error", "MalformedField"}, {"message", "body is not valid JSON"}}.dump()};
    }
    try {
        if (input.is_object() && !input.contains("record_id")) input["record_id"] = "request";
        const auto record = validate_record(io::raw_record_from_json(input), vectors.parties());
        const auto score = score_record(record, vectors, tau);
        if (!score) return {200, ordered_json{{"filtered", true}}.dump()};
        return {200, ordered_json{{"score", io::round6(score->value)},
                                  {"angle_deg", io::round6(score->angle_deg)},
                                  {"filtered", false}}
                         .dump()};
    } catch (const Error& e) {
        const int status = e.code() == ErrorCode::ZeroVector ? 422 : 400;
        return {status, ordered_json{{"error", std::string(to_string(e.code()))}, {"message", e.message()}}.dump()};
    }
}

bool serve(const std::string& host, int port, const PartyVectorSet& vectors, double tau) {
    httplib::Server server;
    server.Post("/score", [&](const httplib::Request& req, httplib::Response& res) {
        const auto reply = handle_score_request(req.body, vectors, tau);
        res.status = reply.status;
        res.set_content(reply.body, "application/json");
    });
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"status\":\"ok\"}", "application/json");
    });
    return server.listen(host, port);
}

}  // namespace polscale
