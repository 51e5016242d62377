// SPDX-License-Identifier: Apache-2.0
#include "langsim/service/http.hpp"

#include <httplib.h>

#include <fmt/format.h>

#include "langsim/io/csv.hpp"

namespace langsim::service {

using nlohmann::json;

struct HttpServer::Impl {
    SessionService& service;
    httplib::Server server;

    explicit Impl(SessionService& s) : service(s) { routes(); }

    static void send(httplib::Response& res, int status, const json& body) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    template <class F>
    static httplib::Server::Handler guarded(F f) {
        return [f](const httplib::Request& req, httplib::Response& res) {
            try {
                f(req, res);
            } catch (const NotFound& e) {
                send(res, 404, {{"error", e.what()}});
            } catch (const Busy& e) {
                send(res, 409, {{"error", e.what()}});
            } catch (const InvalidMessage& e) {
                send(res, 400, {{"error", e.what()}});
            } catch (const json::exception& e) {
                send(res, 400, {{"error", fmt::format("bad request body: {}", e.what())}});
            } catch (const std::exception& e) {
                send(res, 500, {{"error", e.what()}});
            }
        };
    }

    void routes() {
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Allow-Headers", "Content-Type"},
                                    {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
        server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

        server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
            send(res, 200, {{"status", "ok"}});
        });
        server.Post("/sessions", guarded([this](const httplib::Request&, httplib::Response& res) {
            send(res, 201, {{"session_id", service.create_session()}});
        }));
        auto history = guarded([this](const httplib::Request& req, httplib::Response& res) {
            send(res, 200, history_json(service.snapshot(req.matches[1])));
        });
        server.Get(R"(/sessions/([^/]+))", history);
        server.Get(R"(/sessions/([^/]+)/history)", history);
        server.Post(R"(/sessions/([^/]+)/messages)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto body = json::parse(req.body);
            if (!body.is_object() || !body.contains("text") || !body.at("text").is_string()) {
                send(res, 400, {{"error", "request body must be {\"text\": <string>}"}});
                return;
            }
            auto reply = service.post_message(req.matches[1], body.at("text").get<std::string>());
            json events = json::array();
            for (const auto& e : reply.events) events.push_back(event_json(e));
            send(res, 200, {{"events", std::move(events)}, {"linkage", linkage_json(reply.linkage)}});
        }));
        server.Get(R"(/runs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
            send(res, 200, run_json(service.get_run(req.matches[1])));
        }));
        server.Get(R"(/runs/([^/]+)/csv)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto run = service.get_run(req.matches[1]);
            if (!run.payload) {
                send(res, 409, {{"error", fmt::format("run '{}' is {}", run.run_id, to_string(run.status))}});
                return;
            }
            res.status = 200;
            if (const auto* c = std::get_if<ldft::IsothermCurve>(&*run.payload)) {
                res.set_content(io::isotherm_csv(*c), "text/csv");
            } else {
                res.set_content(io::hysteresis_csv(std::get<ldft::HysteresisLoop>(*run.payload)), "text/csv");
            }
        }));
        server.Get("/registry", guarded([this](const httplib::Request&, httplib::Response& res) {
            send(res, 200, registry_json(service.landscape()));
        }));
    }
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
    int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw std::runtime_error(fmt::format("cannot listen on {}:{}", host, port));
    return bound;
}

void HttpServer::serve() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace langsim::service
