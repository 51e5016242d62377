// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

#include "langsim/service/service.hpp"

namespace langsim::service {

/// JSON routes over a SessionService:
///   POST /sessions                  -> 201 {session_id}
///   GET  /sessions/{id}             -> history (same as /history)
///   GET  /sessions/{id}/history     -> {session_id, linkage, busy, records[]}
///   POST /sessions/{id}/messages    {text} -> {events[], linkage}
///   GET  /runs/{id}                 -> run with rh[], density[], density_des[]
///   GET  /runs/{id}/csv             -> text/csv
///   GET  /registry                  -> hierarchy and variants
///   GET  /health
/// Errors are {error} with 400 (bad request), 404 (unknown id), 409 (busy).
class HttpServer {
  public:
    explicit HttpServer(SessionService& service);
    ~HttpServer();

    /// Binds; port 0 picks a free port. Returns the bound port.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    void serve();
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace langsim::service
