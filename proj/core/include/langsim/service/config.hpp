// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "langsim/backend/remote.hpp"
#include "langsim/pipeline/execution.hpp"

namespace langsim::service {

enum class BackendKind { lexicon, remote };

struct ServiceConfig {
    std::string host = "127.0.0.1";
    std::uint16_t port = 8080;
    std::filesystem::path data_dir = "langsim-data";
    BackendKind backend = BackendKind::lexicon;
    backend::RemoteBackendConfig remote = backend::RemoteBackendConfig::with_default_templates();
    std::optional<std::filesystem::path> landscape;  ///< default landscape when unset
    pipeline::ExecutionContext execution;
    std::size_t workers = 2;
    /// Runs on grids up to this side length finish inside the request.
    std::size_t sync_max_side = 64;
    std::size_t token_budget = backend::default_token_budget;

    /// Reads the JSON config layout documented in the README; unknown keys
    /// are rejected.
    static ServiceConfig from_json(const nlohmann::json& j);
    static ServiceConfig load(const std::filesystem::path& path);

    using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
    /// LANGSIM_HOST, LANGSIM_PORT, LANGSIM_DATA_DIR, LANGSIM_BACKEND,
    /// LANGSIM_REMOTE_URL, LANGSIM_REMOTE_MODEL, LANGSIM_TEMPLATES_DIR,
    /// LANGSIM_WORKERS.
    void apply_env(const EnvLookup& env);
    void apply_process_env();

    void validate() const;
};

std::unique_ptr<backend::DecisionBackend> make_backend(const ServiceConfig& cfg);

}  // namespace langsim::service
