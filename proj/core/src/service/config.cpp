// SPDX-License-Identifier: Apache-2.0
#include "langsim/service/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <stdexcept>

namespace langsim::service {

using nlohmann::json;

namespace {

void only_keys(const json& j, std::string_view where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw std::invalid_argument(fmt::format("config: '{}' must be an object", where));
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items()) {
        if (!allowed.contains(k)) throw std::invalid_argument(fmt::format("config: unknown key '{}' in {}", k, where));
    }
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

std::size_t parse_count(const std::string& s, const char* what) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw std::invalid_argument(fmt::format("{} '{}' is not a non-negative integer", what, s));
    }
    return v;
}

BackendKind backend_from_string(const std::string& s) {
    if (s == "lexicon") return BackendKind::lexicon;
    if (s == "remote") return BackendKind::remote;
    throw std::invalid_argument(fmt::format("backend '{}' is not lexicon or remote", s));
}

}  // namespace

ServiceConfig ServiceConfig::from_json(const json& j) {
    only_keys(j, "config",
              {"server", "data_dir", "backend", "landscape", "thermo", "sweep", "solver", "workers", "sync_max_side",
               "token_budget"});
    ServiceConfig c;
    if (j.contains("server")) {
        const auto& s = j.at("server");
        only_keys(s, "server", {"host", "port"});
        read(s, "host", c.host);
        read(s, "port", c.port);
    }
    if (j.contains("data_dir")) c.data_dir = j.at("data_dir").get<std::string>();
    if (j.contains("landscape")) c.landscape = j.at("landscape").get<std::string>();
    if (j.contains("backend")) {
        const auto& b = j.at("backend");
        only_keys(b, "backend", {"kind", "endpoint", "model", "timeout_ms", "api_key_env", "templates_dir"});
        if (b.contains("kind")) c.backend = backend_from_string(b.at("kind").get<std::string>());
        read(b, "endpoint", c.remote.endpoint);
        read(b, "model", c.remote.model);
        read(b, "api_key_env", c.remote.api_key_env);
        if (b.contains("timeout_ms")) c.remote.timeout = std::chrono::milliseconds(b.at("timeout_ms").get<long>());
        if (b.contains("templates_dir")) c.remote.load_templates(b.at("templates_dir").get<std::string>());
    }
    if (j.contains("thermo")) {
        const auto& t = j.at("thermo");
        only_keys(t, "thermo", {"eps", "wall_affinity", "eps_over_kb"});
        read(t, "eps", c.execution.thermo.eps);
        read(t, "wall_affinity", c.execution.thermo.wall_affinity);
        read(t, "eps_over_kb", c.execution.thermo.eps_over_kb);
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        only_keys(s, "sweep", {"rh_start", "rh_end", "d_rh"});
        read(s, "rh_start", c.execution.sweep.rh_start);
        read(s, "rh_end", c.execution.sweep.rh_end);
        read(s, "d_rh", c.execution.sweep.d_rh);
    }
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        only_keys(s, "solver", {"damping", "tolerance", "max_iterations", "boundary"});
        read(s, "damping", c.execution.solver.damping);
        read(s, "tolerance", c.execution.solver.tolerance);
        read(s, "max_iterations", c.execution.solver.max_iterations);
        if (s.contains("boundary")) c.execution.solver.boundary = ldft::boundary_from_string(s.at("boundary").get<std::string>());
    }
    read(j, "workers", c.workers);
    read(j, "sync_max_side", c.sync_max_side);
    read(j, "token_budget", c.token_budget);
    c.remote.max_context_tokens = c.token_budget;
    c.validate();
    return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(fmt::format("cannot open config file {}", path.string()));
    try {
        return from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw std::invalid_argument(fmt::format("{}: {}", path.string(), e.what()));
    }
}

void ServiceConfig::apply_env(const EnvLookup& env) {
    if (auto v = env("LANGSIM_HOST")) host = *v;
    if (auto v = env("LANGSIM_PORT")) {
        auto p = parse_count(*v, "LANGSIM_PORT");
        if (p > 65535) throw std::invalid_argument(fmt::format("LANGSIM_PORT {} is out of range", p));
        port = static_cast<std::uint16_t>(p);
    }
    if (auto v = env("LANGSIM_DATA_DIR")) data_dir = *v;
    if (auto v = env("LANGSIM_BACKEND")) backend = backend_from_string(*v);
    if (auto v = env("LANGSIM_REMOTE_URL")) remote.endpoint = *v;
    if (auto v = env("LANGSIM_REMOTE_MODEL")) remote.model = *v;
    if (auto v = env("LANGSIM_TEMPLATES_DIR")) remote.load_templates(*v);
    if (auto v = env("LANGSIM_WORKERS")) workers = parse_count(*v, "LANGSIM_WORKERS");
    validate();
}

void ServiceConfig::apply_process_env() {
    apply_env([](const std::string& name) -> std::optional<std::string> {
        const char* v = std::getenv(name.c_str());
        if (!v || !*v) return std::nullopt;
        return std::string(v);
    });
}

void ServiceConfig::validate() const {
    execution.thermo.validate();
    execution.sweep.validate();
    execution.solver.validate();
    if (workers < 1) throw std::invalid_argument("config: workers must be at least 1");
    if (sync_max_side < 1) throw std::invalid_argument("config: sync_max_side must be at least 1");
    if (token_budget < 1) throw std::invalid_argument("config: token_budget must be at least 1");
    if (backend == BackendKind::remote) remote.validate();
}

std::unique_ptr<backend::DecisionBackend> make_backend(const ServiceConfig& cfg) {
    if (cfg.backend == BackendKind::remote) return std::make_unique<backend::RemoteBackend>(cfg.remote);
    return std::make_unique<backend::LexiconBackend>();
}

}  // namespace langsim::service
