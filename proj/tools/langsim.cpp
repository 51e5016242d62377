// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <atomic>
#include <csignal>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <time.h>
#include <thread>

#include "langsim/io/csv.hpp"
#include "langsim/io/matrix_file.hpp"
#include "langsim/ldft/errors.hpp"
#include "langsim/service/http.hpp"
#include "langsim/service/replay.hpp"

namespace {

using namespace langsim;

constexpr int exit_mismatch = 1;
constexpr int exit_invalid = 2;
constexpr int exit_no_convergence = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

service::ServiceConfig load_config(const std::string& path) {
    try {
        auto cfg = path.empty() ? service::ServiceConfig{} : service::ServiceConfig::load(path);
        cfg.apply_process_env();
        return cfg;
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

router::Landscape landscape_for(const service::ServiceConfig& cfg) {
    try {
        return cfg.landscape ? router::load_landscape(*cfg.landscape) : router::default_landscape();
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

struct RunOptions {
    std::string variant;
    std::string matrix;
    double temperature = 300.0;
    std::optional<double> d_rh;
    std::optional<std::string> boundary;
    std::string out;
    std::string config;
};

void fill(pipeline::ExecutionSession& es, pipeline::SlotValue value) {
    const auto& spec = es.slots()[es.cursor()].spec;
    auto check = pipeline::validate_value(spec, std::move(value));
    if (check.status != pipeline::ValueCheck::Status::valid) {
        throw InputError(fmt::format("invalid {}: {}", spec.name, check.reason));
    }
    es.fill(*check.value, pipeline::SlotSource::user_text);
}

int run(const RunOptions& opt) {
    auto cfg = load_config(opt.config);
    auto landscape = landscape_for(cfg);
    auto ctx = cfg.execution;
    if (opt.d_rh) ctx.sweep.d_rh = *opt.d_rh;
    try {
        if (opt.boundary) ctx.solver.boundary = ldft::boundary_from_string(*opt.boundary);
        ctx.sweep.validate();
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }

    const auto* variant = landscape.registry.find_variant(opt.variant);
    if (!variant) throw InputError(fmt::format("unknown variant '{}' (see `langsim registry list`)", opt.variant));
    pipeline::ExecutionSession es(variant->id, landscape.registry.tool_for(*variant));

    ldft::PorousMatrix matrix = [&] {
        try {
            return io::read_matrix_file(opt.matrix);
        } catch (const std::exception& e) {
            throw InputError(fmt::format("invalid porous_matrix: {}", e.what()));
        }
    }();
    for (const auto& slot : std::vector(es.slots())) {
        if (slot.spec.format == registry::ParamFormat::number) {
            fill(es, opt.temperature);
        } else {
            fill(es, matrix);
        }
    }
    es.mark_ready();

    auto out = pipeline::execute(es, *variant, ctx);
    std::string csv;
    std::size_t points = 0;
    if (const auto* c = std::get_if<ldft::IsothermCurve>(&out.payload)) {
        csv = io::isotherm_csv(*c);
        points = c->points.size();
    } else {
        const auto& loop = std::get<ldft::HysteresisLoop>(out.payload);
        csv = io::hysteresis_csv(loop);
        points = loop.adsorption.points.size();
    }
    std::ostream& summary = opt.out.empty() ? std::cerr : std::cout;
    if (opt.out.empty()) {
        std::cout << csv;
    } else {
        io::write_text_file(opt.out, csv);
    }
    fmt::print(summary, "{}: {} points on a {}x{} matrix at {} K in {:.3f} s\n", variant->id, points, matrix.rows(),
               matrix.cols(), opt.temperature, out.wall_seconds);
    return 0;
}

int replay(const std::string& file, const std::string& config, bool show) {
    auto cfg = load_config(config);
    auto landscape = landscape_for(cfg);
    auto turns = service::load_transcript(file);
    auto backend = service::make_backend(cfg);
    auto report = service::replay(turns, landscape, *backend, cfg.execution);
    if (show) {
        for (std::size_t i = 0; i < turns.size(); ++i) {
            fmt::print("> {}\n", turns[i].text);
            for (const auto& e : report.produced[i]) fmt::print("{}\n", service::event_line(e));
        }
    }
    if (!report.ok) {
        fmt::print(std::cerr, "{}: {}\n", file, report.message);
        return exit_mismatch;
    }
    std::size_t events = 0;
    for (const auto& t : report.produced) events += t.size();
    fmt::print("{}: ok ({} messages, {} events)\n", file, turns.size(), events);
    return 0;
}

void print_node(const router::TypeHierarchy& h, const registry::SimulatorRegistry& reg, const std::string& id,
                int depth) {
    const auto& n = h.node(id);
    fmt::print("{:{}}{} [{}]\n", "", depth * 2, id, router::to_string(n.level));
    if (n.leaf()) {
        const auto& fam = reg.family(n.family);
        if (fam.variants.empty()) fmt::print("{:{}}(no simulators)\n", "", depth * 2 + 2);
        for (const auto& v : fam.variants) {
            std::vector<std::string> params;
            for (const auto& p : reg.tool_for(v).parameters) params.push_back(p.name);
            fmt::print("{:{}}* {}: {} ({})\n", "", depth * 2 + 2, v.id, v.output_label, fmt::join(params, ", "));
        }
    }
    for (const auto& c : n.children) print_node(h, reg, c, depth + 1);
}

int registry_list(const std::string& config) {
    auto cfg = load_config(config);
    auto landscape = landscape_for(cfg);
    print_node(landscape.hierarchy, landscape.registry, landscape.hierarchy.root(), 0);
    return 0;
}

struct ServeOptions {
    std::string config;
    std::optional<std::string> host;
    std::optional<int> port;
    std::optional<std::string> data_dir;
};

int serve(const ServeOptions& opt) {
    auto cfg = load_config(opt.config);
    if (opt.host) cfg.host = *opt.host;
    if (opt.port) cfg.port = static_cast<std::uint16_t>(*opt.port);
    if (opt.data_dir) cfg.data_dir = *opt.data_dir;

    // Signals are taken synchronously by a dedicated thread so the server can
    // be stopped outside of a signal handler.
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    service::SessionService svc(cfg);
    service::HttpServer http(svc);
    int port = http.bind(cfg.host, cfg.port);
    fmt::print("langsim listening on http://{}:{} (data in {})\n", cfg.host, port, cfg.data_dir.string());
    std::fflush(stdout);

    std::atomic<bool> done{false};
    std::thread waiter([&] {
        timespec tick{0, 200'000'000};
        while (!done) {
            if (sigtimedwait(&set, nullptr, &tick) > 0) {
                http.stop();
                return;
            }
        }
    });
    http.serve();
    done = true;
    waiter.join();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"langsim: language-driven 2D LDFT sorption simulation"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run_cmd = app.add_subcommand("run", "Run a simulator directly and write the CSV curve");
    run_cmd->add_option("--variant", run_opt.variant, "Simulator variant id")->required();
    run_cmd->add_option("--matrix", run_opt.matrix, "Porous matrix file")->required();
    run_cmd->add_option("--temperature", run_opt.temperature, "Temperature in kelvin")->capture_default_str();
    run_cmd->add_option("--d-rh", run_opt.d_rh, "RH increment in percent (default 2.5)");
    run_cmd->add_option("--boundary", run_opt.boundary, "periodic or closed");
    run_cmd->add_option("--out,-o", run_opt.out, "Output CSV path (stdout when omitted)");
    run_cmd->add_option("--config", run_opt.config, "JSON config file");

    std::string replay_file, replay_config;
    bool replay_show = false;
    auto* replay_cmd = app.add_subcommand("replay", "Replay a dialogue transcript and compare events");
    replay_cmd->add_option("--file", replay_file, "Transcript file")->required();
    replay_cmd->add_option("--config", replay_config, "JSON config file");
    replay_cmd->add_flag("--show", replay_show, "Print the produced events in transcript form");

    std::string registry_config;
    auto* registry_cmd = app.add_subcommand("registry", "Inspect the simulation landscape");
    registry_cmd->require_subcommand(1);
    auto* list_cmd = registry_cmd->add_subcommand("list", "Print the type hierarchy and simulators");
    list_cmd->add_option("--config", registry_config, "JSON config file");

    ServeOptions serve_opt;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP session service");
    serve_cmd->add_option("--config", serve_opt.config, "JSON config file");
    serve_cmd->add_option("--host", serve_opt.host, "Listen address");
    serve_cmd->add_option("--port", serve_opt.port, "Listen port (0 picks a free one)");
    serve_cmd->add_option("--data-dir", serve_opt.data_dir, "Persistence directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return run(run_opt);
        if (*replay_cmd) return replay(replay_file, replay_config, replay_show);
        if (*list_cmd) return registry_list(registry_config);
        if (*serve_cmd) return serve(serve_opt);
    } catch (const InputError& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return exit_invalid;
    } catch (const ldft::ConvergenceError& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return exit_no_convergence;
    } catch (const ldft::NoPoreError& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return exit_invalid;
    } catch (const service::TranscriptError& e) {
        fmt::print(std::cerr, "error: {}: {}\n", replay_file, e.what());
        return exit_mismatch;
    } catch (const std::exception& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return exit_mismatch;
    }
    return 0;
}
