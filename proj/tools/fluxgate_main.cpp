#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fluxgate/errors.h"
#include "fluxgate/parallel.h"
#include "fluxgate/workflows.h"

using namespace fluxgate;

namespace {

unsigned resolve_threads(int flag, unsigned from_config)
{
    if (flag > 0) return static_cast<unsigned>(flag);
    if (from_config > 0) return from_config;
    if (const char* env = std::getenv("FLUXGATE_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
        throw ConfigError("FLUXGATE_THREADS", std::string("expected a positive integer, got '") + env + "'");
    }
    return default_thread_count();
}

std::string timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return std::string("generated ") + buf;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"fluxgate: transmon-fluxonium gate and yield simulator"};
    std::string config_path, output_path;
    std::uint64_t seed = 0;
    int threads = 0;
    bool no_timestamp = false, list = false;
    app.add_option("--config", config_path, "JSON run configuration");
    auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides the config)");
    app.add_option("--threads", threads, "worker threads (default: FLUXGATE_THREADS, then all cores)")
        ->check(CLI::PositiveNumber);
    app.add_option("--output", output_path, "output file (default: config output.path, else stdout)");
    app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp line");
    app.add_flag("--list-workflows", list, "print the available workflows");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (list) {
        std::cout << list_workflows();
        return 0;
    }
    if (config_path.empty()) {
        std::cerr << "error: --config is required\n";
        return 1;
    }

    try {
        RunConfig config = load_config(config_path);
        if (*seed_opt) config.seed = seed;
        if (!output_path.empty()) config.output_path = output_path;
        const unsigned n = resolve_threads(threads, config.threads);
        const Table table = run_workflow(config, n);

        std::ostringstream body;
        const std::string stamp = no_timestamp ? "" : timestamp();
        if (config.format == OutputFormat::csv) {
            write_csv(body, table, stamp);
        } else {
            nlohmann::json j = table_to_json(table);
            j["config"] = config.resolved();
            if (!stamp.empty()) j["generated"] = stamp;
            body << j.dump(2) << "\n";
        }
        if (config.output_path.empty()) {
            std::cout << body.str();
        } else {
            std::ofstream out(config.output_path, std::ios::binary);
            if (!out) throw ConfigError("output.path", "cannot write '" + config.output_path + "'");
            out << body.str();
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const PhysicsError& e) {
        std::cerr << "physics error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
