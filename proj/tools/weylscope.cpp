// Command-line entry point: flags and an optional key=value config file are
// merged into a RunConfig, dispatched, and reported as JSON or CSV.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "weylscope/catalog.hpp"
#include "weylscope/cli.hpp"
#include "weylscope/error.hpp"

namespace wc = weylscope::cli;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw weylscope::Error(weylscope::ErrorKind::validation_error, "key 'config': cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string key_help(const std::string& key) {
    for (const auto& k : wc::config_keys())
        if (k.key == key) return k.help + (k.default_value.empty() ? "" : " [default: " + k.default_value + "]");
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weylscope: curvature measures and homogeneous-distribution checks in R^{p,q}"};
    app.footer(
        "Config files hold whitespace-separated key=value pairs; '#' starts a comment. Keys match the long "
        "flags (radius is 'r', t-samples is 'tsamples'). Flags override file values.\n"
        "Exit codes: 0 all verdicts pass, 1 numerical verdict failure, 2 precondition failure, 3 config error.\n"
        "WEYLSCOPE_THREADS caps the worker threads.");

    std::string command, config_path;
    std::map<std::string, std::string> flags;
    app.add_option("command", command, key_help("command"));
    app.add_option("--config", config_path, "key=value config file");
    const std::pair<const char*, const char*> options[] = {
        {"--ambient", "ambient"}, {"--target", "target"}, {"--grid", "grid"},       {"--tsamples", "tsamples"},
        {"--window", "window"},   {"--scan", "scan"},     {"--tol", "tol"},         {"--seed", "seed"},
        {"--samples", "samples"}, {"-r,--radius", "r"},   {"--out", "out"},         {"--format", "format"},
    };
    for (const auto& [flag, key] : options) app.add_option(flag, flags[key], key_help(key));
    bool list_targets = false;
    app.add_flag("--list-targets", list_targets, "print the catalog grammar and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : wc::exit_config_error;
    }
    if (list_targets) {
        for (const auto& name : weylscope::catalog_names()) std::cout << name << '\n';
        return 0;
    }

    wc::RunConfig cfg;
    try {
        wc::Overrides overrides;
        if (!command.empty()) overrides.emplace_back("command", command);
        for (const auto& [flag, key] : options) {
            const std::string name = std::string(flag).substr(std::string(flag).rfind("--") + 2);
            if (app.count("--" + name) > 0) overrides.emplace_back(key, flags[key]);
        }
        cfg = wc::parse_config(config_path.empty() ? std::string() : read_file(config_path), overrides);
    } catch (const weylscope::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return wc::exit_config_error;
    }

    const auto outcome = wc::run(cfg);
    if (cfg.out.empty()) {
        wc::write_report(std::cout, outcome, cfg.format);
    } else {
        std::ofstream file(cfg.out);
        if (!file) {
            std::cerr << "cannot write " << cfg.out << '\n';
            return wc::exit_config_error;
        }
        wc::write_report(file, outcome, cfg.format);
    }
    std::cerr << outcome.summary << '\n';
    return outcome.exit_code;
}
