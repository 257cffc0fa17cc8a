#include "weylscope/cli.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <variant>

#include "weylscope/catalog.hpp"
#include "weylscope/error.hpp"
#include "weylscope/lkmeasures.hpp"
#include "weylscope/verifysuite.hpp"

#ifndef WEYLSCOPE_VERSION
#define WEYLSCOPE_VERSION "0.0.0"
#endif

namespace weylscope::cli {

namespace {

const std::map<std::string, Command, std::less<>> kCommands{
    {"gb", Command::gb},           {"tube", Command::tube},           {"egregium", Command::egregium},
    {"lc-check", Command::lc_check}, {"m11", Command::m11},           {"dist-suite", Command::dist_suite},
    {"j-suite", Command::j_suite}, {"weyl-suite", Command::weyl_suite}};

bool needs_target(Command c) {
    return c != Command::dist_suite && c != Command::j_suite && c != Command::weyl_suite;
}

// Message without the leading error-kind tag.
std::string bare(const Error& e) {
    const std::string what = e.what();
    const std::string tag = std::string(to_string(e.kind())) + ": ";
    return what.rfind(tag, 0) == 0 ? what.substr(tag.size()) : what;
}

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
    throw Error(ErrorKind::validation_error, "key '" + key + "': " + why);
}

template <class Int>
Int parse_integer(const std::string& key, const std::string& v) {
    Int out{};
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || end != v.data() + v.size()) invalid(key, "expected an integer, got '" + v + "'");
    return out;
}

double parse_real(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || end != v.data() + v.size() || !std::isfinite(out))
        invalid(key, "expected a finite number, got '" + v + "'");
    return out;
}

int bounded_int(const std::string& key, const std::string& v, int lo, int hi) {
    const int n = parse_integer<int>(key, v);
    if (n < lo || n > hi) invalid(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return n;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& v) {
    if (key == "command") {
        const auto it = kCommands.find(v);
        if (it == kCommands.end()) invalid(key, "unknown command '" + v + "'");
        cfg.command = it->second;
    } else if (key == "ambient") {
        try {
            cfg.ambient = AmbientSpace::parse(v);
        } catch (const Error& e) {
            invalid(key, bare(e));
        }
    } else if (key == "target") {
        cfg.target = v;
    } else if (key == "grid") {
        cfg.grid = bounded_int(key, v, 16, 1 << 15);
    } else if (key == "tsamples") {
        cfg.t_samples = bounded_int(key, v, 16, 1 << 20);
    } else if (key == "window") {
        cfg.window = parse_real(key, v);
        if (!(cfg.window > 0 && cfg.window < 0.5)) invalid(key, "must lie in (0, 0.5)");
    } else if (key == "scan") {
        cfg.scan = bounded_int(key, v, 4, 4096);
    } else if (key == "tol") {
        cfg.tol = parse_real(key, v);
        if (!(*cfg.tol > 0)) invalid(key, "must be positive");
    } else if (key == "seed") {
        cfg.seed = parse_integer<std::uint64_t>(key, v);
    } else if (key == "samples") {
        cfg.samples = parse_integer<std::uint64_t>(key, v);
        if (*cfg.samples < 1 || *cfg.samples > 4'000'000'000ULL) invalid(key, "must lie in [1, 4e9]");
    } else if (key == "r") {
        cfg.radius = parse_real(key, v);
        if (!(cfg.radius > 0)) invalid(key, "must be positive");
    } else if (key == "out") {
        cfg.out = v;
    } else if (key == "format") {
        if (v == "json")
            cfg.format = Format::json;
        else if (v == "csv")
            cfg.format = Format::csv;
        else
            invalid(key, "expected json or csv");
    } else {
        throw Error(ErrorKind::validation_error, "unknown key '" + key + "'");
    }
}

// Builds the target once so that catalog errors surface as config errors.
void validate_target(const RunConfig& cfg) {
    if (!needs_target(cfg.command)) return;
    if (cfg.target.empty()) invalid("target", std::string(to_string(cfg.command)) + " needs a target");
    const bool metric = cfg.command == Command::lc_check && cfg.target.rfind("metric:", 0) == 0;
    std::optional<CatalogTarget> built;
    try {
        if (metric)
            parse_metric(cfg.target);
        else
            built = parse_target(cfg.target, cfg.ambient);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::unknown_target) throw;
        invalid("target", bare(e));
    }
    if (metric) return;
    const auto* m = std::get_if<ParametricManifold>(&*built);
    switch (cfg.command) {
        case Command::m11:
            if (m) invalid("target", "m11 needs a planar domain such as disc:1 or annulus:1,2");
            break;
        case Command::gb:
            if (!m || m->dim() != 2 || cfg.ambient.dim() != 3 || !m->closed())
                invalid("target", "gb needs a closed surface in a 3-dimensional ambient");
            break;
        case Command::egregium:
            if (!m || m->dim() != 2) invalid("target", "egregium needs a surface");
            break;
        default:
            if (!m) invalid("target", std::string(to_string(cfg.command)) + " needs a curve or surface");
    }
}

nlohmann::json error_json(const Error& e) { return {{"kind", to_string(e.kind())}, {"message", bare(e)}}; }

nlohmann::json envelope(const RunConfig& cfg) {
    return {{"tool", "weylscope"}, {"version", version()}, {"command", to_string(cfg.command)},
            {"config", cfg.to_json()}};
}

std::string format_double(double v) {
    std::ostringstream s;
    s.precision(7);
    s << v;
    return s.str();
}

RunOutcome finish_report(const RunConfig& cfg, const LKReport& r, std::string summary) {
    RunOutcome out;
    out.report = envelope(cfg);
    out.report["report"] = r.to_json();
    out.exit_code = r.pass ? exit_pass : exit_verdict_failure;
    out.report["verdict"] = r.pass ? "pass" : "fail";
    out.summary = std::move(summary) + (r.pass ? " [pass]" : " [fail]");
    return out;
}

RunOutcome run_gb(const RunConfig& cfg) {
    const auto m = parse_manifold(cfg.target, cfg.ambient);
    GaussBonnetConfig gc;
    gc.grid.resolution = cfg.grid;
    gc.grid.t_samples = cfg.t_samples;
    gc.grid.window_fraction = cfg.window;
    gc.scan.resolution = cfg.scan;
    gc.tol = cfg.effective_tol();
    try {
        const auto res = gauss_bonnet_hypersurface(m, gc);
        return finish_report(cfg, res.report(m, gc),
                             "gb " + cfg.target + ": chi = " + format_double(res.chi.real()) +
                                 (res.chi.imag() < 0 ? " - " : " + ") + format_double(std::abs(res.chi.imag())) +
                                 "i");
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::transversality_failure) throw;
        RunOutcome out;
        out.report = envelope(cfg);
        out.report["verdict"] = "precondition_failure";
        out.report["error"] = error_json(e);
        const auto v = lc_transversal_hypersurface_check(m, gc.scan);
        out.report["error"]["failing_margin"] = v.min_margin;
        out.report["error"]["margin_threshold"] = gc.scan.margin_threshold;
        out.exit_code = exit_precondition_failure;
        out.summary = "gb " + cfg.target + ": light-cone contact not transverse (margin " +
                      format_double(v.min_margin) + ")";
        return out;
    }
}

RunOutcome run_tube(const RunConfig& cfg) {
    const TubeSpec spec{cfg.target, cfg.ambient, cfg.radius};
    const auto formula = tube_volume_formula(spec);
    LKReport r;
    r.target = cfg.target;
    r.k = cfg.ambient.dim();
    r.value = formula.volume;
    r.seed = cfg.seed;
    nlohmann::json lambdas = nlohmann::json::array();
    for (const auto& l : formula.lambdas) lambdas.push_back({{"re", l.real()}, {"im", l.imag()}});
    r.details["lambdas"] = lambdas;
    r.details["imag_residue"] = formula.imag_residue;
    r.details["radius"] = cfg.radius;
    try {
        const auto mc = tube_volume_oracle(spec, cfg.effective_samples(), cfg.seed);
        r.error_est = mc.stderr_;
        const double dev = std::abs(formula.volume - mc.estimate);
        r.pass = dev < cfg.effective_tol() * mc.stderr_;
        r.details["oracle"] = {{"estimate", mc.estimate}, {"stderr", mc.stderr_}, {"samples", mc.samples},
                               {"deviation_in_stderr", mc.stderr_ > 0 ? dev / mc.stderr_ : 0.0}};
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::no_membership_test) throw;
        // Nothing to compare against; the closed form stands on its own.
        r.pass = true;
        r.details["oracle"] = nullptr;
    }
    return finish_report(cfg, r, "tube " + cfg.target + ": volume = " + format_double(formula.volume));
}

RunOutcome run_egregium(const RunConfig& cfg) {
    const auto m = parse_manifold(cfg.target, cfg.ambient);
    const auto sweep = egregium_sweep(m, static_cast<int>(cfg.effective_samples()), cfg.seed);
    LKReport r;
    r.target = cfg.target;
    r.value = sweep.max_discrepancy;
    r.error_est = sweep.max_discrepancy;
    r.pass = sweep.max_discrepancy < cfg.effective_tol();
    r.seed = cfg.seed;
    r.details = {{"samples", sweep.samples},
                 {"rejected", sweep.rejected},
                 {"worst", {{"chart", sweep.worst_chart},
                            {"u", {sweep.worst_u[0], sweep.worst_u[1]}},
                            {"intrinsic", sweep.worst.intrinsic},
                            {"extrinsic", sweep.worst.extrinsic}}}};
    return finish_report(cfg, r,
                         "egregium " + cfg.target + ": max |K_int - K_ext| = " + format_double(sweep.max_discrepancy));
}

nlohmann::json points_json(const std::vector<CriticalPoint>& pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : pts) arr.push_back({{"chart", p.chart}, {"u", {p.u[0], p.u[1]}}, {"margin", p.margin}});
    return arr;
}

RunOutcome run_lc_check(const RunConfig& cfg) {
    ScanConfig scan;
    scan.resolution = cfg.scan;
    LKReport r;
    r.target = cfg.target;
    r.grid = cfg.scan;
    LcVerdict v;
    bool agree = true;
    if (cfg.target.rfind("metric:", 0) == 0) {
        v = lc_regular_check(*parse_metric(cfg.target), scan);
    } else {
        const auto m = parse_manifold(cfg.target, cfg.ambient);
        v = lc_regular_check(m, scan);
        if (m.dim() == 2 && cfg.ambient.dim() == 3) {
            const auto t = lc_transversal_hypersurface_check(m, scan);
            agree = t.regular == v.regular;
            r.details["transversal"] = t.regular;
            r.details["transversal_margin"] =
                std::isfinite(t.min_margin) ? nlohmann::json(t.min_margin) : nlohmann::json(nullptr);
            r.details["verdicts_agree"] = agree;
        }
    }
    r.value = static_cast<double>(v.violations.size());
    r.margin = v.min_margin;
    r.pass = v.regular && agree;
    r.details["lc_regular"] = v.regular;
    r.details["degenerate_points"] = v.degenerate_points.size();
    r.details["violations"] = points_json(v.violations);
    return finish_report(cfg, r,
                         "lc-check " + cfg.target + ": " + (v.regular ? "LC-regular" : "not LC-regular") +
                             (agree ? "" : ", transversality verdict disagrees"));
}

RunOutcome run_m11(const RunConfig& cfg) {
    const auto domain = std::get<PlanarDomain>(parse_target(cfg.target, cfg.ambient));
    const auto res = euler_intersection_m11(domain, cfg.grid);
    return finish_report(cfg, res.report(domain, cfg.grid),
                         "m11 " + cfg.target + ": " + std::to_string(res.crossings.size()) +
                             " lightlike normals, chi = " + format_double(res.chi));
}

RunOutcome run_suite(const RunConfig& cfg, const std::vector<IdentityCase>& cases) {
    RunOutcome out;
    out.report = envelope(cfg);
    int failed = 0;
    double worst = 0.0;
    for (const auto& c : cases) {
        failed += !c.pass;
        worst = std::max(worst, c.error);
    }
    out.report["cases"] = cases_to_json(cases);
    out.report["totals"] = {{"cases", cases.size()}, {"failed", failed}, {"max_error", worst}};
    out.report["verdict"] = failed == 0 ? "pass" : "fail";
    out.exit_code = failed == 0 ? exit_pass : exit_verdict_failure;
    out.summary = std::string(to_string(cfg.command)) + ": " + std::to_string(cases.size() - failed) + "/" +
                  std::to_string(cases.size()) + " cases pass" + (failed == 0 ? " [pass]" : " [fail]");
    return out;
}

// RFC 4180 quoting for fields holding commas or quotes.
std::string csv_field(const nlohmann::json& v) {
    std::string s;
    if (v.is_null())
        return s;
    else if (v.is_string())
        s = v.get<std::string>();
    else
        s = v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + '"';
}

}  // namespace

std::string_view to_string(Command c) {
    for (const auto& [name, cmd] : kCommands)
        if (cmd == c) return name;
    return "?";
}

std::string_view version() { return WEYLSCOPE_VERSION; }

double RunConfig::effective_tol() const {
    if (tol) return *tol;
    switch (command) {
        case Command::gb:
            return 5e-3;
        case Command::egregium:
            return 1e-6;
        case Command::tube:
            return 3.0;
        default:
            return 0.0;
    }
}

std::uint64_t RunConfig::effective_samples() const {
    if (samples) return *samples;
    return command == Command::egregium ? 200 : 1'000'000;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j{{"command", to_string(command)},
                     {"ambient", ambient.to_string()},
                     {"target", target},
                     {"grid", grid},
                     {"tsamples", t_samples},
                     {"window", window},
                     {"scan", scan},
                     {"seed", seed},
                     {"r", radius},
                     {"out", out},
                     {"format", format == Format::json ? "json" : "csv"}};
    j["tol"] = tol || effective_tol() > 0 ? nlohmann::json(effective_tol()) : nlohmann::json(nullptr);
    j["samples"] = command == Command::tube || command == Command::egregium || samples
                       ? nlohmann::json(effective_samples())
                       : nlohmann::json(nullptr);
    return j;
}

const std::vector<KeyInfo>& config_keys() {
    static const std::vector<KeyInfo> keys{
        {"command", "", "gb | tube | egregium | lc-check | m11 | dist-suite | j-suite | weyl-suite"},
        {"ambient", "2,1", "signature p,q of the ambient space"},
        {"target", "", "catalog target, e.g. sphere:1, torus:2,0.5,x, disc:1, metric:linear"},
        {"grid", "2048", "contour resolution (gb) or boundary samples (m11)"},
        {"tsamples", "1024", "bins of the pushforward density (gb)"},
        {"window", "0.1", "fraction of the value range modelled near 0 (gb)"},
        {"scan", "64", "grid lines per axis for light-cone scans (gb, lc-check)"},
        {"tol", "per command", "gb 5e-3 on Re chi; egregium 1e-6; tube 3 standard errors"},
        {"seed", "42", "seed for Monte Carlo (tube) and random points (egregium)"},
        {"samples", "per command", "tube 1000000 Monte Carlo samples; egregium 200 points"},
        {"r", "0.1", "tube radius"},
        {"out", "", "report path; standard output when empty"},
        {"format", "json", "json | csv"},
    };
    return keys;
}

RunConfig parse_config(std::string_view text, const Overrides& overrides) {
    std::map<std::string, std::string> values;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        std::size_t i = 0;
        while (i < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
                continue;
            }
            const std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            const std::string_view token = line.substr(start, i - start);
            const auto where = "line " + std::to_string(line_no) + ", column " + std::to_string(start + 1);
            const auto eq = token.find('=');
            if (eq == std::string_view::npos || eq == 0 || eq + 1 == token.size())
                throw Error(ErrorKind::parse_error, where + ": expected key=value, got '" + std::string(token) + "'");
            const std::string key(token.substr(0, eq));
            if (!values.emplace(key, std::string(token.substr(eq + 1))).second)
                throw Error(ErrorKind::parse_error, where + ": key '" + key + "' given twice");
        }
        pos = eol + 1;
    }
    for (const auto& [k, v] : overrides) values[k] = v;

    RunConfig cfg;
    bool have_command = false;
    // Ambient first so the order of keys never matters.
    if (const auto it = values.find("ambient"); it != values.end()) apply(cfg, it->first, it->second);
    for (const auto& [k, v] : values) {
        if (k == "ambient") continue;
        apply(cfg, k, v);
        have_command |= k == "command";
    }
    if (!have_command) invalid("command", "missing");
    validate_target(cfg);
    return cfg;
}

RunOutcome run(const RunConfig& cfg) {
    try {
        switch (cfg.command) {
            case Command::gb:
                return run_gb(cfg);
            case Command::tube:
                return run_tube(cfg);
            case Command::egregium:
                return run_egregium(cfg);
            case Command::lc_check:
                return run_lc_check(cfg);
            case Command::m11:
                return run_m11(cfg);
            case Command::dist_suite:
                return run_suite(cfg, run_table_suite());
            case Command::j_suite:
                return run_suite(cfg, run_j_suite());
            case Command::weyl_suite:
                return run_suite(cfg, run_weyl_suite());
        }
    } catch (const Error& e) {
        RunOutcome out;
        out.report = envelope(cfg);
        out.report["verdict"] = "precondition_failure";
        out.report["error"] = error_json(e);
        out.exit_code = exit_precondition_failure;
        out.summary = std::string(to_string(cfg.command)) + ": " + e.what();
        return out;
    }
    return {};
}

void write_report(std::ostream& out, const RunOutcome& outcome, Format format) {
    const auto& rep = outcome.report;
    if (format == Format::json) {
        out << rep.dump(2) << '\n';
        return;
    }
    out << "# weylscope " << rep["version"].get<std::string>() << '\n';
    out << "# config " << rep["config"].dump() << '\n';
    if (rep.contains("error")) {
        out << "command,verdict,error_kind,message\n";
        out << rep["command"].get<std::string>() << ",precondition_failure," << csv_field(rep["error"]["kind"])
            << ',' << csv_field(rep["error"]["message"]) << '\n';
    } else if (rep.contains("cases")) {
        out << "identity,params,test_function,lhs_re,lhs_im,rhs_re,rhs_im,abs_error,rel_error,tolerance,pass\n";
        for (const auto& c : rep["cases"])
            out << csv_field(c["identity"]) << ',' << csv_field(c["params"]) << ',' << csv_field(c["test_function"])
                << ',' << csv_field(c["lhs"]["re"]) << ',' << csv_field(c["lhs"]["im"]) << ','
                << csv_field(c["rhs"]["re"]) << ',' << csv_field(c["rhs"]["im"]) << ','
                << csv_field(c["abs_error"]) << ',' << csv_field(c["rel_error"]) << ','
                << csv_field(c["tolerance"]) << ',' << csv_field(c["pass"]) << '\n';
    } else {
        const auto& r = rep["report"];
        out << "target,k,value_re,value_im,error_est,margin,verdict,grid,seed\n";
        out << csv_field(r["target"]) << ',' << csv_field(r["k"]) << ',' << csv_field(r["value"]["re"]) << ','
            << csv_field(r["value"]["im"]) << ',' << csv_field(r["error_est"]) << ',' << csv_field(r["margin"])
            << ',' << csv_field(r["verdict"]) << ',' << csv_field(r["grid"]) << ',' << csv_field(r["seed"]) << '\n';
    }
}

}  // namespace weylscope::cli
