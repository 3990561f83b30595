#include "entroflow/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace entroflow {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string iso_utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

const json& require(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing config field: ") + key);
    return j.at(key);
}

struct ParsedConfig {
    TorusGeometry geom;
    Potential pot;
    DynamicsModel model;
    ExactMeasure nu0;
    ExactMeasure mu;
    std::vector<double> times;
    std::vector<std::vector<std::int64_t>> volumes;
    std::uint64_t seed;
    std::string output;
};

Potential parse_potential(const json& j, int d, int q) {
    if (j.contains("preset")) {
        const std::string p = j.at("preset").get<std::string>();
        if (p == "ising") {
            if (q != 2) throw ConfigError("ising preset needs q = 2");
            return Potential::ising(d, j.value("beta", 0.0), j.value("h", 0.0));
        }
        if (p == "zero") return Potential::zero(q);
        throw ConfigError("unknown potential preset: " + p);
    }
    std::vector<PotentialTerm> terms;
    for (const auto& tj : require(j, "terms")) {
        Shape shape(tj.at("offsets").get<std::vector<std::vector<int>>>());
        auto table = tj.at("table").get<std::vector<double>>();
        if (table.size() != static_cast<std::size_t>(pow_q(q, shape.offsets.size())))
            throw ConfigError("potential term table has wrong size");
        terms.push_back({std::move(shape), std::move(table)});
    }
    return Potential(q, std::move(terms));
}

ExactMeasure parse_initial(const json& j, const TorusGeometry& g, const Potential& pot) {
    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "point-mass") {
        if (j.contains("state"))
            return ExactMeasure::point_mass(SpinConfig(g, j.at("state").get<std::vector<int>>()));
        return ExactMeasure::point_mass(SpinConfig::constant(g, j.value("value", 0)));
    }
    if (kind == "product") {
        std::vector<std::vector<double>> p;
        if (j.contains("site_probs")) {
            p = j.at("site_probs").get<std::vector<std::vector<double>>>();
        } else {
            const auto single = require(j, "p").get<std::vector<double>>();
            p.assign(static_cast<std::size_t>(g.num_sites()), single);
        }
        return ExactMeasure::product(g, p);
    }
    if (kind == "gibbs") {
        if (j.contains("potential"))
            return gibbs_measure(parse_potential(j.at("potential"), g.dim(), g.q()), g);
        return gibbs_measure(pot, g);
    }
    if (kind == "custom")
        return ExactMeasure(g, require(j, "probs").get<std::vector<double>>());
    throw ConfigError("unknown initial measure kind: " + kind);
}

// all sites within Chebyshev distance r of the origin
std::vector<std::int64_t> box_region(const TorusGeometry& g, int r) {
    std::vector<std::int64_t> sites;
    for (std::int64_t s = 0; s < g.num_sites(); ++s) {
        bool inside = true;
        for (int k = 0; k < g.dim(); ++k) {
            const int c = g.coords(s)[static_cast<std::size_t>(k)];
            const int L = g.sides()[static_cast<std::size_t>(k)];
            const int dist = std::min(c, L - c);
            if (dist > r) {
                inside = false;
                break;
            }
        }
        if (inside) sites.push_back(s);
    }
    return sites;
}

ParsedConfig parse_config(const json& j, const HarnessOptions& opts) {
    const auto& gj = require(j, "geometry");
    TorusGeometry geom(require(gj, "d").get<int>(), require(gj, "sides").get<std::vector<int>>(),
                       require(gj, "q").get<int>());
    geom.check_enumeration_cap();

    Potential pot = parse_potential(require(j, "potential"), geom.dim(), geom.q());

    const auto& dj = require(j, "dynamics");
    BuiltinParams params;
    params.d = geom.dim();
    params.eps = dj.value("eps", 0.0);
    params.potential = &pot;
    if (dj.contains("intensity"))
        params.intensity = dj.at("intensity").get<std::vector<std::vector<double>>>();
    DynamicsModel model = builtin_model(require(dj, "kind").get<std::string>(), params);

    ExactMeasure nu0 = parse_initial(require(j, "initial"), geom, pot);
    ExactMeasure mu = gibbs_measure(pot, geom);

    auto times = require(j, "times").get<std::vector<double>>();
    if (times.empty()) throw ConfigError("times must be non-empty");
    for (std::size_t k = 0; k < times.size(); ++k)
        if (times[k] < 0.0 || (k > 0 && times[k] < times[k - 1]))
            throw ConfigError("times must be non-negative and non-decreasing");
    if (std::holds_alternative<PcaKernel>(model))
        for (double t : times)
            if (t != std::floor(t)) throw ConfigError("PCA time grid must be integer steps");

    std::vector<std::vector<std::int64_t>> volumes;
    if (j.contains("volumes")) {
        volumes = j.at("volumes").get<std::vector<std::vector<std::int64_t>>>();
        for (const auto& v : volumes) {
            if (v.empty()) throw ConfigError("empty volume in schedule");
            for (auto s : v)
                if (s < 0 || s >= geom.num_sites()) throw ConfigError("volume site out of range");
        }
    } else if (j.contains("volume_boxes")) {
        for (int r : j.at("volume_boxes").get<std::vector<int>>())
            volumes.push_back(box_region(geom, r));
    } else {
        std::vector<std::int64_t> full(static_cast<std::size_t>(geom.num_sites()));
        for (std::size_t k = 0; k < full.size(); ++k) full[k] = static_cast<std::int64_t>(k);
        volumes.push_back(std::move(full));
    }

    std::uint64_t seed = j.value("seed", 0ull);
    if (opts.seed) seed = *opts.seed;
    std::string output = j.value("output", std::string("out"));
    if (!opts.out_dir.empty()) output = opts.out_dir;

    return ParsedConfig{std::move(geom), std::move(pot),   std::move(model),
                        std::move(nu0),  std::move(mu),    std::move(times),
                        std::move(volumes), seed,          std::move(output)};
}

json trace_summary(const EntropyTrace& trace) {
    json out;
    out["rows"] = trace.rows.size();
    if (trace.rows.empty()) return out;
    const auto& last = trace.rows.back();
    out["final"] = {{"t", last.t},
                    {"h_density", last.h_density},
                    {"g_direct", last.g_direct},
                    {"delta", last.delta},
                    {"dlr_residual", last.dlr_residual},
                    {"martingale_diag", last.martingale_diag}};
    double min_delta = std::numeric_limits<double>::infinity();
    double max_dlr = 0.0;
    bool monotone = true;
    double prev_h = std::numeric_limits<double>::infinity();
    std::int64_t largest = 0;
    for (const auto& r : trace.rows) largest = std::max(largest, r.volume);
    for (const auto& r : trace.rows) {
        if (std::isfinite(r.delta)) min_delta = std::min(min_delta, r.delta);
        if (std::isfinite(r.dlr_residual)) max_dlr = std::max(max_dlr, r.dlr_residual);
        if (r.volume == largest) {
            if (r.h_density > prev_h + 1e-12) monotone = false;
            prev_h = r.h_density;
        }
    }
    out["min_delta"] = min_delta;
    out["max_dlr_residual"] = max_dlr;
    out["h_density_monotone"] = monotone;
    return out;
}

struct RunArtifacts {
    EntropyTrace trace;
    std::string trace_csv;
    std::string diagnostics_json;
};

// Everything up to and including the trace computation; nothing is written
// to disk here, so cap/config failures leave no partial outputs.
RunArtifacts compute_run(const ParsedConfig& cfg) {
    RunArtifacts art;
    art.trace = trajectory_report(cfg.model, cfg.nu0, cfg.mu, cfg.pot, cfg.times, cfg.volumes);
    art.trace_csv = format_trace_csv(art.trace);
    json diag = trace_summary(art.trace);
    diag["seed"] = cfg.seed;
    art.diagnostics_json = diag.dump(2) + "\n";
    return art;
}

int persist_run(const RunArtifacts& art, const std::string& config_bytes,
                const std::string& out_dir, const std::string& started) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_file(dir / "trace.csv", art.trace_csv);
    write_file(dir / "diagnostics.json", art.diagnostics_json);
    json manifest;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config_bytes)));
    manifest["config_hash"] = hash;
    manifest["version"] = "1.0.0";
    manifest["started"] = started;
    manifest["finished"] = iso_utc_now();
    json files = json::array();
    for (const char* name : {"trace.csv", "diagnostics.json"}) {
        const std::string bytes = read_file((dir / name).string());
        char sum[32];
        std::snprintf(sum, sizeof(sum), "%016llx",
                      static_cast<unsigned long long>(fnv1a64(bytes)));
        files.push_back({{"name", name}, {"bytes", bytes.size()}, {"checksum", sum}});
    }
    manifest["outputs"] = files;
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    int code = 0;
    for (const auto& row : art.trace.rows)
        if (!row.error.empty()) {
            std::cerr << "numeric failure at t=" << row.t << " volume=" << row.volume << ": "
                      << row.error << "\n";
            code = 4;
        }
    return code;
}

int classify_error(const std::exception& e) {
    if (dynamic_cast<const CapExceeded*>(&e)) return 3;
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const BadValue*>(&e) ||
        dynamic_cast<const UnknownModel*>(&e) || dynamic_cast<const json::exception*>(&e))
        return 2;
    return 4;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_trace_csv(const EntropyTrace& trace) {
    std::string out =
        "t,volume,h_density,g_direct,g_rep,pairing,delta,dlr_residual,martingale_diag,"
        "weak_dist,error\n";
    for (const auto& r : trace.rows) {
        out += fmt17(r.t) + "," + std::to_string(r.volume) + "," + fmt17(r.h_density) + "," +
               fmt17(r.g_direct) + "," + fmt17(r.g_rep) + "," + fmt17(r.pairing) + "," +
               fmt17(r.delta) + "," + fmt17(r.dlr_residual) + "," + fmt17(r.martingale_diag) +
               "," + fmt17(r.weak_dist) + "," + r.error + "\n";
    }
    return out;
}

int cmd_run(const std::string& config_path, const HarnessOptions& opts) {
    const std::string started = iso_utc_now();
    std::string config_bytes;
    RunArtifacts art;
    std::string out_dir;
    try {
        config_bytes = read_file(config_path);
        const json j = json::parse(config_bytes);
        const ParsedConfig cfg = parse_config(j, opts);
        out_dir = cfg.output;
        art = compute_run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify_error(e);
    }
    try {
        return persist_run(art, config_bytes, out_dir, started);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

namespace {

struct SweepRow {
    std::vector<std::string> param_values;
    std::string status = "ok";
    double t_final = std::numeric_limits<double>::quiet_NaN();
    double h_density = std::numeric_limits<double>::quiet_NaN();
    double g_direct = std::numeric_limits<double>::quiet_NaN();
    double delta = std::numeric_limits<double>::quiet_NaN();
    double dlr_residual = std::numeric_limits<double>::quiet_NaN();
};

std::string json_scalar_to_string(const json& v) {
    if (v.is_number_float()) return fmt17(v.get<double>());
    return v.dump();
}

}  // namespace

int cmd_sweep(const std::string& config_path, const HarnessOptions& opts) {
    std::string config_bytes;
    json base;
    std::vector<std::string> param_names;
    std::vector<std::vector<json>> param_values;
    std::string out_dir;
    try {
        config_bytes = read_file(config_path);
        base = json::parse(config_bytes);
        const json grid = require(require(base, "sweep"), "grid");
        if (!grid.is_object()) throw ConfigError("sweep.grid must be an object");
        for (auto it = grid.begin(); it != grid.end(); ++it) {
            if (!it.value().is_array() || it.value().empty())
                throw ConfigError("sweep.grid values must be non-empty arrays");
            param_names.push_back(it.key());
            param_values.emplace_back(it.value().begin(), it.value().end());
        }
        out_dir = base.value("output", std::string("out"));
        if (!opts.out_dir.empty()) out_dir = opts.out_dir;
        base.erase("sweep");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify_error(e);
    }

    std::size_t total = param_names.empty() ? 0 : 1;
    for (const auto& vals : param_values) total *= vals.size();

    std::vector<SweepRow> rows(total);
    std::atomic<std::size_t> next{0};
    const int nthreads = std::max(1, std::min<int>(opts.threads, static_cast<int>(total ? total : 1)));

    auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= total) return;
            json cfg = base;
            SweepRow& row = rows[k];
            // last grid key varies fastest
            std::vector<std::size_t> idx(param_names.size());
            std::size_t rem = k;
            for (std::size_t p = param_names.size(); p-- > 0;) {
                idx[p] = rem % param_values[p].size();
                rem /= param_values[p].size();
            }
            for (std::size_t p = 0; p < param_names.size(); ++p) {
                const json& v = param_values[p][idx[p]];
                std::string ptr = "/" + param_names[p];
                for (auto& c : ptr)
                    if (c == '.') c = '/';
                cfg[json::json_pointer(ptr)] = v;
                row.param_values.push_back(json_scalar_to_string(v));
            }
            char sub[32];
            std::snprintf(sub, sizeof(sub), "run_%04zu", k);
            const std::string run_dir = (fs::path(out_dir) / sub).string();
            try {
                HarnessOptions run_opts = opts;
                run_opts.out_dir = run_dir;
                const ParsedConfig parsed = parse_config(cfg, run_opts);
                const RunArtifacts art = compute_run(parsed);
                const int code = persist_run(art, cfg.dump(), run_dir, iso_utc_now());
                if (code != 0) {
                    row.status = "error:numeric";
                    continue;
                }
                const auto& last = art.trace.rows.back();
                row.t_final = last.t;
                row.h_density = last.h_density;
                row.g_direct = last.g_direct;
                row.delta = last.delta;
                row.dlr_residual = last.dlr_residual;
            } catch (const std::exception& e) {
                row.status = std::string("error:") + e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::string csv = "run";
    for (const auto& name : param_names) csv += "," + name;
    csv += ",status,t_final,h_density,g_direct,delta,dlr_residual\n";
    std::size_t ok = 0;
    for (std::size_t k = 0; k < total; ++k) {
        const auto& row = rows[k];
        csv += std::to_string(k);
        for (const auto& v : row.param_values) csv += "," + v;
        std::string status = row.status;
        for (auto& c : status)
            if (c == ',' || c == '\n') c = ';';
        csv += "," + status + "," + fmt17(row.t_final) + "," + fmt17(row.h_density) + "," +
               fmt17(row.g_direct) + "," + fmt17(row.delta) + "," + fmt17(row.dlr_residual) +
               "\n";
        if (row.status == "ok") ++ok;
    }
    try {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "sweep.csv", csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    if (total == 0) return 0;
    return ok > 0 ? 0 : 4;
}

int cmd_oracle(const std::vector<std::string>& args) {
    auto usage = []() {
        std::cerr << "oracle subcommands:\n"
                  << "  pressure ising1d <beta> [L]\n"
                  << "  flip-marginal <t>\n"
                  << "  entropy pointmass-vs-uniform <n>\n";
        return 2;
    };
    try {
        if (args.empty()) return usage();
        if (args[0] == "pressure") {
            if (args.size() < 3 || args[1] != "ising1d") return usage();
            const double beta = std::stod(args[2]);
            if (args.size() >= 4) {
                const int L = std::stoi(args[3]);
                if (L < 1) return usage();
                const double lp = std::exp(beta) + std::exp(-beta);
                const double lm = std::exp(beta) - std::exp(-beta);
                // (1/L) log(lam_+^L + lam_-^L), evaluated stably
                const double p = std::log(lp) +
                                 std::log1p(std::pow(lm / lp, L)) / static_cast<double>(L);
                std::cout << fmt17(p) << "\n";
            } else {
                std::cout << fmt17(std::log(2.0 * std::cosh(beta))) << "\n";
            }
            return 0;
        }
        if (args[0] == "flip-marginal") {
            if (args.size() != 2) return usage();
            const double t = std::stod(args[1]);
            std::cout << fmt17(0.5 * (1.0 + std::exp(-2.0 * t))) << "\n";
            return 0;
        }
        if (args[0] == "entropy") {
            if (args.size() != 3 || args[1] != "pointmass-vs-uniform") return usage();
            const int n = std::stoi(args[2]);
            if (n < 1) return usage();
            std::cout << fmt17(static_cast<double>(n) * std::log(2.0)) << "\n";
            return 0;
        }
        return usage();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace entroflow
