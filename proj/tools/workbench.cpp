// Workbench driver: declarative JSON job configs, persistent eigensystem
// cache, plot-ready data export. Exit codes: 0 success, 2 config error,
// 3 numerical failure, 4 cache integrity failure.

#include "esq/cache.hpp"
#include "esq/crit.hpp"
#include "esq/io.hpp"
#include "esq/kernels.hpp"
#include "esq/models.hpp"
#include "esq/quench.hpp"
#include "esq/util.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace esq;

namespace {

constexpr const char* kVersion = "1.0.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
    for (auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
}

double get_num(const json& obj, const char* where, const char* key)
{
    if (!obj.contains(key)) throw ConfigError(std::string(where) + ": missing key '" + key + "'");
    if (!obj[key].is_number()) throw ConfigError(std::string(where) + ": '" + key + "' must be a number");
    return obj[key].get<double>();
}

long get_long(const json& obj, const char* where, const char* key)
{
    double v = get_num(obj, where, key);
    long l = static_cast<long>(v);
    if (static_cast<double>(l) != v)
        throw ConfigError(std::string(where) + ": '" + key + "' must be an integer");
    return l;
}

struct JobContext {
    json config;
    fs::path out_dir;
    std::string cache_dir;
    bool override_grid_check = false;
    std::unique_ptr<EigCache> cache;
    json manifest_results = json::object();
    std::vector<std::pair<std::string, std::uint64_t>> files;

    fs::path out(const std::string& name)
    {
        fs::create_directories(out_dir);
        return out_dir / name;
    }
    void record(const fs::path& path)
    {
        files.emplace_back(path.filename().string(), fnv1a64_file(path.string()));
    }
    void record(const fs::path& path, std::uint64_t checksum)
    {
        files.emplace_back(path.filename().string(), checksum);
    }
};

// ---- config -> library types -------------------------------------------

QuenchSpec parse_quench(const json& q)
{
    check_keys(q, "quench", {"model", "N", "kappa", "eta", "j", "xi0", "xi1"});
    std::string model = q.value("model", "");
    try {
        if (model == "lipkin")
            return LipkinQuench(get_long(q, "quench", "N"), get_num(q, "quench", "kappa"),
                                get_num(q, "quench", "eta"));
        if (model == "coupled-top")
            return CoupledTopQuench(get_long(q, "quench", "j"), get_num(q, "quench", "xi0"),
                                    get_num(q, "quench", "xi1"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("quench: ") + e.what());
    }
    throw ConfigError("quench: model must be 'lipkin' or 'coupled-top'");
}

GridPtr parse_grid(const json& config, double j)
{
    if (!config.contains("grid")) return mandated_grid(j);
    const json& g = config["grid"];
    check_keys(g, "grid", {"n_radial", "n_angular"});
    int nr = static_cast<int>(get_long(g, "grid", "n_radial"));
    int na = static_cast<int>(get_long(g, "grid", "n_angular"));
    try {
        return std::make_shared<const PhaseSpaceGrid>(build_polar_grid(nr, na));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
}

std::vector<double> parse_scan_values(const json& s, const char* where)
{
    check_keys(s, where, {"start", "stop", "step", "values"});
    if (s.contains("values")) {
        std::vector<double> vals = s["values"].get<std::vector<double>>();
        return vals;
    }
    double start = get_num(s, where, "start");
    double stop = get_num(s, where, "stop");
    double step = get_num(s, where, "step");
    if (step <= 0.0 || stop <= start) throw ConfigError(std::string(where) + ": bad range");
    std::vector<double> vals;
    for (long i = 0;; ++i) {
        double v = start + step * static_cast<double>(i);
        if (v > stop + 1e-12) break;
        vals.push_back(v);
    }
    return vals;
}

// ---- helpers --------------------------------------------------------------

std::vector<double> model_levels(const json& m)
{
    check_keys(m, "model", {"type", "N", "kappa", "j", "xi"});
    std::string type = m.value("type", "");
    std::vector<double> levels;
    try {
        if (type == "lipkin") {
            LipkinSpec spec(get_long(m, "model", "N"), get_num(m, "model", "kappa"));
            auto es = eigensolve(lipkin_hamiltonian(spec, LipkinSector::full).mat);
            levels.assign(es.values.data(), es.values.data() + es.values.size());
            return levels;
        }
        if (type == "coupled-top") {
            CoupledTopSpec spec(get_long(m, "model", "j"), get_num(m, "model", "xi"));
            for (int perm : {1, -1})
                for (int par : {1, -1}) {
                    Matrix h = coupled_top_sector_matrix(spec, par, perm);
                    if (h.rows() == 0) continue;
                    auto es = eigensolve(h);
                    levels.insert(levels.end(), es.values.data(), es.values.data() + es.values.size());
                }
            return levels;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    throw ConfigError("model: type must be 'lipkin' or 'coupled-top'");
}

double model_axis_scale(const json& m)
{
    // Lipkin energies are read off per pair of excitations (E / 2j);
    // coupled-top energies per spin length (E / j).
    if (m.value("type", "") == "lipkin")
        return 1.0 / static_cast<double>(get_long(m, "model", "N"));
    return 1.0 / static_cast<double>(get_long(m, "model", "j"));
}

json measures_json(const LocalizationMeasures& lm)
{
    return {{"M2", lm.m2},       {"W", lm.w},         {"M2_q", lm.m2_q},
            {"M2_p", lm.m2_p},   {"W_q", lm.w_q},     {"W_p", lm.w_p},
            {"delta_M2", lm.delta_m2}, {"delta_W", lm.delta_w}};
}

// ---- commands --------------------------------------------------------------

void cmd_spectrum(JobContext& ctx)
{
    auto levels = model_levels(ctx.config.at("model"));
    std::sort(levels.begin(), levels.end());
    auto path = ctx.out("levels.txt");
    io::write_levels(path.string(), levels);
    ctx.record(path);
    ctx.manifest_results["level_count"] = levels.size();
}

void cmd_dos(JobContext& ctx)
{
    const json& m = ctx.config.at("model");
    auto levels = model_levels(m);
    int bins = static_cast<int>(ctx.config.value("bins", 0));
    double width = ctx.config.value("smoothing_width", 0.0);
    double rescale = m.value("type", "") == "lipkin"
                         ? 0.5 * static_cast<double>(get_long(m, "model", "N"))
                         : static_cast<double>(get_long(m, "model", "j"));
    auto hist = density_of_states(levels, model_axis_scale(m), rescale, bins, width);
    auto deriv = dos_derivative(hist);
    auto path = ctx.out("dos.txt");
    io::write_dos(path.string(), hist, &deriv);
    ctx.record(path);
    ctx.manifest_results["level_count"] = hist.level_count;
    ctx.manifest_results["smoothing_width"] = hist.smoothing_width;
}

void cmd_husimi_snapshot(JobContext& ctx)
{
    auto spec = parse_quench(ctx.config.at("quench"));
    double t = get_num(ctx.config, "config", "time");
    auto ws = prepare_quench(spec, ctx.cache.get());
    auto grid = parse_grid(ctx.config, ws.j_phase);
    auto field = evolved_husimi(ws, t, grid, ctx.override_grid_check);
    auto path = ctx.out("husimi_t.bin");
    ctx.record(path, io::write_field(path.string(), field));
    ctx.manifest_results["time"] = t;
    ctx.manifest_results["norm_residual"] = field.norm_residual;
    ctx.manifest_results["M2"] = second_moment(field);
    ctx.manifest_results["W"] = wehrl_entropy(field);
}

void cmd_husimi_average(JobContext& ctx)
{
    auto ws = prepare_quench(parse_quench(ctx.config.at("quench")), ctx.cache.get());
    auto grid = parse_grid(ctx.config, ws.j_phase);
    auto field = averaged_husimi(ws, grid, ctx.override_grid_check);
    auto path = ctx.out("husimi_avg.bin");
    ctx.record(path, io::write_field(path.string(), field));
    ctx.manifest_results["norm_residual"] = field.norm_residual;
    ctx.manifest_results["post_quench_energy"] = post_quench_energy(ws);
    ctx.manifest_results["measures"] = measures_json(localization_measures(field));
}

void cmd_marginals(JobContext& ctx)
{
    auto ws = prepare_quench(parse_quench(ctx.config.at("quench")), ctx.cache.get());
    auto grid = parse_grid(ctx.config, ws.j_phase);
    auto field = averaged_husimi(ws, grid, ctx.override_grid_check);
    auto [mq, mp] = marginals(field);
    auto pq = ctx.out("marginal_q.txt");
    auto pp = ctx.out("marginal_p.txt");
    io::write_marginal(pq.string(), mq);
    io::write_marginal(pp.string(), mp);
    ctx.record(pq);
    ctx.record(pp);
    ctx.manifest_results["measures"] = measures_json(localization_measures(field));
}

ScanOptions scan_options(const JobContext& ctx)
{
    ScanOptions opt;
    opt.with_marginals = ctx.config.value("marginals", false);
    opt.override_grid_check = ctx.override_grid_check;
    if (ctx.config.contains("grid")) {
        const json& g = ctx.config["grid"];
        check_keys(g, "grid", {"n_radial", "n_angular"});
        opt.grid_radial = static_cast<int>(g.value("n_radial", 0));
        opt.grid_angular = static_cast<int>(g.value("n_angular", 0));
    }
    return opt;
}

void write_scan_curves(JobContext& ctx, const MeasureScan& scan, const std::string& parameter,
                       bool with_marginals)
{
    std::vector<std::string> names = {"M2", "W"};
    if (with_marginals)
        names.insert(names.end(), {"M2_q", "M2_p", "W_q", "W_p"});
    for (const auto& name : names) {
        auto path = ctx.out("scan_" + name + ".txt");
        io::write_curve(path.string(), scan.curve(parameter, name));
        ctx.record(path);
    }
}

void cmd_measure_scan(JobContext& ctx)
{
    const json& q = ctx.config.at("quench");
    check_keys(q, "quench", {"model", "N", "kappa", "j", "xi0"});
    auto values = parse_scan_values(ctx.config.at("scan"), "scan");
    ScanOptions opt = scan_options(ctx);
    std::string model = q.value("model", "");
    MeasureScan scan;
    std::string parameter;
    try {
        if (model == "lipkin") {
            parameter = "eta";
            scan = lipkin_measure_scan(get_long(q, "quench", "N"), get_num(q, "quench", "kappa"),
                                       values, opt, ctx.cache.get());
        } else if (model == "coupled-top") {
            parameter = "xi1";
            scan = ct_measure_scan(get_long(q, "quench", "j"), get_num(q, "quench", "xi0"),
                                   values, opt, ctx.cache.get());
        } else {
            throw ConfigError("quench: model must be 'lipkin' or 'coupled-top'");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("measure-scan: ") + e.what());
    }
    write_scan_curves(ctx, scan, parameter, opt.with_marginals);
}

void cmd_scaling(JobContext& ctx)
{
    const json& q = ctx.config.at("quench");
    auto sizes_l = ctx.config.at("sizes").get<std::vector<long>>();
    std::vector<double> sizes(sizes_l.begin(), sizes_l.end());
    ScanOptions opt = scan_options(ctx);
    std::string model = q.value("model", "");

    std::vector<double> m2s, ws;
    for (long size : sizes_l) {
        QuenchSpec spec = model == "lipkin"
                              ? QuenchSpec(LipkinQuench(size, get_num(q, "quench", "kappa"),
                                                        get_num(q, "quench", "eta")))
                              : QuenchSpec(CoupledTopQuench(size, get_num(q, "quench", "xi0"),
                                                            get_num(q, "quench", "xi1")));
        auto wsq = prepare_quench(spec, ctx.cache.get());
        GridPtr grid = mandated_grid(wsq.j_phase);
        auto field = averaged_husimi(wsq, grid, ctx.override_grid_check);
        m2s.push_back(second_moment(field));
        ws.push_back(wehrl_entropy(field));
    }
    auto fit_m2 = scaling_fit(sizes, m2s, ScalingFit::Model::power);
    auto fit_w = scaling_fit(sizes, ws, ScalingFit::Model::log);

    io::Table t;
    t.comments = {"finite-size scaling at fixed quench parameters"};
    t.columns = {"size", "M2", "W"};
    t.provenance = {"computed", "computed", "computed"};
    for (std::size_t i = 0; i < sizes.size(); ++i)
        t.rows.push_back({sizes[i], m2s[i], ws[i]});
    auto path = ctx.out("scaling_points.txt");
    io::write_table(path.string(), t);
    ctx.record(path);

    ctx.manifest_results["fit_M2"] = {{"model", "power"},
                                      {"exponent", fit_m2.exponent},
                                      {"prefactor", fit_m2.prefactor},
                                      {"r_squared", fit_m2.r_squared},
                                      {"provenance", "fit"}};
    ctx.manifest_results["fit_W"] = {{"model", "log"},
                                     {"exponent", fit_w.exponent},
                                     {"prefactor", fit_w.prefactor},
                                     {"r_squared", fit_w.r_squared},
                                     {"provenance", "fit"}};
}

void cmd_critical_scan(JobContext& ctx)
{
    auto kappas = ctx.config.at("kappas").get<std::vector<double>>();
    long n = get_long(ctx.config, "config", "N");
    double half_width = ctx.config.value("half_width", 0.4);
    double step = ctx.config.value("step", 0.05);
    ScanOptions opt = scan_options(ctx);

    io::Table t;
    t.comments = {"quench-strength critical point vs field strength, N = " + std::to_string(n)};
    t.columns = {"kappa", "eta_c_M2", "eta_c_W", "eta_c_analytic"};
    t.provenance = {"computed", "computed", "computed", "analytic-formula"};
    for (double kappa : kappas) {
        double eta_c = lipkin_critical_eta(kappa);
        std::vector<double> etas;
        for (double e = std::max(step, eta_c - half_width); e <= eta_c + half_width + 1e-12; e += step)
            etas.push_back(e);
        auto scan = lipkin_measure_scan(n, kappa, etas, opt, ctx.cache.get());
        auto est_m = estimate_critical_extremum(scan.curve("eta", "M2"), false);
        auto est_w = estimate_critical_extremum(scan.curve("eta", "W"), true);
        t.rows.push_back({kappa, est_m.location, est_w.location, eta_c});
    }
    auto path = ctx.out("critical_scan.txt");
    io::write_table(path.string(), t);
    ctx.record(path);
}

void cmd_energy_surface(JobContext& ctx)
{
    double xi = get_num(ctx.config, "config", "xi");
    long n_q = ctx.config.value("n_q", 81L);
    if (xi < 0.0 || n_q < 3) throw ConfigError("energy-surface: need xi >= 0 and n_q >= 3");

    // p = 0 slice over the (q1, q2) square
    io::Table t;
    t.comments = {"energy surface slice p1 = p2 = 0, xi = " + std::to_string(xi)};
    t.columns = {"q1", "q2", "energy"};
    t.provenance = {"computed", "computed", "analytic-formula"};
    for (long i = 0; i < n_q; ++i)
        for (long k = 0; k < n_q; ++k) {
            double q1 = -2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(n_q - 1);
            double q2 = -2.0 + 4.0 * static_cast<double>(k) / static_cast<double>(n_q - 1);
            t.rows.push_back({q1, q2, ct_energy_surface({0.0, q1, 0.0, q2}, xi)});
        }
    auto path = ctx.out("energy_surface.txt");
    io::write_table(path.string(), t);
    ctx.record(path);

    io::Table fp;
    fp.columns = {"q1", "q2", "energy", "energy_numeric"};
    fp.provenance = {"analytic-formula", "analytic-formula", "analytic-formula", "computed"};
    auto analytic = ct_fixed_points(xi);
    auto numeric = ct_fixed_points_numeric(xi);
    for (const auto& a : analytic) {
        double closest = numeric.empty() ? 0.0 : numeric.front().energy;
        for (const auto& nfp : numeric)
            if (std::abs(nfp.x.q1 - a.x.q1) < std::abs(closest - a.energy)) closest = nfp.energy;
        fp.rows.push_back({a.x.q1, a.x.q2, a.energy, closest});
    }
    auto fpath = ctx.out("fixed_points.txt");
    io::write_table(fpath.string(), fp);
    ctx.record(fpath);
}

void cmd_cache_gc(JobContext& ctx)
{
    if (ctx.cache_dir.empty()) throw ConfigError("cache-gc: no cache directory configured");
    auto max_bytes = static_cast<std::uint64_t>(get_num(ctx.config, "config", "max_bytes"));
    std::uint64_t freed = cache_gc(ctx.cache_dir, max_bytes);
    ctx.manifest_results["freed_bytes"] = freed;
    std::cout << "freed " << freed << " bytes\n";
}

void run_command(JobContext& ctx, const std::string& command)
{
    if (command == "spectrum") cmd_spectrum(ctx);
    else if (command == "dos") cmd_dos(ctx);
    else if (command == "husimi-snapshot") cmd_husimi_snapshot(ctx);
    else if (command == "husimi-average") cmd_husimi_average(ctx);
    else if (command == "marginals") cmd_marginals(ctx);
    else if (command == "measure-scan") cmd_measure_scan(ctx);
    else if (command == "scaling") cmd_scaling(ctx);
    else if (command == "critical-scan") cmd_critical_scan(ctx);
    else if (command == "energy-surface") cmd_energy_surface(ctx);
    else if (command == "cache-gc") cmd_cache_gc(ctx);
    else throw ConfigError("unknown command '" + command + "'");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"phase-space workbench for collective spin quenches"};
    std::string config_path, cache_dir, out_dir;
    unsigned n_threads = 1;
    bool override_grid = false;
    app.add_option("--config", config_path, "job config (JSON)")->required();
    app.add_option("--threads", n_threads, "worker threads");
    app.add_option("--cache", cache_dir, "eigensystem cache directory")
        ->envname("ESQ_CACHE_DIR");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_flag("--override-grid-check", override_grid,
                 "allow grids below the minimum resolution for j");
    CLI11_PARSE(app, argc, argv);

    auto t0 = std::chrono::steady_clock::now();
    JobContext ctx;
    std::string command;
    try {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot read config: " + config_path);
        ctx.config = json::parse(in);
        check_keys(ctx.config, "config",
                   {"command", "model", "quench", "grid", "scan", "sizes", "kappas", "N",
                    "half_width", "step", "time", "xi", "n_q", "bins", "smoothing_width",
                    "marginals", "max_bytes", "out", "cache", "seed"});
        command = ctx.config.value("command", "");
        if (command.empty()) throw ConfigError("config: missing 'command'");

        ctx.out_dir = out_dir.empty() ? ctx.config.value("out", "results") : out_dir;
        ctx.cache_dir = cache_dir.empty() ? ctx.config.value("cache", "") : cache_dir;
        ctx.override_grid_check = override_grid;
        if (!ctx.cache_dir.empty() && command != "cache-gc")
            ctx.cache = std::make_unique<EigCache>(ctx.cache_dir);
        set_threads(n_threads);

        run_command(ctx, command);
    } catch (const CacheCorruption& e) {
        std::cerr << "cache integrity failure: " << e.what() << '\n';
        return 4;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }

    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    json manifest = {{"version", kVersion},
                     {"command", command},
                     {"config", ctx.config},
                     {"threads", threads()},
                     {"isa", kernels::isa_name(kernels::active())},
                     {"elapsed_ms", ms},
                     {"results", ctx.manifest_results}};
    if (ctx.cache) {
        manifest["cache"] = {{"dir", ctx.cache->dir()},
                             {"hits", ctx.cache->hits()},
                             {"misses", ctx.cache->misses()}};
    }
    json files = json::array();
    for (const auto& [name, sum] : ctx.files) {
        char hex[32];
        std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(sum));
        files.push_back({{"name", name}, {"fnv1a64", hex}});
    }
    manifest["files"] = files;
    if (!ctx.files.empty() || command != "cache-gc") {
        std::ofstream mf(ctx.out("manifest.json"));
        mf << manifest.dump(2) << '\n';
    }
    std::cout << manifest["results"].dump(2) << '\n';
    return 0;
}
