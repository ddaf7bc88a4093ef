// hopfdec command-line front end: mesh generation, Hopf invariant reports,
// homotopy/radial sweeps, Heisenberg geometry batches, convergence tables.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <hopfdec/cochain.hpp>
#include <hopfdec/forms.hpp>
#include <hopfdec/heisenberg.hpp>
#include <hopfdec/hopf.hpp>
#include <hopfdec/maps.hpp>
#include <hopfdec/mesh.hpp>

using nlohmann::json;
using namespace hopfdec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitGate = 2;    // hypothesis gate (closedness / rank)
constexpr int kExitSolver = 3;  // solver failure
constexpr int kExitConfig = 4;  // I/O or configuration

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Config {
    int mesh_level = 3;
    std::string map_name = "hopf";
    std::string alpha = "s2_area_extended";
    double closedness_budget = 0.05;
    double primitive_accept = 0.05;
    double solver_tolerance = 1e-10;
    double p_exponent = 2.0;
    std::uint64_t seed = 2025;
    int threads = 1;
    std::string output_path;
    std::string map_file;  // CSV for tabulated maps
    int codomain_dim = 3;
    bool oracle = false;
    std::string sweep_kind = "rotation";
    int steps = 5;
    int layers = 4;
    int pairs = 100;
    int kmax = 8;

    json to_json() const {
        json j;
        j["mesh_level"] = mesh_level;
        j["map"] = {{"name", map_name}, {"file", map_file},
                {"codomain_dim", codomain_dim}};
        j["alpha"] = alpha;
        j["tolerances"] = {{"closedness_budget", closedness_budget},
                           {"primitive_accept", primitive_accept},
                           {"solver_tolerance", solver_tolerance}};
        j["p_exponent"] = p_exponent;
        j["seed"] = seed;
        j["threads"] = threads;
        j["output_path"] = output_path;
        j["oracle"] = oracle;
        j["sweep_kind"] = sweep_kind;
        j["steps"] = steps;
        j["layers"] = layers;
        j["pairs"] = pairs;
        j["kmax"] = kmax;
        return j;
    }

    void load(const json& j) {
        if (j.contains("mesh_level")) mesh_level = j["mesh_level"].get<int>();
        if (j.contains("map")) {
            if (j["map"].is_string())
                map_name = j["map"].get<std::string>();
            else if (j["map"].contains("name"))
                map_name = j["map"]["name"].get<std::string>();
        }
        if (j.contains("alpha")) alpha = j["alpha"].get<std::string>();
        if (j.contains("tolerances")) {
            const auto& t = j["tolerances"];
            if (t.contains("closedness_budget"))
                closedness_budget = t["closedness_budget"].get<double>();
            if (t.contains("primitive_accept"))
                primitive_accept = t["primitive_accept"].get<double>();
            if (t.contains("solver_tolerance"))
                solver_tolerance = t["solver_tolerance"].get<double>();
        }
        if (j.contains("p_exponent")) p_exponent = j["p_exponent"].get<double>();
        if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
        if (j.contains("threads")) threads = j["threads"].get<int>();
        if (j.contains("output_path")) output_path = j["output_path"].get<std::string>();
        if (j.contains("map")) {
            if (j["map"].is_object() && j["map"].contains("file"))
                map_file = j["map"]["file"].get<std::string>();
            if (j["map"].is_object() && j["map"].contains("codomain_dim"))
                codomain_dim = j["map"]["codomain_dim"].get<int>();
        }
        if (j.contains("oracle")) oracle = j["oracle"].get<bool>();
        if (j.contains("sweep_kind")) sweep_kind = j["sweep_kind"].get<std::string>();
        if (j.contains("steps")) steps = j["steps"].get<int>();
        if (j.contains("layers")) layers = j["layers"].get<int>();
        if (j.contains("pairs")) pairs = j["pairs"].get<int>();
        if (j.contains("kmax")) kmax = j["kmax"].get<int>();
    }

    HopfOptions hopf_options() const {
        HopfOptions o;
        o.closedness_budget = closedness_budget;
        o.primitive_accept = primitive_accept;
        o.solver_tolerance = solver_tolerance;
        o.threads = threads;
        o.with_oracle = oracle;
        o.seed = seed;
        return o;
    }
};

std::string config_hash(const Config& c) {
    json j = c.to_json();
    j.erase("output_path");  // the hash identifies the experiment, not the file
    return fnv1a_hex(j.dump());
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

SimplicialComplex cached_sphere3(int level) {
    const char* cache = std::getenv("HOPFDEC_CACHE");
    if (!cache || !*cache) return build_sphere3_mesh(level);
    std::filesystem::path dir(cache);
    std::filesystem::create_directories(dir);
    std::filesystem::path file = dir / ("s3_level" + std::to_string(level) + ".json");
    if (std::filesystem::exists(file))
        return SimplicialComplex::load_json(file.string());
    SimplicialComplex mesh = build_sphere3_mesh(level);
    mesh.save_json(file.string());
    return mesh;
}

SampledMap resolve_map(const Config& cfg, const SimplicialComplex& domain) {
    MapSpec spec;
    spec.name = cfg.map_name;
    spec.codomain_dim = cfg.codomain_dim;
    spec.tabulated_path = cfg.map_file;
    if (cfg.map_name == "constant") spec.parameters = {0.3, -0.2, 0.8};
    return resolve_map_spec(spec, domain, cfg.seed);
}

int cmd_mesh(const Config& cfg) {
    if (cfg.output_path.empty())
        throw std::invalid_argument("mesh: --out is required");
    SimplicialComplex mesh = build_sphere3_mesh(cfg.mesh_level);
    std::string text = mesh.to_json_string();
    // idempotent by content: skip the write when an identical file exists
    if (std::filesystem::exists(cfg.output_path)) {
        std::ifstream in(cfg.output_path);
        std::stringstream ss;
        ss << in.rdbuf();
        if (ss.str() == text) {
            std::cout << "mesh unchanged (" << fnv1a_hex(text) << ")\n";
            return kExitOk;
        }
    }
    write_file(cfg.output_path, text);
    std::cout << "mesh level " << cfg.mesh_level << ": " << mesh.count(0)
              << " vertices, " << mesh.count(3) << " tetrahedra, hash "
              << fnv1a_hex(text) << "\n";
    return kExitOk;
}

int cmd_hopf(const Config& cfg) {
    SimplicialComplex s3 = cached_sphere3(cfg.mesh_level);
    SampledMap f = resolve_map(cfg, s3);
    FormSpec alpha = FormSpec::builtin(cfg.alpha);
    HopfReport report = hopf(f, alpha, cfg.hopf_options());
    json j = json::parse(report.to_json_string());
    j["config_hash"] = config_hash(cfg);
    j["map"] = cfg.map_name;
    j["mesh_level"] = cfg.mesh_level;
    std::string text = j.dump(2) + "\n";
    if (!cfg.output_path.empty())
        write_file(cfg.output_path, text);
    else
        std::cout << text;
    return kExitOk;
}

int cmd_sweep(const Config& cfg) {
    SimplicialComplex s3 = cached_sphere3(cfg.mesh_level);
    FormSpec alpha = FormSpec::builtin(cfg.alpha);
    HopfOptions opts = cfg.hopf_options();
    std::ostringstream csv;
    csv << "# config_hash=" << config_hash(cfg) << "\n";

    if (cfg.sweep_kind == "rotation") {
        SampledMap f = resolve_map(cfg, s3);
        std::vector<SampledMap> family =
            (cfg.map_name == "constant")
                ? std::vector<SampledMap>(static_cast<std::size_t>(cfg.steps), f)
                : rotation_homotopy(f, cfg.steps);
        std::vector<double> times;
        for (int i = 0; i < cfg.steps; ++i)
            times.push_back(cfg.steps == 1 ? 0.0
                                           : double(i) / double(cfg.steps - 1));
        HomotopySweep sweep = homotopy_sweep(family, times, alpha, opts);
        csv << "t,value,closedness_residual,primitive_residual,deviation\n";
        for (std::size_t i = 0; i < sweep.values.size(); ++i)
            csv << fmt(sweep.times[i]) << "," << fmt(sweep.values[i]) << ","
                << fmt(sweep.closedness_residuals[i]) << ","
                << fmt(sweep.primitive_residuals[i]) << ","
                << fmt(std::abs(sweep.values[i] - sweep.values[0])) << "\n";
    } else if (cfg.sweep_kind == "radial") {
        ConeMesh cone = build_cone_mesh(s3, cfg.layers);
        SampledMap boundary = resolve_map(cfg, cone.base);
        SampledMap extended = radial_extension(boundary, cone);
        csv << "r,value,closedness_residual,primitive_residual\n";
        for (int ring = 1; ring < cfg.layers; ++ring) {
            double r = cone.ring_radius(ring);
            HopfReport rep = hopf_scaled(extended, cone, r, alpha, opts);
            csv << fmt(r) << "," << fmt(rep.value) << ","
                << fmt(rep.closedness_residual) << ","
                << fmt(rep.primitive_residual) << "\n";
        }
    } else {
        throw std::invalid_argument("sweep: kind must be rotation or radial");
    }

    if (!cfg.output_path.empty())
        write_file(cfg.output_path, csv.str());
    else
        std::cout << csv.str();
    return kExitOk;
}

int cmd_geometry(const Config& cfg) {
    json out;
    out["config_hash"] = config_hash(cfg);

    CcOptions cc;
    cc.seed = cfg.seed;

    {  // fixture rows
        HeisPoint o = HeisPoint::origin(1);
        MetricReport self = cc_distance(o, o, cc);
        out["identity_pair"] = {{"upper", self.distance_upper},
                                {"lower", self.lower_bound},
                                {"converged", self.converged}};
        HeisPoint px(1, Eigen::Vector2d(1.0, 0.0), 0.0);
        MetricReport planar = cc_distance(o, px, cc);
        out["planar_pair"] = {{"upper", planar.distance_upper},
                              {"lower", planar.lower_bound},
                              {"converged", planar.converged}};
    }

    {  // random batch in the unit box; the planar gap floor keeps the left
       // constant estimator informative (vertical pairs certify nothing)
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<std::pair<HeisPoint, HeisPoint>> batch;
        while (static_cast<int>(batch.size()) < cfg.pairs) {
            HeisPoint p(1, Eigen::Vector2d(u(rng), u(rng)), u(rng));
            HeisPoint q(1, Eigen::Vector2d(u(rng), u(rng)), u(rng));
            if ((p.z - q.z).norm() < 0.2) continue;
            batch.emplace_back(p, q);
        }
        double worst_gap = 0.0;
        bool all_converged = true;
        for (const auto& [p, q] : batch) {
            MetricReport rep = cc_distance(p, q, cc);
            all_converged = all_converged && rep.converged;
            worst_gap = std::max(worst_gap, rep.distance_upper - rep.lower_bound);
        }
        auto [c_lower, c_upper] = metric_comparison_check(batch, 1.0, cc);
        out["sreq1"] = {{"pairs", cfg.pairs},
                        {"c_lower", c_lower},
                        {"c_upper", c_upper},
                        {"all_converged", all_converged},
                        {"worst_bound_gap", worst_gap}};
    }

    {  // contact report for the figure-eight lift on a circle mesh
        SimplicialComplex circle = build_circle_mesh(256);
        ContactReport cr = contact_check(figure_eight_on_circle(circle));
        out["figure_eight_contact"] = {{"max_residual", cr.max_residual},
                                       {"mean_residual", cr.mean_residual},
                                       {"horizontal_energy", cr.horizontal_energy}};
    }

    {  // rank profile of the Hopf fibration at the configured level
        SimplicialComplex s3 = cached_sphere3(cfg.mesh_level);
        RankProfile rp = rank_profile(hopf_fibration_map(s3));
        out["hopf_rank_profile"] = {
            {"mesh_level", cfg.mesh_level},
            {"fraction_rank_at_most_2", rp.fraction_at_most(2)},
            {"tol_relative", rp.tol_relative},
            {"excluded_degenerate", rp.excluded_degenerate}};
    }

    std::string text = out.dump(2) + "\n";
    if (!cfg.output_path.empty())
        write_file(cfg.output_path, text);
    else
        std::cout << text;
    return kExitOk;
}

int cmd_convergence(const Config& cfg) {
    SimplicialComplex s3 = cached_sphere3(cfg.mesh_level);
    FormSpec alpha = FormSpec::builtin(cfg.alpha);
    HopfOptions opts = cfg.hopf_options();
    SampledMap g = resolve_map(cfg, s3);
    std::vector<SampledMap> gs;
    for (int k = 1; k <= cfg.kmax; ++k)
        gs.push_back(rotate_sphere_values(g, M_PI / k));
    ConvergenceTable table = convergence_experiment(gs, g, alpha, cfg.p_exponent, opts);

    std::ostringstream csv;
    csv << "# config_hash=" << config_hash(cfg) << "\n";
    csv << "k,lp_diff,hi_diff,bound\n";
    for (const auto& row : table.rows)
        csv << row.k << "," << fmt(row.lp_pullback_diff) << "," << fmt(row.hi_diff)
            << "," << fmt(row.bound_product) << "\n";
    if (!cfg.output_path.empty())
        write_file(cfg.output_path, csv.str());
    else
        std::cout << csv.str();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hopfdec: discrete Hopf invariants and Heisenberg geometry"};
    app.require_subcommand(1);

    Config cfg;
    std::string config_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--level", cfg.mesh_level, "sphere refinement level");
        sub->add_option("--map", cfg.map_name,
                        "map name (hopf, constant, full_rank_control, tabulated)");
        sub->add_option("--map-file", cfg.map_file, "CSV for tabulated maps");
        sub->add_option("--codomain", cfg.codomain_dim, "tabulated codomain dim");
        sub->add_option("--alpha", cfg.alpha, "form name");
        sub->add_option("--out", cfg.output_path, "output path");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--threads", cfg.threads, "worker threads");
    };

    CLI::App* mesh = app.add_subcommand("mesh", "write a sphere mesh JSON file");
    add_common(mesh);
    CLI::App* hopfc = app.add_subcommand("hopf", "Hopf invariant report");
    add_common(hopfc);
    hopfc->add_flag("--oracle", cfg.oracle, "attach the Gauss linking oracle");
    CLI::App* sweep = app.add_subcommand("sweep", "homotopy or radial sweep CSV");
    add_common(sweep);
    sweep->add_option("--kind", cfg.sweep_kind, "rotation or radial");
    sweep->add_option("--steps", cfg.steps, "rotation steps");
    sweep->add_option("--layers", cfg.layers, "cone layers for radial sweeps");
    CLI::App* geom = app.add_subcommand("geometry", "Heisenberg geometry report");
    add_common(geom);
    geom->add_option("--pairs", cfg.pairs, "random pair count");
    CLI::App* conv = app.add_subcommand("convergence", "convergence table CSV");
    add_common(conv);
    conv->add_option("--kmax", cfg.kmax, "largest k");
    conv->add_option("--p", cfg.p_exponent, "L^p exponent");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot open config " + config_path);
            json j = json::parse(in);
            Config from_file;
            from_file.load(j);
            std::swap(cfg, from_file);
            // flags override scalar fields from the file
            app.clear();
            app.parse(argc, argv);
        }
        if (cfg.p_exponent < 2.0 - 1.0 / 2.0)
            throw std::invalid_argument("config: p_exponent must be >= 2 - 1/(2n)");

        if (mesh->parsed()) return cmd_mesh(cfg);
        if (hopfc->parsed()) return cmd_hopf(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (geom->parsed()) return cmd_geometry(cfg);
        if (conv->parsed()) return cmd_convergence(cfg);
        return kExitConfig;
    } catch (const ClosednessError& e) {
        std::cerr << "hypothesis gate failure: " << e.what() << "\n";
        return kExitGate;
    } catch (const PrimitiveError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
