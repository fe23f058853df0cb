// Batch experiment runner: rasterized galleries in, CSV/JSON artifacts out.
//
// Every subcommand accepts --config FILE (a flat JSON object whose keys match
// the long option names); explicit flags override config values, and the
// VARDOM_OUT / VARDOM_THREADS environment variables override the output
// directory and thread count. All artifacts embed the grid resolution, seed,
// tolerances and gallery parameters, and identical configurations produce
// byte-identical files.

#include <CLI11.hpp>
#include <json.hpp>

#include "vardom/boundary.hpp"
#include "vardom/compare.hpp"
#include "vardom/io.hpp"
#include "vardom/pde.hpp"
#include "vardom/poincare.hpp"
#include "vardom/util.hpp"
#include "vardom/ze.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBadConfig = 2;

struct Config {
    json values = json::object();

    template <typename T>
    T get(const CLI::App& cmd, const std::string& flag, const T& parsed) const {
        // command line wins; otherwise the config file; otherwise the default
        if (cmd.get_option("--" + flag)->count() > 0) return parsed;
        if (values.contains(flag)) return values.at(flag).get<T>();
        return parsed;
    }
};

Config load_config(const std::string& path, const CLI::App& cmd) {
    Config cfg;
    if (path.empty()) return cfg;
    json parsed;
    try {
        parsed = json::parse(vardom::read_text(path));
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config " + path + ": " + e.what());
    }
    if (!parsed.is_object())
        throw std::invalid_argument("config " + path + ": top level must be a JSON object");
    for (const auto& [key, value] : parsed.items()) {
        (void)value;
        if (key == "command") continue;
        try {
            (void)cmd.get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
            throw std::invalid_argument("config " + path + ": unknown key '" + key +
                                        "' for subcommand " + cmd.get_name());
        }
    }
    cfg.values = parsed;
    return cfg;
}

std::string output_dir(const std::string& flag_value) {
    const char* env = std::getenv("VARDOM_OUT");
    std::string dir = env && *env ? env : flag_value;
    std::filesystem::create_directories(dir);
    return dir;
}

ordered_json run_header(const vardom::GallerySequence& g, std::uint64_t seed) {
    ordered_json j;
    j["gallery"] = g.name;
    j["grid"] = vardom::grid_to_json(g.grid);
    j["length"] = g.length;
    j["seed"] = seed;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : g.params) params[k] = v;
    j["gallery_params"] = params;
    j["limit"] = g.limit_note;
    return j;
}

vardom::GalleryOptions gallery_options(int length) {
    vardom::GalleryOptions opts;
    if (length > 0) opts.length = length;
    return opts;
}

// ---------------------------------------------------------------------------

int cmd_gallery(const CLI::App& cmd, bool list, const std::string& name, int length,
                std::uint64_t seed, const std::string& out_flag, const Config& cfg) {
    if (cfg.get(cmd, "list", list)) {
        std::cout << "name,parameters,description\n";
        for (const auto& info : vardom::list_galleries())
            std::cout << info.name << ",\"" << info.parameters << "\",\"" << info.description
                      << "\"\n";
        return kExitOk;
    }
    const auto g = vardom::make_gallery(cfg.get(cmd, "name", name),
                                        gallery_options(cfg.get(cmd, "length", length)));
    const auto dir = output_dir(cfg.get(cmd, "out", out_flag));
    ordered_json manifest = run_header(g, cfg.get(cmd, "seed", seed));

    ordered_json members = ordered_json::array();
    for (int i = 1; i <= g.length; ++i) {
        const std::string mask_base = dir + "/" + g.name + "_mask_" + std::to_string(i);
        vardom::write_mask(g.mask_at(i), mask_base);
        ordered_json entry;
        entry["mask"] = mask_base;
        if (g.has_fields) {
            const std::string field_base = dir + "/" + g.name + "_field_" + std::to_string(i);
            vardom::write_field(g.field_at(i), field_base, mask_base);
            entry["field"] = field_base;
        }
        members.push_back(entry);
    }
    const std::string limit_base = dir + "/" + g.name + "_mask_limit";
    vardom::write_mask(g.limit_mask, limit_base);
    manifest["members"] = members;
    manifest["limit_mask"] = limit_base;
    if (g.limit_field) {
        const std::string lf = dir + "/" + g.name + "_field_limit";
        vardom::write_field(*g.limit_field, lf, limit_base);
        manifest["limit_field"] = lf;
    }
    vardom::write_text(dir + "/" + g.name + "_manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << g.length << " members of '" << g.name << "' to " << dir << "\n";
    return kExitOk;
}

int cmd_distance(const CLI::App& cmd, const std::string& gallery, int i, int j, int k, double p,
                 const std::string& mode, const std::string& field_a, const std::string& field_b,
                 int length, const std::string& out_flag, const Config& cfg) {
    const auto dom_mode = cfg.get(cmd, "mode", mode) == "complement"
                              ? vardom::HausdorffMode::Complement
                              : vardom::HausdorffMode::Set;
    const int kk = cfg.get(cmd, "k", k);
    const double pp = cfg.get(cmd, "p", p);

    vardom::Field a, b;
    const auto fa = cfg.get(cmd, "field-a", field_a);
    const auto fb = cfg.get(cmd, "field-b", field_b);
    if (!fa.empty() || !fb.empty()) {
        if (fa.empty() || fb.empty())
            throw std::invalid_argument("distance: both --field-a and --field-b are required");
        a = vardom::read_field(fa);
        b = vardom::read_field(fb);
    } else {
        const auto g = vardom::make_gallery(cfg.get(cmd, "gallery", gallery),
                                            gallery_options(cfg.get(cmd, "length", length)));
        a = g.field_at(cfg.get(cmd, "i", i));
        b = g.field_at(cfg.get(cmd, "j", j));
    }

    ordered_json res;
    res["k"] = kk;
    res["p"] = pp;
    res["mode"] = dom_mode == vardom::HausdorffMode::Complement ? "complement" : "set";
    res["ze_distance"] = vardom::ze_distance(a, b, kk, pp);
    res["hausdorff"] = vardom::hausdorff(a.domain(), b.domain(), dom_mode);
    res["pair_distance"] = vardom::pair_distance(a, b, dom_mode, kk, pp);
    std::cout << res.dump(2) << "\n";
    const auto dir = output_dir(cfg.get(cmd, "out", out_flag));
    vardom::write_text(dir + "/distance.json", res.dump(2) + "\n");
    return kExitOk;
}

int cmd_converge(const CLI::App& cmd, const std::string& gallery, int k, double p,
                 double tol_strong, double tol_weak, int max_freq, int bumps, int length,
                 std::uint64_t seed, const std::string& out_flag, const Config& cfg) {
    const auto g = vardom::make_gallery(cfg.get(cmd, "gallery", gallery),
                                        gallery_options(cfg.get(cmd, "length", length)));
    const auto seq =
        vardom::SequencePair::from_gallery(g, cfg.get(cmd, "k", k), cfg.get(cmd, "p", p));
    const std::uint64_t sd = cfg.get(cmd, "seed", seed);
    const auto dict = vardom::TestDictionary::defaults(g.grid, cfg.get(cmd, "max-freq", max_freq),
                                                       cfg.get(cmd, "bumps", bumps), sd);
    vardom::ClassifyOptions opts;
    opts.seed = sd;
    const double ts = cfg.get(cmd, "tol-strong", tol_strong);
    const double tw = cfg.get(cmd, "tol-weak", tol_weak);
    if (ts > 0) opts.tol_strong = ts;
    if (tw > 0) opts.tol_weak = tw;
    const auto rep = vardom::classify(seq, dict, opts);

    ordered_json out = run_header(g, sd);
    out["report"] = vardom::report_to_json(rep);
    const auto dir = output_dir(cfg.get(cmd, "out", out_flag));
    vardom::write_text(dir + "/" + g.name + "_converge.json", out.dump(2) + "\n");
    vardom::write_text(dir + "/" + g.name + "_converge.csv", vardom::report_to_csv(rep));
    std::cout << g.name << ": " << vardom::verdict_name(rep.verdict) << " (strong tail "
              << vardom::format_double(rep.strong_tail) << ", weak tail "
              << vardom::format_double(rep.weak_tail) << ")\n";
    return kExitOk;
}

int cmd_poincare(const CLI::App& cmd, const std::string& gallery, double q, double p, int budget,
                 int length, std::uint64_t seed, const std::string& out_flag, const Config& cfg) {
    const auto g = vardom::make_gallery(cfg.get(cmd, "gallery", gallery),
                                        gallery_options(cfg.get(cmd, "length", length)));
    const double qq = cfg.get(cmd, "q", q);
    const double pp = cfg.get(cmd, "p", p);
    const auto res = vardom::is_poincare_sequence(g.masks(), qq, pp, cfg.get(cmd, "budget", budget),
                                                  cfg.get(cmd, "seed", seed));
    if (qq < pp)
        std::cerr << "warning: q < p makes the embedding constant measure-unbounded\n";

    ordered_json out = run_header(g, cfg.get(cmd, "seed", seed));
    out["q"] = qq;
    out["p"] = pp;
    out["verdict"] = res.verdict();
    std::vector<double> measures;
    double worst = 0.0;
    for (const auto& e : res.constants) {
        measures.push_back(e.domain_measure);
        worst = std::max(worst, e.constant);
    }
    out["max_constant"] = worst;
    out["uniform_sobolev_constant"] = vardom::uniform_sobolev_constant(measures, worst, qq, pp);
    const auto dir = output_dir(cfg.get(cmd, "out", out_flag));
    vardom::write_text(dir + "/" + g.name + "_poincare.json", out.dump(2) + "\n");
    vardom::write_text(dir + "/" + g.name + "_poincare.csv",
                       vardom::poincare_to_csv(res.constants));
    std::cout << g.name << ": " << res.verdict() << "\n";
    return kExitOk;
}

int cmd_trace(const CLI::App& cmd, const std::string& gallery, double p, int samples, double tol,
              int length, std::uint64_t seed, const std::string& out_flag, const Config& cfg) {
    const auto g = vardom::make_gallery(cfg.get(cmd, "gallery", gallery),
                                        gallery_options(cfg.get(cmd, "length", length)));
    if (!g.graph_based)
        throw std::invalid_argument("trace: gallery '" + g.name + "' has no boundary graphs");
    if (!g.has_fields)
        throw std::invalid_argument("trace: gallery '" + g.name + "' has no fields");
    const int ns = cfg.get(cmd, "samples", samples);
    const double pp = cfg.get(cmd, "p", p);

    std::vector<vardom::Field> fields;
    std::vector<vardom::TraceChart> charts;
    for (int i = 1; i <= g.length; ++i) {
        fields.push_back(g.field_at(i));
        charts.push_back(vardom::TraceChart::from_graph(g.graph_at(i), ns));
    }
    const auto limit_chart = vardom::TraceChart::from_graph(g.graph_at(0), ns);
    const auto res = vardom::trace_convergence(fields, charts, *g.limit_field, limit_chart, pp,
                                               cfg.get(cmd, "tol", tol));

    const auto dir = output_dir(cfg.get(cmd, "out", out_flag));
    const auto limit_trace = vardom::trace(*g.limit_field, limit_chart);
    std::string table = "x,trace\n";
    for (std::size_t c = 0; c < limit_trace.size(); ++c)
        table += vardom::format_double(limit_chart.param[c]) + "," +
                 vardom::format_double(limit_trace[c]) + "\n";
    vardom::write_text(dir + "/" + g.name + "_trace.csv", table);

    std::string dist = "i,distance\n";
    for (std::size_t i = 0; i < res.distances.size(); ++i)
        dist += std::to_string(i + 1) + "," + vardom::format_double(res.distances[i]) + "\n";
    vardom::write_text(dir + "/" + g.name + "_trace_distances.csv", dist);

    ordered_json out = run_header(g, cfg.get(cmd, "seed", seed));
    out["p"] = pp;
    out["samples"] = ns;
    out["tol"] = res.tol;
    out["converged"] = res.converged;
    out["partial_chart"] = res.partial;
    out["valid_columns"] = res.valid_columns;
    out["total_columns"] = res.total_columns;
    vardom::write_text(dir + "/" + g.name + "_trace.json", out.dump(2) + "\n");
    std::cout << g.name << ": trace " << (res.converged ? "converges" : "does not converge")
              << (res.partial ? " (partial chart)" : "") << "\n";
    return kExitOk;
}

int cmd_shapeopt(const CLI::App& cmd, const std::string& coeffs, double lambda, double tolerance,
                 std::uint64_t seed, const std::string& out_flag, const Config& cfg) {
    vardom::ShapeFamily family;
    const auto g = vardom::make_gallery("channel");
    family.grid = g.grid;
    family.tolerance = cfg.get(cmd, "tolerance", tolerance);
    {
        std::stringstream ss(cfg.get(cmd, "coeffs", coeffs));
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) family.params.push_back(std::stod(tok));
    }
    family.radius_of = [](double c) {
        return std::function<double(double)>([c](double x) { return 0.5 + c * x * (1.0 - x); });
    };
    family.price = [](double c) { return 0.5 + c / 6.0; };

    const auto res = vardom::shape_search(family, vardom::default_end_profile,
                                          cfg.get(cmd, "lambda", lambda));
    const auto dir = output_dir(cfg.get(cmd, "out", out_flag));
    vardom::write_text(dir + "/shapeopt.csv", vardom::shape_table_to_csv(res));
    ordered_json out;
    out["model"] = "scalar channel-flow proxy";
    out["grid"] = vardom::grid_to_json(family.grid);
    out["seed"] = cfg.get(cmd, "seed", seed);
    out["result"] = vardom::shape_result_to_json(res);
    vardom::write_text(dir + "/shapeopt.json", out.dump(2) + "\n");
    std::cout << "best c = " << vardom::format_double(res.best_c) << " (objective "
              << vardom::format_double(
                     res.table[static_cast<std::size_t>(res.best_index)].objective)
              << ")\n";
    return kExitOk;
}

int cmd_compare(const CLI::App& cmd, const std::string& gallery, const std::string& system,
                double collar, double tol, int k, double p, int length, std::uint64_t seed,
                const std::string& out_flag, const Config& cfg) {
    const auto g = vardom::make_gallery(cfg.get(cmd, "gallery", gallery),
                                        gallery_options(cfg.get(cmd, "length", length)));
    const auto seq =
        vardom::SequencePair::from_gallery(g, cfg.get(cmd, "k", k), cfg.get(cmd, "p", p));

    // fiber charts exist only for graph members without topology changes
    std::optional<vardom::AleChart> chart;
    bool holes = vardom::hole_count(g.limit_mask) > 0;
    for (int i = 1; i <= g.length && !holes; ++i)
        if (vardom::hole_count(g.mask_at(i)) > 0) holes = true;
    if (g.graph_based && !holes) {
        std::vector<vardom::GraphDomainSpec> members;
        for (int i = 1; i <= g.length; ++i) members.push_back(g.graph_at(i));
        chart = vardom::AleChart::from_graphs(g.grid, g.graph_at(0), members, g.graph_at(0));
    }

    vardom::ConnectingSystem sys;
    sys.kind = cfg.get(cmd, "system", system) == "plain_restriction"
                   ? vardom::ConnectingSystem::Kind::PlainRestriction
                   : vardom::ConnectingSystem::Kind::RestrictExtension;
    sys.collar = cfg.get(cmd, "collar", collar);

    std::optional<double> tol_opt;
    const double t = cfg.get(cmd, "tol", tol);
    if (t > 0) tol_opt = t;
    const auto rep = vardom::equivalence_report(seq, chart, sys, tol_opt);

    ordered_json out = run_header(g, cfg.get(cmd, "seed", seed));
    out["system"] = sys.kind == vardom::ConnectingSystem::Kind::PlainRestriction
                        ? "plain_restriction"
                        : "restrict_extension";
    out["report"] = vardom::equivalence_to_json(rep);
    const auto dir = output_dir(cfg.get(cmd, "out", out_flag));
    vardom::write_text(dir + "/" + g.name + "_compare.json", out.dump(2) + "\n");
    vardom::write_text(dir + "/" + g.name + "_compare.csv", vardom::equivalence_to_csv(rep));
    std::cout << g.name << ": ze=" << vardom::notion_verdict_name(rep.ze)
              << " ale=" << vardom::notion_verdict_name(rep.ale)
              << " e=" << vardom::notion_verdict_name(rep.e) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for fields on changing domains"};
    app.require_subcommand(1);

    // shared option storage
    std::string config_path, gallery = "channel", out = ".", mode = "set",
                system = "restrict_extension", coeffs = "0,0.1,0.2,0.3,0.4";
    std::string field_a, field_b, name = "channel";
    bool list = false;
    int k = 1, i = 1, j = 2, length = 0, max_freq = 8, bumps = 10, samples = 96, budget = 100;
    double p = 2.0, q = 2.0, tol_strong = 0.0, tol_weak = 0.0, tol = 0.0, collar = 0.15,
           lambda = 0.0, tolerance = 1e-8, trace_tol = 0.15;
    std::uint64_t seed = vardom::default_seed();

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file (flags override it)");
        cmd->add_option("--out", out, "output directory (VARDOM_OUT overrides)");
        cmd->add_option("--seed", seed, "random seed recorded in every artifact");
        cmd->add_option("--length", length, "gallery length (0 = default)");
    };

    auto* cg = app.add_subcommand("gallery", "write gallery masks/fields and a manifest");
    cg->add_option("--name", name, "gallery name");
    cg->add_flag("--list", list, "print the gallery table and exit");
    add_common(cg);

    auto* cd = app.add_subcommand("distance", "distances between two members or field files");
    cd->add_option("--gallery", gallery);
    cd->add_option("--i", i);
    cd->add_option("--j", j);
    cd->add_option("--k", k);
    cd->add_option("--p", p);
    cd->add_option("--mode", mode)->check(CLI::IsMember({"set", "complement"}));
    cd->add_option("--field-a", field_a, "field file base (with --field-b, replaces the gallery)");
    cd->add_option("--field-b", field_b);
    add_common(cd);

    auto* cc = app.add_subcommand("converge", "classify a gallery sequence");
    cc->add_option("--gallery", gallery);
    cc->add_option("--k", k);
    cc->add_option("--p", p);
    cc->add_option("--tol-strong", tol_strong, "override (0 = default 10 sqrt(h) scale)");
    cc->add_option("--tol-weak", tol_weak);
    cc->add_option("--max-freq", max_freq);
    cc->add_option("--bumps", bumps);
    add_common(cc);

    auto* cp = app.add_subcommand("poincare", "per-domain constants and the sequence verdict");
    cp->add_option("--gallery", gallery);
    cp->add_option("--q", q);
    cp->add_option("--p", p);
    cp->add_option("--budget", budget);
    add_common(cp);

    auto* ct = app.add_subcommand("trace", "boundary trace convergence tables");
    ct->add_option("--gallery", gallery);
    ct->add_option("--p", p);
    ct->add_option("--samples", samples);
    ct->add_option("--tol", trace_tol);
    add_common(ct);

    auto* cs = app.add_subcommand("shapeopt", "direct-method sweep over channel shapes");
    cs->add_option("--coeffs", coeffs, "comma-separated bulge coefficients");
    cs->add_option("--lambda", lambda, "price weight");
    cs->add_option("--tolerance", tolerance, "solver tolerance");
    add_common(cs);

    auto* cx = app.add_subcommand("compare", "three-notion equivalence report");
    cx->add_option("--gallery", gallery);
    cx->add_option("--system", system)
        ->check(CLI::IsMember({"restrict_extension", "plain_restriction"}));
    cx->add_option("--collar", collar);
    cx->add_option("--tol", tol, "verdict tolerance (0 = default)");
    cx->add_option("--k", k);
    cx->add_option("--p", p);
    add_common(cx);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitBadConfig;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        Config cfg;
        try {
            cfg = load_config(config_path, *cmd);
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitBadConfig;
        }
        if (cmd == cg) return cmd_gallery(*cg, list, name, length, seed, out, cfg);
        if (cmd == cd)
            return cmd_distance(*cd, gallery, i, j, k, p, mode, field_a, field_b, length, out, cfg);
        if (cmd == cc)
            return cmd_converge(*cc, gallery, k, p, tol_strong, tol_weak, max_freq, bumps, length,
                                seed, out, cfg);
        if (cmd == cp) return cmd_poincare(*cp, gallery, q, p, budget, length, seed, out, cfg);
        if (cmd == ct) return cmd_trace(*ct, gallery, p, samples, trace_tol, length, seed, out, cfg);
        if (cmd == cs) return cmd_shapeopt(*cs, coeffs, lambda, tolerance, seed, out, cfg);
        if (cmd == cx)
            return cmd_compare(*cx, gallery, system, collar, tol, k, p, length, seed, out, cfg);
        std::cerr << "error: unknown subcommand\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
