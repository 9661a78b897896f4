// breakscan: ingestion, CSS classification, breakthrough detection,
// portfolio reporting and synthetic corpora from the command line.

#include "breakscan/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

using namespace breakscan;

namespace {

struct PathFlags {
    std::string pubs, edges, hierarchy, config, out, method = "all";
    CLI::Option* pubs_opt = nullptr;
    CLI::Option* edges_opt = nullptr;
    CLI::Option* hier_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* method_opt = nullptr;
};

struct RunFlags {
    double keep_threshold = 0;
    int css_depth = 0;
    std::string semantics;
    bool m1_compose = false;
    bool m2b_strict = true;
    int year_min = 0, year_max = 0;
    std::string log_level;
    std::vector<CLI::Option*> opts;
    CLI::Option *keep = nullptr, *depth = nullptr, *sem = nullptr, *compose = nullptr,
                *strict = nullptr, *ymin = nullptr, *ymax = nullptr, *level = nullptr;
};

void add_path_flags(CLI::App* sub, PathFlags& p, bool with_method) {
    p.pubs_opt = sub->add_option("--pubs", p.pubs, "publications TSV");
    p.edges_opt = sub->add_option("--edges", p.edges, "citation edges TSV");
    p.hier_opt = sub->add_option("--hierarchy", p.hierarchy, "cluster hierarchy TSV");
    sub->add_option("--config", p.config, "key = value configuration file");
    p.out_opt = sub->add_option("--out", p.out, "output directory");
    if (with_method) {
        p.method_opt = sub->add_option("--method", p.method, "m1|m2a|m2b|all")
                           ->check(CLI::IsMember({"m1", "m2a", "m2b", "all"}));
    }
}

void add_run_flags(CLI::App* sub, RunFlags& r) {
    r.keep = sub->add_option("--keep-threshold", r.keep_threshold, "minimum alone-share to keep");
    r.depth = sub->add_option("--css-depth", r.css_depth, "number of CSS means");
    r.sem = sub->add_option("--follower-semantics", r.semantics, "union|per_pair")
                ->check(CLI::IsMember({"union", "per_pair"}));
    r.compose = sub->add_option("--m1-compose-follower-filter", r.m1_compose,
                                "drop followers from the M1 set (true|false)");
    r.strict = sub->add_option("--m2b-strict", r.m2b_strict,
                               "require strictly more macro-fields than the mean (true|false)");
    r.ymin = sub->add_option("--year-min", r.year_min, "earliest accepted publication year");
    r.ymax = sub->add_option("--year-max", r.year_max, "latest accepted publication year");
    r.level = sub->add_option("--log-level", r.log_level, "error|warn|info|debug")
                  ->check(CLI::IsMember({"error", "warn", "info", "debug"}));
}

void apply_run_flags(RunConfig& cfg, const RunFlags& r) {
    KeyValues kv;
    if (r.keep->count()) kv["keep_threshold"] = r.keep->as<std::string>();
    if (r.depth->count()) kv["css_depth"] = r.depth->as<std::string>();
    if (r.sem->count()) kv["follower_semantics"] = r.semantics;
    if (r.compose->count()) kv["m1_compose_follower_filter"] = r.m1_compose ? "true" : "false";
    if (r.strict->count()) kv["m2b_strict"] = r.m2b_strict ? "true" : "false";
    if (r.ymin->count()) kv["year_min"] = std::to_string(r.year_min);
    if (r.ymax->count()) kv["year_max"] = std::to_string(r.year_max);
    if (r.level->count()) kv["log_level"] = r.log_level;
    apply_run_config(cfg, kv);
}

int usage_error(const std::string& msg) {
    nlohmann::ordered_json j;
    j["error"] = "usage";
    j["message"] = msg;
    std::cout << j.dump() << '\n';
    return kExitUsage;
}

// Config file first, then flags on top.
struct Resolved {
    InputPaths paths;
    RunConfig cfg;
    KeyValues rest;
};

Resolved resolve(const PathFlags& p, const RunFlags& r) {
    Resolved out;
    if (!p.config.empty()) out.rest = apply_run_config(out.cfg, read_config_file(p.config));
    auto pick = [&](CLI::Option* opt, const std::string& flag, const char* key) {
        if (opt && opt->count()) return flag;
        auto it = out.rest.find(key);
        return it == out.rest.end() ? std::string() : it->second;
    };
    out.paths.pubs = pick(p.pubs_opt, p.pubs, "pubs");
    out.paths.edges = pick(p.edges_opt, p.edges, "edges");
    out.paths.hierarchy = pick(p.hier_opt, p.hierarchy, "hierarchy");
    if (p.out_opt->count()) out.cfg.out_dir = p.out;
    apply_run_flags(out.cfg, r);
    return out;
}

std::string method_of(const PathFlags& p, const KeyValues& rest) {
    if (p.method_opt && p.method_opt->count()) return p.method;
    auto it = rest.find("method");
    return it == rest.end() ? std::string("all") : it->second;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"breakscan: breakthrough paper detection in citation corpora"};
    app.require_subcommand(1);

    PathFlags vp, cp, dp, rp;
    RunFlags vr, cr, dr, rr;

    auto* validate = app.add_subcommand("validate", "load and check a corpus, print the ingestion report");
    add_path_flags(validate, vp, false);
    add_run_flags(validate, vr);

    auto* css = app.add_subcommand("css", "classify every meso-field with CSS");
    add_path_flags(css, cp, false);
    add_run_flags(css, cr);

    auto* detect = app.add_subcommand("detect", "run breakthrough detection");
    add_path_flags(detect, dp, true);
    add_run_flags(detect, dr);

    auto* report = app.add_subcommand("report", "portfolio report from detection outputs");
    add_path_flags(report, rp, true);
    add_run_flags(report, rr);
    std::string sets_dir, reference_path;
    std::vector<std::string> units;
    auto* sets_opt = report->add_option("--sets", sets_dir, "directory holding m1.tsv, m2a.tsv, m2b.tsv");
    auto* units_opt = report->add_option("--unit", units, "unit id (repeatable); default all units");
    auto* ref_opt = report->add_option("--reference", reference_path, "TSV listing reference pub_ids");

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with ground truth");
    std::string synth_config, synth_out = "synth";
    std::uint64_t seed = 0;
    std::uint64_t target_edges = 0;
    int bt = 0, fol = 0;
    synth->add_option("--config", synth_config, "key = value configuration file");
    auto* synth_out_opt = synth->add_option("--out", synth_out, "output directory");
    auto* seed_opt = synth->add_option("--seed", seed, "random seed");
    auto* edges_opt = synth->add_option("--target-edges", target_edges, "rescale to this many edges");
    auto* bt_opt = synth->add_option("--breakthroughs", bt, "planted breakthroughs");
    auto* fol_opt = synth->add_option("--followers", fol, "planted followers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return usage_error(e.what());
    }

    try {
        if (*validate) {
            auto r = resolve(vp, vr);
            return cmd_validate(r.paths, r.cfg, std::cout, std::cerr);
        }
        if (*css) {
            auto r = resolve(cp, cr);
            return cmd_css(r.paths, r.cfg, std::cout, std::cerr);
        }
        if (*detect) {
            auto r = resolve(dp, dr);
            const auto methods = parse_method_selector(method_of(dp, r.rest));
            return cmd_detect(r.paths, r.cfg, methods, std::cout, std::cerr);
        }
        if (*report) {
            auto r = resolve(rp, rr);
            ReportOptions opts;
            opts.methods = parse_method_selector(method_of(rp, r.rest));
            auto from_rest = [&](CLI::Option* opt, const std::string& flag, const char* key) {
                if (opt->count()) return flag;
                auto it = r.rest.find(key);
                return it == r.rest.end() ? std::string() : it->second;
            };
            opts.sets_dir = from_rest(sets_opt, sets_dir, "sets");
            opts.reference_path = from_rest(ref_opt, reference_path, "reference");
            if (units_opt->count()) {
                opts.units = units;
            } else if (auto it = r.rest.find("unit"); it != r.rest.end()) {
                opts.units = CLI::detail::split(it->second, ',');
            }
            return cmd_report(r.paths, r.cfg, opts, std::cout, std::cerr);
        }
        if (*synth) {
            SynthConfig cfg;
            std::string out_dir = synth_out;
            if (!synth_config.empty()) {
                const auto kv = read_config_file(synth_config);
                apply_synth_config(cfg, kv);
                if (auto it = kv.find("out"); it != kv.end() && !synth_out_opt->count()) {
                    out_dir = it->second;
                }
            }
            if (seed_opt->count()) cfg.seed = seed;
            if (edges_opt->count()) cfg.target_edges = target_edges;
            if (bt_opt->count()) cfg.n_planted_breakthroughs = bt;
            if (fol_opt->count()) cfg.n_planted_followers = fol;
            return cmd_synth(cfg, out_dir, std::cout, std::cerr);
        }
    } catch (const UsageError& e) {
        return usage_error(e.what());
    }
    return usage_error("no subcommand");
}
