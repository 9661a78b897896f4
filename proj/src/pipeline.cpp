#include "breakscan/pipeline.hpp"

#include "breakscan/errors.hpp"
#include "breakscan/hash.hpp"
#include "breakscan/portfolio.hpp"
#include "breakscan/tsv.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace breakscan {

namespace fs = std::filesystem;

namespace files {

std::string set_file(Method m) { return std::string(to_string(m)) + ".tsv"; }
std::string overlay_file(Method m) { return "overlay_" + std::string(to_string(m)) + ".json"; }

} // namespace files

// ---------------------------------------------------------------------------
// Configuration

void RunConfig::validate() const {
    if (!(keep_threshold > 0.0 && keep_threshold <= 1.0)) {
        throw UsageError("keep_threshold must lie in (0, 1], got " +
                         tsv::format_double(keep_threshold));
    }
    if (css_depth < 1 || css_depth > 250) {
        throw UsageError("css_depth must be >= 1, got " + std::to_string(css_depth));
    }
    if (year_min && year_max && *year_min > *year_max) {
        throw UsageError("year_min exceeds year_max");
    }
}

KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    KeyValues kv;
    try {
        for (const auto& item : CLI::ConfigTOML().from_config(in)) {
            // Section open/close markers.
            if (item.name == "++" || item.name == "--") continue;
            std::string value;
            for (std::size_t i = 0; i < item.inputs.size(); ++i) {
                value += (i ? "," : "") + item.inputs[i];
            }
            kv[item.name] = value;
        }
    } catch (const CLI::Error& e) {
        throw UsageError("config file " + path + ": " + e.what());
    }
    return kv;
}

namespace {

double to_double(const std::string& key, const std::string& v) {
    double d = 0.0;
    if (!tsv::parse_double(v, d)) throw UsageError("config: " + key + " expects a number");
    return d;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    std::int64_t i = 0;
    if (!tsv::parse_int(v, i)) throw UsageError("config: " + key + " expects an integer");
    return i;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw UsageError("config: " + key + " expects true or false");
}

LogLevel to_log_level(const std::string& v) {
    if (v == "error") return LogLevel::Error;
    if (v == "warn") return LogLevel::Warn;
    if (v == "info") return LogLevel::Info;
    if (v == "debug") return LogLevel::Debug;
    throw UsageError("config: log_level expects error|warn|info|debug");
}

std::string_view to_string(LogLevel l) {
    switch (l) {
        case LogLevel::Error: return "error";
        case LogLevel::Warn: return "warn";
        case LogLevel::Info: return "info";
        case LogLevel::Debug: return "debug";
    }
    return "info";
}

} // namespace

KeyValues apply_run_config(RunConfig& cfg, const KeyValues& kv) {
    KeyValues rest;
    for (const auto& [k, v] : kv) {
        if (k == "keep_threshold") {
            cfg.keep_threshold = to_double(k, v);
        } else if (k == "css_depth") {
            cfg.css_depth = static_cast<int>(to_int(k, v));
        } else if (k == "follower_semantics") {
            const auto s = parse_follower_semantics(v);
            if (!s) throw UsageError("config: follower_semantics expects union|per_pair");
            cfg.follower_semantics = *s;
        } else if (k == "m1_compose_follower_filter") {
            cfg.m1_compose_follower_filter = to_bool(k, v);
        } else if (k == "m2b_strict") {
            cfg.m2b_strict = to_bool(k, v);
        } else if (k == "year_min") {
            cfg.year_min = static_cast<int>(to_int(k, v));
        } else if (k == "year_max") {
            cfg.year_max = static_cast<int>(to_int(k, v));
        } else if (k == "out") {
            cfg.out_dir = v;
        } else if (k == "log_level") {
            cfg.log_level = to_log_level(v);
        } else if (k == "pubs" || k == "edges" || k == "hierarchy" || k == "method" ||
                   k == "sets" || k == "reference" || k == "unit") {
            rest[k] = v;
        } else {
            throw UsageError("config: unknown key '" + k + "'");
        }
    }
    return rest;
}

void apply_synth_config(SynthConfig& cfg, const KeyValues& kv) {
    auto as_int = [](const std::string& k, const std::string& v) {
        return static_cast<int>(to_int(k, v));
    };
    for (const auto& [k, v] : kv) {
        if (k == "seed") {
            std::int64_t s = 0;
            if (!tsv::parse_int(v, s) || s < 0) throw UsageError("config: seed expects a nonnegative integer");
            cfg.seed = static_cast<std::uint64_t>(s);
        } else if (k == "n_macro") {
            cfg.n_macro = as_int(k, v);
        } else if (k == "meso_per_macro") {
            cfg.meso_per_macro = as_int(k, v);
        } else if (k == "micro_per_meso") {
            cfg.micro_per_meso = as_int(k, v);
        } else if (k == "papers_per_micro") {
            cfg.papers_per_micro = as_int(k, v);
        } else if (k == "year_min") {
            cfg.year_min = as_int(k, v);
        } else if (k == "year_max") {
            cfg.year_max = as_int(k, v);
        } else if (k == "attract_location") {
            cfg.attract_location = to_double(k, v);
        } else if (k == "attract_scale") {
            cfg.attract_scale = to_double(k, v);
        } else if (k == "target_edges") {
            const auto t = to_int(k, v);
            if (t < 0) throw UsageError("config: target_edges must be nonnegative");
            cfg.target_edges = static_cast<std::uint64_t>(t);
        } else if (k == "within_micro_rate") {
            cfg.within_micro_rate = to_double(k, v);
        } else if (k == "cross_macro_rate") {
            cfg.cross_macro_rate = to_double(k, v);
        } else if (k == "n_planted_breakthroughs") {
            cfg.n_planted_breakthroughs = as_int(k, v);
        } else if (k == "n_planted_followers") {
            cfg.n_planted_followers = as_int(k, v);
        } else if (k == "follower_cociter_share") {
            cfg.follower_cociter_share = to_double(k, v);
        } else if (k == "planted_quantile") {
            cfg.planted_quantile = to_double(k, v);
        } else if (k == "review_share") {
            cfg.review_share = to_double(k, v);
        } else if (k == "other_share") {
            cfg.other_share = to_double(k, v);
        } else if (k == "n_units") {
            cfg.n_units = as_int(k, v);
        } else if (k == "unit_rate") {
            cfg.unit_rate = to_double(k, v);
        } else if (k == "out") {
            // handled by the caller
        } else {
            throw UsageError("config: unknown synth key '" + k + "'");
        }
    }
}

std::vector<Method> parse_method_selector(const std::string& s) {
    if (s == "all") return {Method::M1, Method::M2a, Method::M2b};
    if (auto m = parse_method(s)) return {*m};
    throw UsageError("unknown method '" + s + "' (expected m1|m2a|m2b|all)");
}

// ---------------------------------------------------------------------------
// Analysis chain

const BreakthroughSet& Detection::set(Method m) const {
    switch (m) {
        case Method::M1: return m1;
        case Method::M2a: return m2a;
        case Method::M2b: return m2b;
    }
    return m1;
}

Detection run_detection(const Corpus& corpus, const RunConfig& cfg) {
    Detection d;
    d.counts = citation_counts(corpus);
    d.css = css_all_fields(corpus, d.counts, cfg.css_depth);
    d.pool = candidate_pool(corpus, d.css);
    d.pairs = find_pairs(d.pool, corpus);
    d.followers = filter_followers(d.pool, d.pairs, corpus,
                                   {cfg.keep_threshold, cfg.follower_semantics});
    M1Options m1_opts;
    if (cfg.m1_compose_follower_filter) m1_opts.follower_filter = &d.followers;
    d.m1 = detect_m1(corpus, d.counts, m1_opts);
    d.m2a = detect_m2a(d.pool, d.followers);
    d.diffusion = macro_diffusion(d.m2a, corpus);
    d.m2b = detect_m2b(d.m2a, d.diffusion, corpus, cfg.m2b_strict);
    d.log = d.css.log;
    d.log.insert(d.log.end(), d.followers.log.begin(), d.followers.log.end());
    return d;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

class Logger {
public:
    Logger(std::ostream& err, LogLevel level) : err_(err), level_(level) {}

    void info(const std::string& msg) const { emit(LogLevel::Info, msg); }
    void warn(const std::string& msg) const { emit(LogLevel::Warn, msg); }
    void debug(const std::string& msg) const { emit(LogLevel::Debug, msg); }

private:
    void emit(LogLevel l, const std::string& msg) const {
        if (l <= level_) err_ << "[" << to_string(l) << "] " << msg << '\n';
    }
    std::ostream& err_;
    LogLevel level_;
};

void emit_error(std::ostream& out, const char* kind, const std::string& message,
                nlohmann::ordered_json extra = nlohmann::ordered_json::object()) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    for (auto& [k, v] : extra.items()) j[k] = v;
    out << j.dump() << '\n';
}

template <class F>
int guarded(std::ostream& out, F&& body) {
    try {
        return body();
    } catch (const FormatError& e) {
        emit_error(out, "format", e.what(), {{"file", e.file()}, {"line", e.line()}});
        return kExitFormat;
    } catch (const ConsistencyError& e) {
        nlohmann::ordered_json extra = nlohmann::ordered_json::object();
        if (!e.pub_id().empty()) extra["pub_id"] = e.pub_id();
        emit_error(out, "consistency", e.what(), extra);
        return kExitConsistency;
    } catch (const UsageError& e) {
        emit_error(out, "usage", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        emit_error(out, "usage", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        emit_error(out, "input", e.what());
        return kExitFormat;
    }
}

void require_paths(const InputPaths& p) {
    if (p.pubs.empty() || p.edges.empty() || p.hierarchy.empty()) {
        throw UsageError("--pubs, --edges and --hierarchy are required");
    }
}

Corpus load(const InputPaths& paths, const RunConfig& cfg, const Logger& log) {
    require_paths(paths);
    cfg.validate();
    auto corpus = load_corpus(paths.pubs, paths.edges, paths.hierarchy, cfg.load_options());
    const auto& r = corpus.report();
    log.info("loaded " + std::to_string(r.publications) + " publications, " +
             std::to_string(r.edges_accepted) + " edges (" + std::to_string(r.edges_self) +
             " self, " + std::to_string(r.edges_duplicate) + " duplicate, " +
             std::to_string(r.edges_dangling) + " dangling rejected)");
    return corpus;
}

// Output files are assembled in memory, written, and hashed for the manifest.
class OutputSet {
public:
    explicit OutputSet(std::string dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, std::string content) {
        files_.emplace_back(name, std::move(content));
    }

    template <class Writer>
    void add_stream(const std::string& name, Writer&& w) {
        std::ostringstream s;
        w(s);
        add(name, s.str());
    }

    nlohmann::ordered_json write_all() const {
        fs::create_directories(dir_);
        nlohmann::ordered_json hashes = nlohmann::ordered_json::object();
        for (const auto& [name, content] : files_) {
            const auto path = (fs::path(dir_) / name).string();
            std::ofstream out(path, std::ios::binary);
            out << content;
            if (!out) throw std::runtime_error("failed writing " + path);
            hashes[name] = sha256_hex(content);
        }
        return hashes;
    }

    const std::string& dir() const { return dir_; }

private:
    std::string dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

nlohmann::ordered_json config_echo(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["keep_threshold"] = cfg.keep_threshold;
    j["css_depth"] = cfg.css_depth;
    j["follower_semantics"] = std::string(to_string(cfg.follower_semantics));
    j["m1_compose_follower_filter"] = cfg.m1_compose_follower_filter;
    j["m2b_strict"] = cfg.m2b_strict;
    j["year_min"] = cfg.year_min ? nlohmann::ordered_json(*cfg.year_min) : nullptr;
    j["year_max"] = cfg.year_max ? nlohmann::ordered_json(*cfg.year_max) : nullptr;
    return j;
}

nlohmann::ordered_json input_hashes(const InputPaths& p) {
    nlohmann::ordered_json j;
    j["publications"] = {{"path", p.pubs}, {"sha256", sha256_file(p.pubs)}};
    j["edges"] = {{"path", p.edges}, {"sha256", sha256_file(p.edges)}};
    j["hierarchy"] = {{"path", p.hierarchy}, {"sha256", sha256_file(p.hierarchy)}};
    return j;
}

void add_css_outputs(OutputSet& outs, const Corpus& corpus, const CssResult& css) {
    outs.add_stream(files::kCssThresholds, [&](std::ostream& s) { write_css_thresholds(s, css); });
    outs.add_stream(files::kCssClasses,
                    [&](std::ostream& s) { write_css_classes(s, corpus, css); });
    outs.add_stream(files::kCssSummary,
                    [&](std::ostream& s) { write_css_summary(s, css_summary(css.fields)); });
}

BreakthroughSet read_set_file(const std::string& path, Method method, const Corpus& corpus) {
    if (!fs::exists(path)) {
        throw std::runtime_error("missing detection output " + path);
    }
    const auto text = tsv::read_file(path);
    tsv::LineReader reader(text);
    std::string_view line;
    std::vector<std::string_view> f;
    if (!reader.next(line)) throw FormatError(path, 1, "missing header line");
    tsv::split(line, f);
    if (f.size() < 2 || f[0] != "pub_id" || f[1] != "method") {
        throw FormatError(path, 1, "expected header starting with 'pub_id\\tmethod'");
    }
    BreakthroughSet set;
    set.method = method;
    while (reader.next(line)) {
        if (line.empty()) continue;
        tsv::split(line, f);
        if (f.size() < 2) throw FormatError(path, reader.line_number(), "expected >= 2 columns");
        if (f[1] != to_string(method)) {
            throw FormatError(path, reader.line_number(),
                              "method column '" + std::string(f[1]) + "' does not match file");
        }
        const auto idx = corpus.index_of(f[0]);
        if (!idx) {
            throw ConsistencyError(std::string(f[0]), "detection output " + path +
                                                          " names unknown publication '" +
                                                          std::string(f[0]) + "'");
        }
        set.members.push_back(*idx);
    }
    std::sort(set.members.begin(), set.members.end());
    set.members.erase(std::unique(set.members.begin(), set.members.end()), set.members.end());
    return set;
}

std::vector<std::string> read_id_list(const std::string& path) {
    if (!fs::exists(path)) throw std::runtime_error("missing reference file " + path);
    const auto text = tsv::read_file(path);
    tsv::LineReader reader(text);
    std::string_view line;
    if (!reader.next(line) || line != "pub_id") {
        throw FormatError(path, 1, "missing header line 'pub_id'");
    }
    std::vector<std::string> ids;
    while (reader.next(line)) {
        if (!line.empty()) ids.emplace_back(line);
    }
    return ids;
}

} // namespace

int cmd_validate(const InputPaths& paths, const RunConfig& cfg, std::ostream& out,
                 std::ostream& err) {
    return guarded(out, [&] {
        Logger log(err, cfg.log_level);
        const auto corpus = load(paths, cfg, log);
        out << corpus.report().to_json() << '\n';
        return static_cast<int>(kExitOk);
    });
}

int cmd_css(const InputPaths& paths, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(out, [&] {
        Logger log(err, cfg.log_level);
        const auto corpus = load(paths, cfg, log);
        const auto counts = citation_counts(corpus);
        const auto css = css_all_fields(corpus, counts, cfg.css_depth);
        for (const auto& line : css.log) log.debug(line);
        OutputSet outs(cfg.out_dir);
        add_css_outputs(outs, corpus, css);
        outs.write_all();
        out << format_css_summary(css_summary(css.fields));
        return static_cast<int>(kExitOk);
    });
}

int cmd_detect(const InputPaths& paths, const RunConfig& cfg, const std::vector<Method>& methods,
               std::ostream& out, std::ostream& err) {
    return guarded(out, [&] {
        if (methods.empty()) throw UsageError("no method selected");
        Logger log(err, cfg.log_level);
        const auto corpus = load(paths, cfg, log);
        const auto d = run_detection(corpus, cfg);

        std::size_t zero_citer = 0;
        for (const auto& v : d.followers.verdicts) zero_citer += v.zero_citers ? 1 : 0;
        if (zero_citer) {
            log.warn(std::to_string(zero_citer) + " paired candidate(s) without citers kept");
        }
        for (const auto& line : d.log) log.debug(line);
        log.info("pool " + std::to_string(d.pool.size()) + ", pairs " +
                 std::to_string(d.pairs.size()) + ", m1 " + std::to_string(d.m1.size()) +
                 ", m2a " + std::to_string(d.m2a.size()) + ", m2b " +
                 std::to_string(d.m2b.size()));

        OutputSet outs(cfg.out_dir);
        add_css_outputs(outs, corpus, d.css);
        outs.add_stream(files::kVerdicts,
                        [&](std::ostream& s) { write_verdicts(s, corpus, d.followers); });
        nlohmann::ordered_json method_names = nlohmann::ordered_json::array();
        for (Method m : methods) {
            method_names.push_back(std::string(to_string(m)));
            outs.add_stream(files::set_file(m), [&](std::ostream& s) {
                write_breakthrough_set(s, corpus, d.set(m));
            });
            outs.add(files::overlay_file(m), overlay_json(d.set(m), corpus));
        }
        std::string run_log;
        for (const auto& line : d.log) run_log += line + '\n';
        outs.add(files::kRunLog, run_log);

        nlohmann::ordered_json manifest;
        manifest["command"] = "detect";
        manifest["config"] = config_echo(cfg);
        manifest["methods"] = method_names;
        manifest["inputs"] = input_hashes(paths);
        manifest["ingestion"] = nlohmann::ordered_json::parse(corpus.report().to_json());
        manifest["outputs"] = outs.write_all();

        const auto manifest_path = (fs::path(cfg.out_dir) / files::kManifest).string();
        std::ofstream mf(manifest_path, std::ios::binary);
        mf << manifest.dump(2) << '\n';
        if (!mf) throw std::runtime_error("failed writing " + manifest_path);

        out << manifest.dump() << '\n';
        return static_cast<int>(kExitOk);
    });
}

int cmd_report(const InputPaths& paths, const RunConfig& cfg, const ReportOptions& opts,
               std::ostream& out, std::ostream& err) {
    return guarded(out, [&] {
        if (opts.methods.empty()) throw UsageError("no method selected");
        Logger log(err, cfg.log_level);
        const auto corpus = load(paths, cfg, log);
        const std::string sets_dir = opts.sets_dir.empty() ? cfg.out_dir : opts.sets_dir;

        std::vector<BreakthroughSet> sets;
        for (Method m : opts.methods) {
            sets.push_back(read_set_file((fs::path(sets_dir) / files::set_file(m)).string(), m,
                                         corpus));
        }

        ReferenceSet reference = ReferenceSet::whole(corpus);
        if (!opts.reference_path.empty()) {
            std::size_t unknown = 0;
            const auto ids = read_id_list(opts.reference_path);
            reference = ReferenceSet::from_ids(corpus, ids, &unknown);
            if (unknown) {
                log.warn(std::to_string(unknown) + " reference id(s) not in the corpus");
            }
        }

        const auto counts = citation_counts(corpus);
        const auto scores = top_decile_scores(corpus, counts);
        const auto units = opts.units.empty() ? corpus_units(corpus) : opts.units;

        std::vector<PortfolioReport> reports;
        reports.push_back(unit_report(corpus, sets, "", reference, scores));
        for (const auto& u : units) {
            reports.push_back(unit_report(corpus, sets, u, reference, scores));
        }

        std::ostringstream tsv_out;
        write_report(tsv_out, reports);
        OutputSet outs(cfg.out_dir);
        outs.add(files::kReport, tsv_out.str());
        outs.write_all();
        out << tsv_out.str();
        return static_cast<int>(kExitOk);
    });
}

int cmd_synth(const SynthConfig& synth, const std::string& out_dir, std::ostream& out,
              std::ostream& err) {
    return guarded(out, [&] {
        synth.validate();
        auto result = generate(synth);
        fs::create_directories(out_dir);
        const auto dir = fs::path(out_dir);
        write_corpus(result.corpus, (dir / files::kPublications).string(),
                     (dir / files::kEdges).string(), (dir / files::kHierarchy).string());
        {
            const auto path = (dir / files::kGroundTruth).string();
            std::ofstream gt(path, std::ios::binary);
            write_ground_truth(gt, result.truth);
            if (!gt) throw std::runtime_error("failed writing " + path);
        }
        err << "[info] wrote " << result.corpus.size() << " publications and "
            << result.corpus.n_edges() << " edges to " << out_dir << '\n';
        out << result.corpus.report().to_json() << '\n';
        return static_cast<int>(kExitOk);
    });
}

} // namespace breakscan
