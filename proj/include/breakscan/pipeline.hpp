#pragma once
// Command implementations behind the `breakscan` executable.
//
// Each cmd_* function returns a process exit code and writes its primary
// output (JSON reports, error objects) to `out` and diagnostics to `err`.
// All commands are deterministic given their inputs and configuration.

#include "breakscan/corpus.hpp"
#include "breakscan/css.hpp"
#include "breakscan/detect.hpp"
#include "breakscan/follower.hpp"
#include "breakscan/synthgen.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace breakscan {

enum ExitCode : int {
    kExitOk = 0,
    kExitFormat = 2,
    kExitConsistency = 3,
    kExitUsage = 4,
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class LogLevel { Error, Warn, Info, Debug };

struct InputPaths {
    std::string pubs;
    std::string edges;
    std::string hierarchy;
};

struct RunConfig {
    double keep_threshold = kDefaultKeepThreshold;
    int css_depth = kDefaultCssDepth;
    FollowerSemantics follower_semantics = FollowerSemantics::Union;
    bool m1_compose_follower_filter = false;
    bool m2b_strict = true;
    std::optional<int> year_min;
    std::optional<int> year_max;
    std::string out_dir = "out";
    LogLevel log_level = LogLevel::Info;

    // Throws UsageError unless keep_threshold is in (0, 1] and css_depth >= 1.
    void validate() const;
    LoadOptions load_options() const { return {year_min, year_max}; }
};

using KeyValues = std::map<std::string, std::string>;

// Reads a TOML-style `key = value` file. Section headers are accepted and
// ignored; later keys win. Throws UsageError if the file cannot be read.
KeyValues read_config_file(const std::string& path);

// Apply recognised keys; an unknown key or unparsable value is a UsageError.
// Keys not belonging to the target (`pubs`, `method`, ...) are returned.
KeyValues apply_run_config(RunConfig& cfg, const KeyValues& kv);
void apply_synth_config(SynthConfig& cfg, const KeyValues& kv);

std::vector<Method> parse_method_selector(const std::string& s);   // m1|m2a|m2b|all

// Full analysis chain over a loaded corpus.
struct Detection {
    CitationCounts counts;
    CssResult css;
    std::vector<PubIndex> pool;
    std::vector<FollowerPair> pairs;
    FollowerResult followers;
    BreakthroughSet m1, m2a, m2b;
    std::vector<DiffusionStat> diffusion;
    std::vector<std::string> log;

    const BreakthroughSet& set(Method m) const;
};

Detection run_detection(const Corpus& corpus, const RunConfig& cfg);

int cmd_validate(const InputPaths& paths, const RunConfig& cfg, std::ostream& out,
                 std::ostream& err);
int cmd_css(const InputPaths& paths, const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_detect(const InputPaths& paths, const RunConfig& cfg, const std::vector<Method>& methods,
               std::ostream& out, std::ostream& err);

struct ReportOptions {
    std::string sets_dir;                 // defaults to the run's out_dir
    std::vector<std::string> units;       // empty: every unit in the corpus
    std::string reference_path;           // empty: whole corpus
    std::vector<Method> methods{Method::M1, Method::M2a, Method::M2b};
};

int cmd_report(const InputPaths& paths, const RunConfig& cfg, const ReportOptions& opts,
               std::ostream& out, std::ostream& err);
int cmd_synth(const SynthConfig& synth, const std::string& out_dir, std::ostream& out,
              std::ostream& err);

// File names produced by the commands.
namespace files {
inline constexpr const char* kPublications = "publications.tsv";
inline constexpr const char* kEdges = "edges.tsv";
inline constexpr const char* kHierarchy = "hierarchy.tsv";
inline constexpr const char* kGroundTruth = "ground_truth.tsv";
inline constexpr const char* kCssThresholds = "css_thresholds.tsv";
inline constexpr const char* kCssClasses = "css_classes.tsv";
inline constexpr const char* kCssSummary = "css_summary.tsv";
inline constexpr const char* kVerdicts = "verdicts.tsv";
inline constexpr const char* kReport = "report.tsv";
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kRunLog = "run_log.txt";
std::string set_file(Method m);       // m1.tsv, ...
std::string overlay_file(Method m);   // overlay_m1.json, ...
} // namespace files

} // namespace breakscan
