#pragma once
// Unit-level (portfolio) reporting over breakthrough sets.
//
// A unit's publications are the articles and reviews tagged with the unit,
// restricted to a reference set (the whole corpus by default). For each
// method the report gives the unit's breakthrough count, its share of the
// unit's own output, its share of the reference breakthroughs, and the
// ratio of that share to the unit's share of reference publications.

#include "breakscan/corpus.hpp"
#include "breakscan/detect.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace breakscan {

class ReferenceSet {
public:
    static ReferenceSet whole(const Corpus& corpus);
    // Ids absent from the corpus are skipped and counted in `unknown`.
    static ReferenceSet from_ids(const Corpus& corpus, std::span<const std::string> ids,
                                 std::size_t* unknown = nullptr);

    bool contains(PubIndex p) const { return member_[p] != 0; }

private:
    std::vector<char> member_;
};

struct MethodShare {
    Method method = Method::M1;
    std::size_t n_breakthroughs = 0;
    std::size_t reference_breakthroughs = 0;
    std::optional<double> pct_of_own_set;                    // fraction in [0, 1]
    std::optional<double> share_of_reference_breakthroughs;  // fraction in [0, 1]
    std::optional<double> baseline_ratio;
};

struct PortfolioReport {
    std::string unit_id;
    std::size_t n_pubs = 0;
    std::size_t n_reference_pubs = 0;
    std::vector<MethodShare> methods;   // same order as the sets passed in
    std::optional<double> pp_top10;
};

// Fractional top-10% membership per publication, stratified by
// (meso-field, year) over articles and reviews. Papers strictly above the
// 90th-percentile cut score 1; papers tied at the cut share the remaining
// mass equally. "other" documents score 0 and are never averaged.
std::vector<double> top_decile_scores(const Corpus& corpus, const CitationCounts& counts);

// Mean top-decile score over the unit's articles and reviews inside the
// reference; absent when the unit has none.
std::optional<double> pp_top10(const Corpus& corpus, std::span<const double> scores,
                               const std::string& unit_id, const ReferenceSet& reference);
std::optional<double> pp_top10(const Corpus& corpus, const CitationCounts& counts,
                               const std::string& unit_id);

// An empty unit_id means "every publication in the reference".
PortfolioReport unit_report(const Corpus& corpus, std::span<const BreakthroughSet> sets,
                            const std::string& unit_id, const ReferenceSet& reference,
                            std::span<const double> top10_scores = {});

std::map<ClusterId, std::size_t> meso_overlay(const BreakthroughSet& set, const Corpus& corpus);
std::string overlay_json(const BreakthroughSet& set, const Corpus& corpus);

// Distinct unit ids appearing on the corpus records, sorted.
std::vector<std::string> corpus_units(const Corpus& corpus);

inline constexpr const char* kReferenceRowId = "(reference)";

// One line per (unit, method). Percentages carry two decimals; absent
// values are written as NA.
void write_report(std::ostream& out, std::span<const PortfolioReport> reports);

} // namespace breakscan
