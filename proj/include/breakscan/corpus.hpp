#pragma once
// Publication corpus: records, citation edges and the micro/meso/macro
// cluster hierarchy, loaded from flat TSV files.
//
// Publications are addressed internally by a dense PubIndex (load order).
// Accepted edges are stored twice in CSR form: outgoing references per
// citing paper and incoming citers per cited paper, both sorted, so that
// distinct-citer queries are simple sorted-range operations.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace breakscan {

using PubIndex = std::uint32_t;
using ClusterId = std::int64_t;

enum class DocType : std::uint8_t { Article, Review, Other };

std::string_view to_string(DocType t);
std::optional<DocType> parse_doc_type(std::string_view s);

// Articles and reviews take part in CSS, candidacy and portfolios; "other"
// documents only ever appear as citers.
inline bool is_eligible(DocType t) { return t != DocType::Other; }

struct PublicationRecord {
    std::string pub_id;
    int year = 0;
    DocType doc_type = DocType::Article;
    ClusterId micro_id = 0;
    ClusterId meso_id = 0;
    ClusterId macro_id = 0;
    std::vector<std::string> unit_ids;

    bool has_unit(std::string_view unit) const;
    bool operator==(const PublicationRecord&) const = default;
};

struct CitationEdge {
    PubIndex citing;
    PubIndex cited;

    bool operator==(const CitationEdge&) const = default;
};

class ClusterHierarchy {
public:
    struct Parents {
        ClusterId meso;
        ClusterId macro;
        bool operator==(const Parents&) const = default;
    };

    // Throws ConsistencyError if `micro` is already present or `meso` was
    // previously mapped to a different macro.
    void add(ClusterId micro, ClusterId meso, ClusterId macro);

    std::optional<Parents> parents_of(ClusterId micro) const;
    std::optional<ClusterId> macro_of_meso(ClusterId meso) const;

    std::size_t n_micro() const { return micro_.size(); }
    std::size_t n_meso() const { return meso_.size(); }
    std::size_t n_macro() const;

    const std::map<ClusterId, Parents>& micro_map() const { return micro_; }
    const std::map<ClusterId, ClusterId>& meso_map() const { return meso_; }

    bool operator==(const ClusterHierarchy&) const = default;

private:
    std::map<ClusterId, Parents> micro_;
    std::map<ClusterId, ClusterId> meso_;
};

struct IngestionReport {
    std::size_t publications = 0;
    std::size_t edges_accepted = 0;
    std::size_t edges_self = 0;
    std::size_t edges_duplicate = 0;
    std::size_t edges_dangling = 0;

    std::size_t edge_lines() const {
        return edges_accepted + edges_self + edges_duplicate + edges_dangling;
    }
    std::string to_json() const;
};

struct LoadOptions {
    // Declared publication-year window. When unset, the window is the range
    // observed in the publications file.
    std::optional<int> year_min;
    std::optional<int> year_max;
};

class Corpus {
public:
    Corpus() = default;

    // Builds a validated corpus. Edges are filtered exactly as during file
    // ingestion (self, dangling and duplicate edges tallied in report()).
    static Corpus build(std::vector<PublicationRecord> pubs,
                        const std::vector<std::pair<std::string, std::string>>& edges,
                        ClusterHierarchy hierarchy,
                        const LoadOptions& opts = {});

    // Same, with endpoints already given as indices into `pubs`.
    static Corpus build_indexed(std::vector<PublicationRecord> pubs,
                                std::vector<CitationEdge> edges,
                                ClusterHierarchy hierarchy,
                                const LoadOptions& opts = {});

    std::size_t size() const { return pubs_.size(); }
    const PublicationRecord& pub(PubIndex i) const { return pubs_[i]; }
    const std::vector<PublicationRecord>& publications() const { return pubs_; }
    std::optional<PubIndex> index_of(std::string_view pub_id) const;

    const ClusterHierarchy& hierarchy() const { return hierarchy_; }
    int year_min() const { return year_min_; }
    int year_max() const { return year_max_; }
    const IngestionReport& report() const { return report_; }

    std::size_t n_edges() const { return ref_targets_.size(); }
    // Papers cited by `i`, ascending.
    std::span<const PubIndex> references(PubIndex i) const;
    // Distinct papers citing `i`, ascending.
    std::span<const PubIndex> citers(PubIndex i) const;
    bool cites(PubIndex citing, PubIndex cited) const;
    // All accepted edges ordered by (citing, cited).
    std::vector<CitationEdge> edges() const;

    // Structural equality (records, edges, hierarchy, year window).
    bool same_content(const Corpus& other) const;

private:
    void index_publications();
    void validate_publications(const LoadOptions& opts);
    void build_adjacency(std::vector<std::uint64_t>& packed);

    std::vector<PublicationRecord> pubs_;
    std::unordered_map<std::string, PubIndex> index_;
    ClusterHierarchy hierarchy_;
    int year_min_ = 0;
    int year_max_ = 0;
    IngestionReport report_;

    std::vector<std::uint64_t> ref_offsets_;
    std::vector<PubIndex> ref_targets_;
    std::vector<std::uint64_t> citer_offsets_;
    std::vector<PubIndex> citer_sources_;

    friend Corpus load_corpus(const std::string&, const std::string&,
                              const std::string&, const LoadOptions&);
};

// Reads the three TSV files. Throws FormatError (with line number) for
// malformed lines or a missing header and ConsistencyError for hierarchy
// contradictions, duplicate ids or out-of-window years.
Corpus load_corpus(const std::string& pub_path,
                   const std::string& edge_path,
                   const std::string& hierarchy_path,
                   const LoadOptions& opts = {});

// Writes the corpus back out in the same TSV formats load_corpus reads.
void write_corpus(const Corpus& corpus,
                  const std::string& pub_path,
                  const std::string& edge_path,
                  const std::string& hierarchy_path);

// In-corpus citation count per publication (variable window: every citing
// corpus paper counts regardless of its year). Indexed by PubIndex.
using CitationCounts = std::vector<std::uint32_t>;
CitationCounts citation_counts(const Corpus& corpus);

} // namespace breakscan
