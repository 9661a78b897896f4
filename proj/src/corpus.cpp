#include "breakscan/corpus.hpp"

#include "breakscan/errors.hpp"
#include "breakscan/tsv.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>

namespace breakscan {

namespace {

constexpr std::string_view kPubHeader[] = {"pub_id", "year", "doc_type", "micro_id",
                                           "meso_id", "macro_id", "unit_ids"};
constexpr std::string_view kEdgeHeader[] = {"citing_id", "cited_id"};
constexpr std::string_view kHierarchyHeader[] = {"micro_id", "meso_id", "macro_id"};

template <std::size_t N>
void expect_header(tsv::LineReader& reader, const std::string& file,
                   const std::string_view (&names)[N]) {
    std::string_view line;
    if (!reader.next(line)) {
        throw FormatError(file, 1, "missing header line");
    }
    std::vector<std::string_view> fields;
    tsv::split(line, fields);
    bool ok = fields.size() == N;
    for (std::size_t i = 0; ok && i < N; ++i) {
        ok = fields[i] == names[i];
    }
    if (!ok) {
        std::string expected;
        for (std::size_t i = 0; i < N; ++i) {
            expected += (i ? "\\t" : "") + std::string(names[i]);
        }
        throw FormatError(file, 1, "missing or invalid header, expected '" + expected + "'");
    }
}

ClusterId parse_cluster(std::string_view s, const std::string& file, std::size_t line,
                        const char* column) {
    std::int64_t v = 0;
    if (!tsv::parse_int(s, v)) {
        throw FormatError(file, line, std::string("non-integer ") + column + " '" +
                                          std::string(s) + "'");
    }
    return v;
}

std::uint64_t pack(PubIndex citing, PubIndex cited) {
    return (static_cast<std::uint64_t>(citing) << 32) | cited;
}

// Collects raw edge endpoints, classifying rejects the same way for files
// and in-memory construction.
class EdgeAccumulator {
public:
    EdgeAccumulator(const Corpus& corpus, IngestionReport& report)
        : corpus_(corpus), report_(report) {}

    void add(std::string_view citing, std::string_view cited) {
        if (citing == cited) {
            ++report_.edges_self;
            return;
        }
        const auto a = corpus_.index_of(citing);
        const auto b = corpus_.index_of(cited);
        if (!a || !b) {
            ++report_.edges_dangling;
            return;
        }
        packed_.push_back(pack(*a, *b));
    }

    std::vector<std::uint64_t> take() {
        std::sort(packed_.begin(), packed_.end());
        const auto before = packed_.size();
        packed_.erase(std::unique(packed_.begin(), packed_.end()), packed_.end());
        report_.edges_duplicate += before - packed_.size();
        report_.edges_accepted = packed_.size();
        return std::move(packed_);
    }

private:
    const Corpus& corpus_;
    IngestionReport& report_;
    std::vector<std::uint64_t> packed_;
};

} // namespace

std::string_view to_string(DocType t) {
    switch (t) {
        case DocType::Article: return "article";
        case DocType::Review: return "review";
        case DocType::Other: return "other";
    }
    return "other";
}

std::optional<DocType> parse_doc_type(std::string_view s) {
    if (s == "article") return DocType::Article;
    if (s == "review") return DocType::Review;
    if (s == "other") return DocType::Other;
    return std::nullopt;
}

bool PublicationRecord::has_unit(std::string_view unit) const {
    return std::find(unit_ids.begin(), unit_ids.end(), unit) != unit_ids.end();
}

// ---------------------------------------------------------------------------
// ClusterHierarchy

void ClusterHierarchy::add(ClusterId micro, ClusterId meso, ClusterId macro) {
    if (micro_.count(micro)) {
        throw ConsistencyError("", "micro-field " + std::to_string(micro) +
                                       " listed more than once in hierarchy");
    }
    auto [it, inserted] = meso_.emplace(meso, macro);
    if (!inserted && it->second != macro) {
        throw ConsistencyError("", "meso-field " + std::to_string(meso) +
                                       " mapped to macro-fields " +
                                       std::to_string(it->second) + " and " +
                                       std::to_string(macro));
    }
    micro_.emplace(micro, Parents{meso, macro});
}

std::optional<ClusterHierarchy::Parents> ClusterHierarchy::parents_of(ClusterId micro) const {
    auto it = micro_.find(micro);
    if (it == micro_.end()) return std::nullopt;
    return it->second;
}

std::optional<ClusterId> ClusterHierarchy::macro_of_meso(ClusterId meso) const {
    auto it = meso_.find(meso);
    if (it == meso_.end()) return std::nullopt;
    return it->second;
}

std::size_t ClusterHierarchy::n_macro() const {
    std::set<ClusterId> macros;
    for (const auto& [meso, macro] : meso_) macros.insert(macro);
    return macros.size();
}

// ---------------------------------------------------------------------------
// IngestionReport

std::string IngestionReport::to_json() const {
    nlohmann::ordered_json j;
    j["publications"] = publications;
    j["edges_accepted"] = edges_accepted;
    j["edges_self"] = edges_self;
    j["edges_duplicate"] = edges_duplicate;
    j["edges_dangling"] = edges_dangling;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Corpus

std::optional<PubIndex> Corpus::index_of(std::string_view pub_id) const {
    auto it = index_.find(std::string(pub_id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::span<const PubIndex> Corpus::references(PubIndex i) const {
    return {ref_targets_.data() + ref_offsets_[i], ref_targets_.data() + ref_offsets_[i + 1]};
}

std::span<const PubIndex> Corpus::citers(PubIndex i) const {
    return {citer_sources_.data() + citer_offsets_[i],
            citer_sources_.data() + citer_offsets_[i + 1]};
}

bool Corpus::cites(PubIndex citing, PubIndex cited) const {
    const auto refs = references(citing);
    return std::binary_search(refs.begin(), refs.end(), cited);
}

std::vector<CitationEdge> Corpus::edges() const {
    std::vector<CitationEdge> out;
    out.reserve(n_edges());
    for (PubIndex i = 0; i < pubs_.size(); ++i) {
        for (PubIndex j : references(i)) out.push_back({i, j});
    }
    return out;
}

bool Corpus::same_content(const Corpus& other) const {
    return pubs_ == other.pubs_ && hierarchy_ == other.hierarchy_ &&
           year_min_ == other.year_min_ && year_max_ == other.year_max_ &&
           ref_offsets_ == other.ref_offsets_ && ref_targets_ == other.ref_targets_;
}

void Corpus::index_publications() {
    index_.clear();
    index_.reserve(pubs_.size());
    for (PubIndex i = 0; i < pubs_.size(); ++i) {
        auto [it, inserted] = index_.emplace(pubs_[i].pub_id, i);
        if (!inserted) {
            throw ConsistencyError(pubs_[i].pub_id,
                                   "duplicate pub_id '" + pubs_[i].pub_id + "'");
        }
    }
    report_.publications = pubs_.size();
}

void Corpus::validate_publications(const LoadOptions& opts) {
    if (!pubs_.empty()) {
        auto [lo, hi] = std::minmax_element(
            pubs_.begin(), pubs_.end(),
            [](const auto& a, const auto& b) { return a.year < b.year; });
        year_min_ = lo->year;
        year_max_ = hi->year;
    }
    if (opts.year_min) year_min_ = *opts.year_min;
    if (opts.year_max) year_max_ = *opts.year_max;

    for (const auto& p : pubs_) {
        if (p.year < year_min_ || p.year > year_max_) {
            throw ConsistencyError(p.pub_id, "publication '" + p.pub_id + "' year " +
                                                 std::to_string(p.year) + " outside [" +
                                                 std::to_string(year_min_) + ", " +
                                                 std::to_string(year_max_) + "]");
        }
        const auto parents = hierarchy_.parents_of(p.micro_id);
        if (!parents) {
            throw ConsistencyError(p.pub_id, "publication '" + p.pub_id +
                                                 "' has micro_id " +
                                                 std::to_string(p.micro_id) +
                                                 " absent from the hierarchy");
        }
        if (parents->meso != p.meso_id || parents->macro != p.macro_id) {
            throw ConsistencyError(
                p.pub_id, "publication '" + p.pub_id + "' has (micro, meso, macro) = (" +
                              std::to_string(p.micro_id) + ", " + std::to_string(p.meso_id) +
                              ", " + std::to_string(p.macro_id) + ") but hierarchy maps micro " +
                              std::to_string(p.micro_id) + " to (" +
                              std::to_string(parents->meso) + ", " +
                              std::to_string(parents->macro) + ")");
        }
    }
}

void Corpus::build_adjacency(std::vector<std::uint64_t>& packed) {
    const std::size_t n = pubs_.size();
    ref_offsets_.assign(n + 1, 0);
    citer_offsets_.assign(n + 1, 0);
    ref_targets_.resize(packed.size());
    citer_sources_.resize(packed.size());

    for (std::uint64_t e : packed) {
        ++ref_offsets_[(e >> 32) + 1];
        ++citer_offsets_[(e & 0xffffffffu) + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        ref_offsets_[i + 1] += ref_offsets_[i];
        citer_offsets_[i + 1] += citer_offsets_[i];
    }
    // packed is sorted by (citing, cited): the reference lists come out
    // sorted, and each citer list is filled in ascending citing order.
    std::vector<std::uint64_t> fill(citer_offsets_.begin(), citer_offsets_.end() - 1);
    for (std::size_t k = 0; k < packed.size(); ++k) {
        const auto citing = static_cast<PubIndex>(packed[k] >> 32);
        const auto cited = static_cast<PubIndex>(packed[k] & 0xffffffffu);
        ref_targets_[k] = cited;
        citer_sources_[fill[cited]++] = citing;
    }
    packed.clear();
    packed.shrink_to_fit();
}

Corpus Corpus::build(std::vector<PublicationRecord> pubs,
                     const std::vector<std::pair<std::string, std::string>>& edges,
                     ClusterHierarchy hierarchy, const LoadOptions& opts) {
    Corpus c;
    c.pubs_ = std::move(pubs);
    c.hierarchy_ = std::move(hierarchy);
    c.index_publications();
    c.validate_publications(opts);
    EdgeAccumulator acc(c, c.report_);
    for (const auto& [a, b] : edges) acc.add(a, b);
    auto packed = acc.take();
    c.build_adjacency(packed);
    return c;
}

Corpus Corpus::build_indexed(std::vector<PublicationRecord> pubs, std::vector<CitationEdge> edges,
                             ClusterHierarchy hierarchy, const LoadOptions& opts) {
    Corpus c;
    c.pubs_ = std::move(pubs);
    c.hierarchy_ = std::move(hierarchy);
    c.index_publications();
    c.validate_publications(opts);
    std::vector<std::uint64_t> packed;
    packed.reserve(edges.size());
    for (const auto& e : edges) {
        if (e.citing >= c.pubs_.size() || e.cited >= c.pubs_.size()) {
            ++c.report_.edges_dangling;
        } else if (e.citing == e.cited) {
            ++c.report_.edges_self;
        } else {
            packed.push_back(pack(e.citing, e.cited));
        }
    }
    edges.clear();
    edges.shrink_to_fit();
    std::sort(packed.begin(), packed.end());
    const auto before = packed.size();
    packed.erase(std::unique(packed.begin(), packed.end()), packed.end());
    c.report_.edges_duplicate = before - packed.size();
    c.report_.edges_accepted = packed.size();
    c.build_adjacency(packed);
    return c;
}

Corpus load_corpus(const std::string& pub_path, const std::string& edge_path,
                   const std::string& hierarchy_path, const LoadOptions& opts) {
    Corpus c;
    std::vector<std::string_view> f;
    std::string_view line;

    {
        const std::string text = tsv::read_file(hierarchy_path);
        tsv::LineReader reader(text);
        expect_header(reader, hierarchy_path, kHierarchyHeader);
        while (reader.next(line)) {
            if (line.empty()) continue;
            tsv::split(line, f);
            const auto ln = reader.line_number();
            if (f.size() != 3) {
                throw FormatError(hierarchy_path, ln,
                                  "expected 3 columns, found " + std::to_string(f.size()));
            }
            c.hierarchy_.add(parse_cluster(f[0], hierarchy_path, ln, "micro_id"),
                             parse_cluster(f[1], hierarchy_path, ln, "meso_id"),
                             parse_cluster(f[2], hierarchy_path, ln, "macro_id"));
        }
    }

    {
        const std::string text = tsv::read_file(pub_path);
        tsv::LineReader reader(text);
        expect_header(reader, pub_path, kPubHeader);
        std::vector<std::string_view> units;
        while (reader.next(line)) {
            if (line.empty()) continue;
            tsv::split(line, f);
            const auto ln = reader.line_number();
            if (f.size() != 7) {
                throw FormatError(pub_path, ln,
                                  "expected 7 columns, found " + std::to_string(f.size()));
            }
            PublicationRecord r;
            if (f[0].empty()) throw FormatError(pub_path, ln, "empty pub_id");
            r.pub_id = std::string(f[0]);
            std::int64_t year = 0;
            if (!tsv::parse_int(f[1], year) || year < -100000 || year > 100000) {
                throw FormatError(pub_path, ln, "non-integer year '" + std::string(f[1]) + "'");
            }
            r.year = static_cast<int>(year);
            const auto dt = parse_doc_type(f[2]);
            if (!dt) {
                throw FormatError(pub_path, ln, "unknown doc_type '" + std::string(f[2]) +
                                                    "' (expected article|review|other)");
            }
            r.doc_type = *dt;
            r.micro_id = parse_cluster(f[3], pub_path, ln, "micro_id");
            r.meso_id = parse_cluster(f[4], pub_path, ln, "meso_id");
            r.macro_id = parse_cluster(f[5], pub_path, ln, "macro_id");
            if (!f[6].empty()) {
                tsv::split(f[6], units, ';');
                for (auto u : units) {
                    if (!u.empty() && !r.has_unit(u)) r.unit_ids.emplace_back(u);
                }
            }
            c.pubs_.push_back(std::move(r));
        }
        c.index_publications();
        c.validate_publications(opts);
    }

    {
        const std::string text = tsv::read_file(edge_path);
        tsv::LineReader reader(text);
        expect_header(reader, edge_path, kEdgeHeader);
        EdgeAccumulator acc(c, c.report_);
        while (reader.next(line)) {
            if (line.empty()) continue;
            const auto tab = line.find('\t');
            if (tab == std::string_view::npos ||
                line.find('\t', tab + 1) != std::string_view::npos) {
                throw FormatError(edge_path, reader.line_number(), "expected 2 columns");
            }
            acc.add(line.substr(0, tab), line.substr(tab + 1));
        }
        auto packed = acc.take();
        c.build_adjacency(packed);
    }
    return c;
}

void write_corpus(const Corpus& corpus, const std::string& pub_path,
                  const std::string& edge_path, const std::string& hierarchy_path) {
    {
        std::ofstream out(hierarchy_path, std::ios::binary);
        out << "micro_id\tmeso_id\tmacro_id\n";
        for (const auto& [micro, parents] : corpus.hierarchy().micro_map()) {
            out << micro << '\t' << parents.meso << '\t' << parents.macro << '\n';
        }
        if (!out) throw std::runtime_error("failed writing " + hierarchy_path);
    }
    {
        std::ofstream out(pub_path, std::ios::binary);
        out << "pub_id\tyear\tdoc_type\tmicro_id\tmeso_id\tmacro_id\tunit_ids\n";
        for (const auto& p : corpus.publications()) {
            out << p.pub_id << '\t' << p.year << '\t' << to_string(p.doc_type) << '\t'
                << p.micro_id << '\t' << p.meso_id << '\t' << p.macro_id << '\t';
            for (std::size_t i = 0; i < p.unit_ids.size(); ++i) {
                out << (i ? ";" : "") << p.unit_ids[i];
            }
            out << '\n';
        }
        if (!out) throw std::runtime_error("failed writing " + pub_path);
    }
    {
        std::ofstream out(edge_path, std::ios::binary);
        out << "citing_id\tcited_id\n";
        for (PubIndex i = 0; i < corpus.size(); ++i) {
            for (PubIndex j : corpus.references(i)) {
                out << corpus.pub(i).pub_id << '\t' << corpus.pub(j).pub_id << '\n';
            }
        }
        if (!out) throw std::runtime_error("failed writing " + edge_path);
    }
}

CitationCounts citation_counts(const Corpus& corpus) {
    CitationCounts counts(corpus.size(), 0);
    for (PubIndex i = 0; i < corpus.size(); ++i) {
        counts[i] = static_cast<std::uint32_t>(corpus.citers(i).size());
    }
    return counts;
}

} // namespace breakscan
