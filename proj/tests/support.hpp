#pragma once
// Fixtures shared by the unit and acceptance tests.

#include "breakscan/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace testsupport {

using namespace breakscan;

// A corpus as plain data: records in index order, raw edges by index
// (self and duplicate edges allowed), and the hierarchy.
struct RawCorpus {
    std::vector<PublicationRecord> pubs;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    ClusterHierarchy hierarchy;

    Corpus build() const {
        std::vector<CitationEdge> e;
        e.reserve(edges.size());
        for (auto [a, b] : edges) {
            e.push_back({static_cast<PubIndex>(a), static_cast<PubIndex>(b)});
        }
        return Corpus::build_indexed(pubs, std::move(e), hierarchy);
    }
};

inline PublicationRecord record(std::string id, ClusterId micro, ClusterId meso, ClusterId macro,
                                DocType t = DocType::Article, int year = 2000,
                                std::vector<std::string> units = {}) {
    PublicationRecord p;
    p.pub_id = std::move(id);
    p.year = year;
    p.doc_type = t;
    p.micro_id = micro;
    p.meso_id = meso;
    p.macro_id = macro;
    p.unit_ids = std::move(units);
    return p;
}

struct RandomCorpusShape {
    std::size_t n_pubs = 200;
    std::size_t n_edges = 2000;
    int n_macro = 2;
    int meso_per_macro = 2;
    int micro_per_meso = 2;
    double review_share = 0.1;
    double other_share = 0.05;
    double weight_sigma = 1.5;   // heavy-tailed attractiveness of cited papers
};

// Random corpus with skewed in-degrees so that outstanding papers exist and
// cite each other. Edges may include self loops and repeats.
inline RawCorpus random_raw(std::mt19937_64& rng, const RandomCorpusShape& s = {}) {
    RawCorpus raw;
    ClusterId micro = 0;
    for (int a = 1; a <= s.n_macro; ++a) {
        for (int m = 0; m < s.meso_per_macro; ++m) {
            const ClusterId meso = (a - 1) * s.meso_per_macro + m + 1;
            for (int k = 0; k < s.micro_per_meso; ++k) raw.hierarchy.add(++micro, meso, a);
        }
    }
    const auto n_micro = static_cast<ClusterId>(micro);
    std::uniform_int_distribution<ClusterId> pick_micro(1, n_micro);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> pick_year(2000, 2005);
    std::lognormal_distribution<double> weight(0.0, s.weight_sigma);

    std::vector<double> w;
    for (std::size_t i = 0; i < s.n_pubs; ++i) {
        const ClusterId mi = pick_micro(rng);
        const auto parents = *raw.hierarchy.parents_of(mi);
        const double r = u(rng);
        const DocType t = r < s.other_share                    ? DocType::Other
                          : r < s.other_share + s.review_share ? DocType::Review
                                                               : DocType::Article;
        std::vector<std::string> units;
        if (u(rng) < 0.3) units.push_back("U1");
        if (u(rng) < 0.3) units.push_back("U2");
        raw.pubs.push_back(record("p" + std::to_string(i), mi, parents.meso, parents.macro, t,
                                  pick_year(rng), units));
        w.push_back(weight(rng));
    }
    std::discrete_distribution<std::size_t> cited(w.begin(), w.end());
    std::uniform_int_distribution<std::size_t> citing(0, s.n_pubs - 1);
    for (std::size_t e = 0; e < s.n_edges; ++e) raw.edges.emplace_back(citing(rng), cited(rng));
    return raw;
}

// The five-member worked field {0,0,0,4,16} as a corpus: A..E in one meso
// field, cited by "other" documents in the same field.
inline RawCorpus worked_field(DocType e_type = DocType::Article) {
    RawCorpus raw;
    raw.hierarchy.add(1, 1, 1);
    for (const char* id : {"A", "B", "C", "D"}) raw.pubs.push_back(record(id, 1, 1, 1));
    raw.pubs.push_back(record("E", 1, 1, 1, e_type));
    for (int i = 0; i < 16; ++i) {
        raw.pubs.push_back(record("x" + std::to_string(i), 1, 1, 1, DocType::Other));
        raw.edges.emplace_back(raw.pubs.size() - 1, 4);
        if (i < 4) raw.edges.emplace_back(raw.pubs.size() - 1, 3);
    }
    return raw;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("breakscan_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace testsupport
