#include "oracles.hpp"
#include "support.hpp"

#include "breakscan/errors.hpp"
#include "breakscan/hash.hpp"
#include "breakscan/tsv.hpp"

#include <doctest.h>

using namespace breakscan;
using namespace testsupport;

namespace {

const char* kHier = "micro_id\tmeso_id\tmacro_id\n1\t1\t1\n2\t1\t1\n5\t2\t1\n";
const char* kPubHeader = "pub_id\tyear\tdoc_type\tmicro_id\tmeso_id\tmacro_id\tunit_ids\n";
const char* kEdgeHeader = "citing_id\tcited_id\n";

struct Files {
    TempDir dir{"corpus"};
    std::string pubs = dir.file("pubs.tsv");
    std::string edges = dir.file("edges.tsv");
    std::string hier = dir.file("hier.tsv");

    Files(const std::string& p, const std::string& e, const std::string& h = kHier) {
        write_text(pubs, p);
        write_text(edges, e);
        write_text(hier, h);
    }
    Corpus load(const LoadOptions& o = {}) const { return load_corpus(pubs, edges, hier, o); }
};

std::string three_pubs() {
    return std::string(kPubHeader) +
           "A\t2000\tarticle\t1\t1\t1\tU1;U2\n"
           "B\t2001\treview\t2\t1\t1\t\n"
           "C\t2002\tother\t5\t2\t1\tU1\n";
}

} // namespace

TEST_CASE("tsv helpers") {
    std::vector<std::string_view> f;
    tsv::split("a\t\tb", f);
    REQUIRE(f.size() == 3);
    CHECK(f[1].empty());

    tsv::LineReader r("x\r\ny\n\nz");
    std::string_view line;
    std::vector<std::string> lines;
    while (r.next(line)) lines.emplace_back(line);
    CHECK(lines == std::vector<std::string>{"x", "y", "", "z"});

    std::int64_t i = 0;
    CHECK(tsv::parse_int("-12", i));
    CHECK(i == -12);
    CHECK_FALSE(tsv::parse_int("12x", i));
    CHECK_FALSE(tsv::parse_int("", i));
    CHECK(tsv::format_double(0.7) == "0.7");
    CHECK(tsv::format_double(1.0 / 3.0) == "0.3333333333333333");
    CHECK(tsv::format_fixed(0.296, 2) == "0.30");
}

TEST_CASE("sha256 of known strings") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("minimal well-formed corpus loads") {
    Files f(three_pubs(), std::string(kEdgeHeader) + "A\tB\nC\tA\n");
    const auto c = f.load();
    CHECK(c.size() == 3);
    CHECK(c.n_edges() == 2);
    CHECK(c.report().publications == 3);
    CHECK(c.report().edges_accepted == 2);
    const auto a = *c.index_of("A");
    const auto b = *c.index_of("B");
    CHECK(c.pub(a).unit_ids == std::vector<std::string>{"U1", "U2"});
    CHECK(c.pub(b).doc_type == DocType::Review);
    CHECK(c.pub(b).unit_ids.empty());
    CHECK(c.cites(a, b));
    CHECK_FALSE(c.cites(b, a));
    CHECK(c.year_min() == 2000);
    CHECK(c.year_max() == 2002);
    CHECK(c.hierarchy().n_micro() == 3);
    CHECK(c.hierarchy().n_meso() == 2);
    CHECK(c.hierarchy().n_macro() == 1);
}

TEST_CASE("self, duplicate and dangling edges are tallied") {
    Files f(three_pubs(),
            std::string(kEdgeHeader) + "A\tA\nA\tB\nA\tB\nB\tZ\nQ\tA\nC\tA\n");
    const auto c = f.load();
    const auto& r = c.report();
    CHECK(r.edges_accepted == 2);
    CHECK(r.edges_self == 1);
    CHECK(r.edges_duplicate == 1);
    CHECK(r.edges_dangling == 2);
    CHECK(r.edge_lines() == 6);
    CHECK(r.to_json() ==
          R"({"publications":3,"edges_accepted":2,"edges_self":1,"edges_duplicate":1,"edges_dangling":2})");
}

TEST_CASE("hierarchy contradiction names the publication") {
    Files f(std::string(kPubHeader) + "A\t2000\tarticle\t1\t1\t1\t\nP\t2000\tarticle\t5\t1\t1\t\n",
            kEdgeHeader);
    try {
        f.load();
        FAIL("expected ConsistencyError");
    } catch (const ConsistencyError& e) {
        CHECK(e.pub_id() == "P");
    }
}

TEST_CASE("ingestion errors") {
    SUBCASE("missing header") {
        Files f("A\t2000\tarticle\t1\t1\t1\t\n", kEdgeHeader);
        CHECK_THROWS_AS(f.load(), FormatError);
    }
    SUBCASE("wrong column count carries line number") {
        Files f(std::string(kPubHeader) + "A\t2000\tarticle\t1\t1\t1\t\nB\t2000\tarticle\t1\t1\n",
                kEdgeHeader);
        try {
            f.load();
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("non-integer year") {
        Files f(std::string(kPubHeader) + "A\t20x0\tarticle\t1\t1\t1\t\n", kEdgeHeader);
        CHECK_THROWS_AS(f.load(), FormatError);
    }
    SUBCASE("unknown doc type") {
        Files f(std::string(kPubHeader) + "A\t2000\tletter\t1\t1\t1\t\n", kEdgeHeader);
        CHECK_THROWS_AS(f.load(), FormatError);
    }
    SUBCASE("duplicate pub id") {
        Files f(std::string(kPubHeader) + "A\t2000\tarticle\t1\t1\t1\t\nA\t2001\tarticle\t1\t1\t1\t\n",
                kEdgeHeader);
        CHECK_THROWS_AS(f.load(), ConsistencyError);
    }
    SUBCASE("unknown micro id") {
        Files f(std::string(kPubHeader) + "A\t2000\tarticle\t9\t1\t1\t\n", kEdgeHeader);
        CHECK_THROWS_AS(f.load(), ConsistencyError);
    }
    SUBCASE("year outside declared window") {
        Files f(three_pubs(), kEdgeHeader);
        LoadOptions o;
        o.year_min = 2001;
        CHECK_THROWS_AS(f.load(o), ConsistencyError);
    }
    SUBCASE("meso mapped to two macros") {
        Files f(three_pubs(), kEdgeHeader, "micro_id\tmeso_id\tmacro_id\n1\t1\t1\n2\t1\t2\n");
        CHECK_THROWS_AS(f.load(), ConsistencyError);
    }
    SUBCASE("missing file") {
        Files f(three_pubs(), kEdgeHeader);
        CHECK_THROWS(load_corpus(f.dir.file("nope.tsv"), f.edges, f.hier));
    }
}

TEST_CASE("citation counts") {
    SUBCASE("A->B, C->B, A->C") {
        RawCorpus raw;
        raw.hierarchy.add(1, 1, 1);
        for (const char* id : {"A", "B", "C"}) raw.pubs.push_back(record(id, 1, 1, 1));
        raw.edges = {{0, 1}, {2, 1}, {0, 2}};
        const auto counts = citation_counts(raw.build());
        CHECK(counts == CitationCounts{0, 2, 1});
    }
    SUBCASE("no edges") {
        auto raw = worked_field();
        raw.edges.clear();
        const auto counts = citation_counts(raw.build());
        CHECK(std::all_of(counts.begin(), counts.end(), [](auto c) { return c == 0; }));
    }
    SUBCASE("random corpora match in-degree oracle") {
        std::mt19937_64 rng(7);
        for (int t = 0; t < 20; ++t) {
            RandomCorpusShape s;
            s.n_pubs = 50;
            s.n_edges = 300;
            const auto raw = random_raw(rng, s);
            const auto corpus = raw.build();
            const auto counts = citation_counts(corpus);
            const auto expect = oracle::in_degree(raw);
            std::int64_t total = 0;
            for (std::size_t i = 0; i < expect.size(); ++i) {
                CHECK(counts[i] == expect[i]);
                total += counts[i];
            }
            CHECK(static_cast<std::size_t>(total) == corpus.n_edges());
            CHECK(corpus.n_edges() == oracle::edge_set(raw).size());
        }
    }
}

TEST_CASE("adjacency is independent of edge order") {
    std::mt19937_64 rng(11);
    auto raw = random_raw(rng);
    const auto a = raw.build();
    std::shuffle(raw.edges.begin(), raw.edges.end(), rng);
    const auto b = raw.build();
    CHECK(a.same_content(b));
    for (PubIndex i = 0; i < a.size(); ++i) {
        const auto ca = a.citers(i);
        CHECK(std::is_sorted(ca.begin(), ca.end()));
        CHECK(std::adjacent_find(ca.begin(), ca.end()) == ca.end());
    }
}

TEST_CASE("write then load is an identity") {
    std::mt19937_64 rng(3);
    const auto raw = random_raw(rng);
    const auto corpus = raw.build();
    TempDir dir("roundtrip");
    write_corpus(corpus, dir.file("p.tsv"), dir.file("e.tsv"), dir.file("h.tsv"));
    const auto back = load_corpus(dir.file("p.tsv"), dir.file("e.tsv"), dir.file("h.tsv"));
    CHECK(back.same_content(corpus));
    CHECK(back.report().edges_accepted == corpus.n_edges());

    write_corpus(back, dir.file("p2.tsv"), dir.file("e2.tsv"), dir.file("h2.tsv"));
    CHECK(read_text(dir.file("p.tsv")) == read_text(dir.file("p2.tsv")));
    CHECK(read_text(dir.file("e.tsv")) == read_text(dir.file("e2.tsv")));
}
