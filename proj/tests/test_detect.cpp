#include "oracles.hpp"
#include "support.hpp"

#include "breakscan/detect.hpp"

#include <doctest.h>

#include <sstream>

using namespace breakscan;
using namespace testsupport;

namespace {

// Papers with prescribed citation counts, each cited by fresh "other"
// documents from macro `from_macro`.
struct Field {
    RawCorpus raw;
    std::size_t citer_no = 0;

    std::size_t add(const std::string& id, int count, ClusterId micro = 1, ClusterId meso = 1,
                    ClusterId macro = 1, DocType t = DocType::Article) {
        raw.pubs.push_back(record(id, micro, meso, macro, t));
        const auto p = raw.pubs.size() - 1;
        for (int i = 0; i < count; ++i) cite_from(p, macro);
        return p;
    }
    void cite_from(std::size_t p, ClusterId macro) {
        // micro id == macro id for citer clusters
        raw.pubs.push_back(record("z" + std::to_string(citer_no++), 100 + macro, 100 + macro,
                                  macro, DocType::Other));
        raw.edges.emplace_back(raw.pubs.size() - 1, p);
    }
    void hierarchy(std::initializer_list<std::tuple<ClusterId, ClusterId, ClusterId>> rows,
                   int n_macro) {
        for (auto [a, b, c] : rows) raw.hierarchy.add(a, b, c);
        for (int m = 1; m <= n_macro; ++m) raw.hierarchy.add(100 + m, 100 + m, m);
    }
};

std::vector<std::string> ids(const Corpus& c, const BreakthroughSet& s) {
    std::vector<std::string> out;
    for (auto p : s.members) out.push_back(c.pub(p).pub_id);
    return out;
}

} // namespace

TEST_CASE("method names") {
    CHECK(to_string(Method::M2b) == "m2b");
    CHECK(parse_method("m2a") == Method::M2a);
    CHECK_FALSE(parse_method("M1").has_value());
}

TEST_CASE("m1") {
    SUBCASE("ties are all selected") {
        Field f;
        f.hierarchy({{1, 1, 1}}, 1);
        f.add("A", 5);
        f.add("B", 5);
        f.add("C", 2);
        const auto c = f.raw.build();
        const auto s = detect_m1(c, citation_counts(c));
        CHECK(ids(c, s) == std::vector<std::string>{"A", "B"});
        CHECK(std::get<M1Evidence>(*s.evidence_of(0)).tie);
        CHECK(std::get<M1Evidence>(*s.evidence_of(0)).citations == 5);
    }
    SUBCASE("reviews are skipped") {
        Field f;
        f.hierarchy({{1, 1, 1}}, 1);
        f.add("R", 9, 1, 1, 1, DocType::Review);
        f.add("A", 7);
        const auto c = f.raw.build();
        const auto s = detect_m1(c, citation_counts(c));
        CHECK(ids(c, s) == std::vector<std::string>{"A"});
        CHECK_FALSE(std::get<M1Evidence>(s.evidence[0]).tie);
    }
    SUBCASE("uncited field contributes nothing") {
        Field f;
        f.hierarchy({{1, 1, 1}}, 1);
        f.add("A", 0);
        f.add("B", 0);
        const auto c = f.raw.build();
        CHECK(detect_m1(c, citation_counts(c)).empty());
    }
}

TEST_CASE("m2a") {
    Field f;
    f.hierarchy({{1, 1, 1}}, 1);
    f.add("A", 1);
    f.add("B", 1);
    f.add("C", 1);
    const auto c = f.raw.build();
    FollowerResult r;
    r.verdicts = {{0, 1, 0, 1.0, true, false, false},
                  {1, 1, 1, 0.0, false, true, false},
                  {2, 1, 0, 1.0, true, true, false}};
    std::vector<PubIndex> pool{0, 1, 2};
    const auto s = detect_m2a(pool, r);
    CHECK(s.members == std::vector<PubIndex>{0, 2});
    CHECK(std::get<M2aEvidence>(s.evidence[1]).alone_share == 1.0);
    CHECK(detect_m2a({}, FollowerResult{}).empty());
}

TEST_CASE("macro diffusion") {
    Field f;
    f.hierarchy({{1, 1, 1}}, 3);
    const auto p = f.add("P", 0);
    const auto q = f.add("Q", 0);
    for (ClusterId m : {1, 1, 2, 3}) f.cite_from(p, m);
    f.cite_from(q, 1);
    const auto c = f.raw.build();
    BreakthroughSet m2a;
    m2a.method = Method::M2a;
    m2a.members = {static_cast<PubIndex>(p), static_cast<PubIndex>(q)};
    m2a.evidence = {M2aEvidence{1.0}, M2aEvidence{1.0}};
    const auto d = macro_diffusion(m2a, c);
    REQUIRE(d.size() == 2);
    CHECK(d[0].external_macro_count == 2);
    CHECK(d[0].own_macro == 1);
    CHECK(d[1].external_macro_count == 0);
}

TEST_CASE("m2b strict comparison with the meso mean") {
    auto run = [](std::vector<int> external, bool strict = true) {
        Field f;
        f.hierarchy({{1, 1, 1}}, 6);
        BreakthroughSet m2a;
        m2a.method = Method::M2a;
        for (std::size_t i = 0; i < external.size(); ++i) {
            const auto p = f.add("P" + std::to_string(i), 0);
            for (int m = 2; m < 2 + external[i]; ++m) f.cite_from(p, m);
            m2a.members.push_back(static_cast<PubIndex>(p));
            m2a.evidence.push_back(M2aEvidence{1.0});
        }
        const auto c = f.raw.build();
        const auto d = macro_diffusion(m2a, c);
        return ids(c, detect_m2b(m2a, d, c, strict));
    };
    CHECK(run({4, 2, 0}) == std::vector<std::string>{"P0"});
    CHECK(run({3, 3, 3}).empty());
    CHECK(run({5}).empty());
    CHECK(run({5}, false) == std::vector<std::string>{"P0"});
    CHECK(run({4, 2, 0}, false) == std::vector<std::string>{"P0", "P1"});
}

TEST_CASE("detectors match oracles on random corpora") {
    std::mt19937_64 rng(31);
    std::size_t ties = 0;
    for (int t = 0; t < 40; ++t) {
        RandomCorpusShape shape;
        shape.weight_sigma = t % 2 ? 1.5 : 0.3;   // low skew produces ties
        const auto raw = random_raw(rng, shape);
        const auto corpus = raw.build();
        const auto counts = citation_counts(corpus);
        const auto ocounts = oracle::in_degree(raw);
        const auto e = oracle::edge_set(raw);

        const auto m1 = detect_m1(corpus, counts);
        const auto om1 = oracle::m1(raw, ocounts);
        REQUIRE(m1.size() == om1.size());
        for (std::size_t i = 0; i < om1.size(); ++i) {
            CHECK(m1.members[i] == om1[i].pub);
            const auto& ev = std::get<M1Evidence>(m1.evidence[i]);
            CHECK(ev.citations == om1[i].count);
            CHECK(ev.tie == om1[i].tie);
            ties += om1[i].tie ? 1 : 0;
        }

        const auto css = css_all_fields(corpus, counts);
        const auto pool = candidate_pool(corpus, css);
        const auto pairs = find_pairs(pool, corpus);
        const auto fr = filter_followers(pool, pairs, corpus);
        const auto m2a = detect_m2a(pool, fr);
        std::vector<std::size_t> om2a;
        for (const auto& [p, v] : oracle::followers(oracle::pool(raw, ocounts, 3),
                                                    oracle::pairs(oracle::pool(raw, ocounts, 3), e),
                                                    e, 7, 10, false)) {
            if (v.kept) om2a.push_back(p);
        }
        REQUIRE(m2a.size() == om2a.size());
        CHECK(std::equal(m2a.members.begin(), m2a.members.end(), om2a.begin()));

        const auto diff = macro_diffusion(m2a, corpus);
        for (const auto& d : diff) {
            CHECK(d.external_macro_count == oracle::external_macros(raw, e, d.pub));
        }
        for (bool strict : {true, false}) {
            const auto m2b = detect_m2b(m2a, diff, corpus, strict);
            const auto om2b = oracle::m2b(raw, e, om2a, strict);
            REQUIRE(m2b.size() == om2b.size());
            CHECK(std::equal(m2b.members.begin(), m2b.members.end(), om2b.begin()));
            for (auto p : m2b.members) CHECK(m2a.contains(p));
        }
    }
    CHECK(ties > 0);
}

TEST_CASE("m1 composed with the follower filter") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 10; ++t) {
        const auto raw = random_raw(rng);
        const auto corpus = raw.build();
        const auto counts = citation_counts(corpus);
        const auto pool = candidate_pool(corpus, css_all_fields(corpus, counts));
        const auto fr = filter_followers(pool, find_pairs(pool, corpus), corpus);
        const auto plain = detect_m1(corpus, counts);
        M1Options o;
        o.follower_filter = &fr;
        const auto composed = detect_m1(corpus, counts, o);
        for (auto p : plain.members) {
            const auto* v = fr.find(p);
            CHECK(composed.contains(p) == (v == nullptr || v->kept));
        }
        CHECK(composed.size() <= plain.size());
    }
}

TEST_CASE("breakthrough set writer") {
    Field f;
    f.hierarchy({{7, 1, 1}}, 1);
    f.add("A", 3, 7);
    const auto c = f.raw.build();
    std::ostringstream out;
    write_breakthrough_set(out, c, detect_m1(c, citation_counts(c)));
    CHECK(out.str() == "pub_id\tmethod\tmicro_id\tcitations\ttie\nA\tm1\t7\t3\tfalse\n");

    std::ostringstream empty;
    BreakthroughSet none;
    none.method = Method::M2b;
    write_breakthrough_set(empty, c, none);
    CHECK(empty.str() == "pub_id\tmethod\texternal_macro_count\tmeso_mean\n");
}
