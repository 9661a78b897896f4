#include "oracles.hpp"
#include "support.hpp"

#include "breakscan/follower.hpp"

#include <doctest.h>

#include <sstream>

using namespace breakscan;
using namespace testsupport;

namespace {

// Candidates are given directly; `citers` lists, per candidate, how many
// plain papers cite it, and `extra` adds edges between indices.
struct Builder {
    RawCorpus raw;
    Builder() { raw.hierarchy.add(1, 1, 1); }
    std::size_t add(const std::string& id, DocType t = DocType::Article) {
        raw.pubs.push_back(record(id, 1, 1, 1, t));
        return raw.pubs.size() - 1;
    }
    void edge(std::size_t a, std::size_t b) { raw.edges.emplace_back(a, b); }
    // n fresh citers of `target`, returned in order
    std::vector<std::size_t> citers(std::size_t target, int n, const std::string& tag) {
        std::vector<std::size_t> out;
        for (int i = 0; i < n; ++i) {
            out.push_back(add(tag + std::to_string(i), DocType::Other));
            edge(out.back(), target);
        }
        return out;
    }
};

FollowerVerdict verdict_of(const Builder& b, std::vector<PubIndex> pool, std::size_t who,
                           FollowerSemantics s = FollowerSemantics::Union) {
    const auto corpus = b.raw.build();
    const auto pairs = find_pairs(pool, corpus);
    const auto r = filter_followers(pool, pairs, corpus, {kDefaultKeepThreshold, s});
    return *r.find(static_cast<PubIndex>(who));
}

} // namespace

TEST_CASE("candidate pool takes top-class articles only") {
    SUBCASE("article on top") {
        const auto corpus = worked_field().build();
        const auto css = css_all_fields(corpus, citation_counts(corpus));
        CHECK(candidate_pool(corpus, css) == std::vector<PubIndex>{4});
    }
    SUBCASE("review on top") {
        const auto corpus = worked_field(DocType::Review).build();
        const auto css = css_all_fields(corpus, citation_counts(corpus));
        CHECK(candidate_pool(corpus, css).empty());
    }
    SUBCASE("no citations anywhere") {
        auto raw = worked_field();
        raw.edges.clear();
        const auto corpus = raw.build();
        const auto css = css_all_fields(corpus, citation_counts(corpus));
        CHECK(candidate_pool(corpus, css).empty());
    }
}

TEST_CASE("find pairs") {
    Builder b;
    const auto x = b.add("X"), y = b.add("Y");
    std::vector<PubIndex> pool{static_cast<PubIndex>(x), static_cast<PubIndex>(y)};
    CHECK(find_pairs(pool, b.raw.build()).empty());
    b.edge(x, y);
    CHECK(find_pairs(pool, b.raw.build()) ==
          std::vector<FollowerPair>{{static_cast<PubIndex>(x), static_cast<PubIndex>(y)}});
}

TEST_CASE("follower thresholds") {
    Builder b;
    const auto b1 = b.add("B1"), b2 = b.add("B2");
    b.edge(b2, b1);
    const auto c = b.citers(b2, 10, "c");
    std::vector<PubIndex> pool{static_cast<PubIndex>(b1), static_cast<PubIndex>(b2)};

    SUBCASE("alone share exactly 0.7 is kept") {
        for (int i = 0; i < 3; ++i) b.edge(c[static_cast<std::size_t>(i)], b1);
        const auto v = verdict_of(b, pool, b2);
        CHECK(v.n_citers == 10);
        CHECK(v.n_cociters == 3);
        CHECK(v.alone_share == 0.7);
        CHECK(v.kept);
    }
    SUBCASE("0.6 is discarded") {
        for (int i = 0; i < 4; ++i) b.edge(c[static_cast<std::size_t>(i)], b1);
        const auto v = verdict_of(b, pool, b2);
        CHECK(v.alone_share == doctest::Approx(0.6));
        CHECK_FALSE(v.kept);
    }
    SUBCASE("the cited candidate has no pairs and is kept with share 1") {
        for (int i = 0; i < 4; ++i) b.edge(c[static_cast<std::size_t>(i)], b1);
        const auto v = verdict_of(b, pool, b1);
        CHECK_FALSE(v.has_pairs);
        CHECK(v.alone_share == 1.0);
        CHECK(v.kept);
    }
}

TEST_CASE("union versus per-pair semantics") {
    Builder b;
    const auto b1a = b.add("B1a"), b1b = b.add("B1b"), b2 = b.add("B2");
    b.edge(b2, b1a);
    b.edge(b2, b1b);
    const auto c = b.citers(b2, 4, "c");   // p, q, r, s
    b.edge(c[0], b1a);
    b.edge(c[1], b1b);
    std::vector<PubIndex> pool{static_cast<PubIndex>(b1a), static_cast<PubIndex>(b1b),
                               static_cast<PubIndex>(b2)};

    const auto u = verdict_of(b, pool, b2, FollowerSemantics::Union);
    CHECK(u.n_cociters == 2);
    CHECK(u.alone_share == 0.5);
    CHECK_FALSE(u.kept);

    const auto p = verdict_of(b, pool, b2, FollowerSemantics::PerPair);
    CHECK(p.n_cociters == 1);
    CHECK(p.alone_share == 0.75);
    CHECK(p.kept);
}

TEST_CASE("paired candidate without citers is kept and logged") {
    Builder b;
    const auto b1 = b.add("B1"), b2 = b.add("B2");
    b.edge(b2, b1);
    std::vector<PubIndex> pool{static_cast<PubIndex>(b1), static_cast<PubIndex>(b2)};
    const auto corpus = b.raw.build();
    const auto r = filter_followers(pool, find_pairs(pool, corpus), corpus);
    const auto* v = r.find(static_cast<PubIndex>(b2));
    REQUIRE(v);
    CHECK(v->zero_citers);
    CHECK(v->kept);
    CHECK(r.log.size() == 1);
}

TEST_CASE("discarded B1 still counts for its followers") {
    // chain C -> B -> A: B is judged against A even if C is judged against B.
    Builder b;
    const auto a = b.add("A"), bb = b.add("B"), c = b.add("C");
    b.edge(bb, a);
    b.edge(c, bb);
    const auto cb = b.citers(bb, 10, "b");
    for (auto x : cb) b.edge(x, a);
    const auto cc = b.citers(c, 10, "c");
    for (auto x : cc) b.edge(x, bb);
    std::vector<PubIndex> pool{static_cast<PubIndex>(a), static_cast<PubIndex>(bb),
                               static_cast<PubIndex>(c)};
    const auto corpus = b.raw.build();
    const auto r = filter_followers(pool, find_pairs(pool, corpus), corpus);
    CHECK_FALSE(r.find(static_cast<PubIndex>(bb))->kept);
    CHECK_FALSE(r.find(static_cast<PubIndex>(c))->kept);
    CHECK(r.kept() == std::vector<PubIndex>{static_cast<PubIndex>(a)});
}

TEST_CASE("follower filter matches set-intersection oracle") {
    std::mt19937_64 rng(17);
    std::size_t paired = 0;
    for (int t = 0; t < 40; ++t) {
        const auto raw = random_raw(rng);
        const auto corpus = raw.build();
        const auto css = css_all_fields(corpus, citation_counts(corpus));
        const auto pool = candidate_pool(corpus, css);
        const auto e = oracle::edge_set(raw);
        const auto opool = oracle::pool(raw, oracle::in_degree(raw), 3);
        REQUIRE(pool.size() == opool.size());
        CHECK(std::equal(pool.begin(), pool.end(), opool.begin()));

        const auto pairs = find_pairs(pool, corpus);
        const auto opairs = oracle::pairs(opool, e);
        REQUIRE(pairs.size() == opairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            CHECK(pairs[i].b2 == opairs[i].first);
            CHECK(pairs[i].b1 == opairs[i].second);
        }
        paired += pairs.size();

        for (bool per_pair : {false, true}) {
            const auto r = filter_followers(
                pool, pairs, corpus,
                {0.7, per_pair ? FollowerSemantics::PerPair : FollowerSemantics::Union});
            const auto o = oracle::followers(opool, opairs, e, 7, 10, per_pair);
            REQUIRE(r.verdicts.size() == o.size());
            for (const auto& v : r.verdicts) {
                const auto& w = o.at(v.pub);
                CHECK(v.n_citers == w.n_citers);
                CHECK(v.n_cociters == w.n_cociters);
                CHECK(v.kept == w.kept);
            }
        }

        // pure function of pool, pairs and edges
        const auto again = filter_followers(pool, pairs, corpus);
        const auto kept = again.kept();
        const auto rerun = filter_followers(pool, pairs, corpus);
        CHECK(rerun.kept() == kept);
    }
    CHECK(paired > 0);
}

TEST_CASE("verdict writer") {
    Builder b;
    const auto b1 = b.add("B1"), b2 = b.add("B2");
    b.edge(b2, b1);
    const auto c = b.citers(b2, 4, "c");
    b.edge(c[0], b1);
    std::vector<PubIndex> pool{static_cast<PubIndex>(b1), static_cast<PubIndex>(b2)};
    const auto corpus = b.raw.build();
    const auto r = filter_followers(pool, find_pairs(pool, corpus), corpus);
    std::ostringstream out;
    write_verdicts(out, corpus, r);
    CHECK(out.str() ==
          "pub_id\tn_citers\tn_cociters\talone_share\tkept\n"
          "B1\t2\t0\t1\ttrue\n"
          "B2\t4\t1\t0.75\ttrue\n");
}
