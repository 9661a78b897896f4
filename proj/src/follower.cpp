#include "breakscan/follower.hpp"

#include "breakscan/tsv.hpp"

#include <algorithm>
#include <ostream>

namespace breakscan {

std::string_view to_string(FollowerSemantics s) {
    return s == FollowerSemantics::Union ? "union" : "per_pair";
}

std::optional<FollowerSemantics> parse_follower_semantics(std::string_view s) {
    if (s == "union") return FollowerSemantics::Union;
    if (s == "per_pair") return FollowerSemantics::PerPair;
    return std::nullopt;
}

std::vector<PubIndex> candidate_pool(const Corpus& corpus, const CssResult& css) {
    const auto top = css.top_class();
    std::vector<PubIndex> pool;
    for (PubIndex i = 0; i < corpus.size(); ++i) {
        if (corpus.pub(i).doc_type == DocType::Article && css.class_of[i] == top) {
            pool.push_back(i);
        }
    }
    return pool;
}

std::vector<FollowerPair> find_pairs(std::span<const PubIndex> pool, const Corpus& corpus) {
    std::vector<char> in_pool(corpus.size(), 0);
    for (PubIndex p : pool) in_pool[p] = 1;
    std::vector<FollowerPair> pairs;
    for (PubIndex b2 : pool) {
        for (PubIndex b1 : corpus.references(b2)) {
            if (in_pool[b1]) pairs.push_back({b2, b1});
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

const FollowerVerdict* FollowerResult::find(PubIndex pub) const {
    auto it = std::lower_bound(verdicts.begin(), verdicts.end(), pub,
                               [](const FollowerVerdict& v, PubIndex p) { return v.pub < p; });
    return it != verdicts.end() && it->pub == pub ? &*it : nullptr;
}

std::vector<PubIndex> FollowerResult::kept() const {
    std::vector<PubIndex> out;
    for (const auto& v : verdicts) {
        if (v.kept) out.push_back(v.pub);
    }
    return out;
}

FollowerResult filter_followers(std::span<const PubIndex> pool,
                                std::span<const FollowerPair> pairs, const Corpus& corpus,
                                const FollowerConfig& config) {
    std::vector<FollowerPair> sorted(pairs.begin(), pairs.end());
    std::sort(sorted.begin(), sorted.end());

    FollowerResult result;
    result.verdicts.reserve(pool.size());
    std::vector<char> mark;

    for (PubIndex b2 : pool) {
        FollowerVerdict v;
        v.pub = b2;
        const auto citers = corpus.citers(b2);
        v.n_citers = citers.size();

        auto lo = std::lower_bound(sorted.begin(), sorted.end(), FollowerPair{b2, 0});
        auto hi = lo;
        while (hi != sorted.end() && hi->b2 == b2) ++hi;
        v.has_pairs = lo != hi;

        if (!v.has_pairs) {
            result.verdicts.push_back(v);
            continue;
        }
        if (citers.empty()) {
            v.zero_citers = true;
            result.log.push_back("follower: candidate '" + corpus.pub(b2).pub_id +
                                 "' cites another candidate but has no citers; kept");
            result.verdicts.push_back(v);
            continue;
        }

        if (config.semantics == FollowerSemantics::Union) {
            mark.assign(citers.size(), 0);
            for (auto it = lo; it != hi; ++it) {
                const auto b1_citers = corpus.citers(it->b1);
                // Both citer lists are ascending.
                std::size_t i = 0, j = 0;
                while (i < citers.size() && j < b1_citers.size()) {
                    if (citers[i] < b1_citers[j]) {
                        ++i;
                    } else if (b1_citers[j] < citers[i]) {
                        ++j;
                    } else {
                        mark[i] = 1;
                        ++i;
                        ++j;
                    }
                }
            }
            v.n_cociters = static_cast<std::size_t>(std::count(mark.begin(), mark.end(), 1));
        } else {
            std::size_t worst = 0;
            for (auto it = lo; it != hi; ++it) {
                const auto b1_citers = corpus.citers(it->b1);
                std::size_t shared = 0, i = 0, j = 0;
                while (i < citers.size() && j < b1_citers.size()) {
                    if (citers[i] < b1_citers[j]) {
                        ++i;
                    } else if (b1_citers[j] < citers[i]) {
                        ++j;
                    } else {
                        ++shared;
                        ++i;
                        ++j;
                    }
                }
                worst = std::max(worst, shared);
            }
            v.n_cociters = worst;
        }
        v.alone_share = static_cast<double>(v.n_citers - v.n_cociters) /
                        static_cast<double>(v.n_citers);
        v.kept = v.alone_share >= config.keep_threshold;
        result.verdicts.push_back(v);
    }
    std::sort(result.verdicts.begin(), result.verdicts.end(),
              [](const FollowerVerdict& a, const FollowerVerdict& b) { return a.pub < b.pub; });
    return result;
}

void write_verdicts(std::ostream& out, const Corpus& corpus, const FollowerResult& result) {
    std::vector<const FollowerVerdict*> rows;
    for (const auto& v : result.verdicts) rows.push_back(&v);
    std::sort(rows.begin(), rows.end(), [&](const auto* a, const auto* b) {
        return corpus.pub(a->pub).pub_id < corpus.pub(b->pub).pub_id;
    });
    out << "pub_id\tn_citers\tn_cociters\talone_share\tkept\n";
    for (const auto* v : rows) {
        out << corpus.pub(v->pub).pub_id << '\t' << v->n_citers << '\t' << v->n_cociters << '\t'
            << tsv::format_double(v->alone_share) << '\t' << (v->kept ? "true" : "false")
            << '\n';
    }
}

} // namespace breakscan
