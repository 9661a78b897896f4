#include "breakscan/detect.hpp"

#include "breakscan/tsv.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>

namespace breakscan {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::M1: return "m1";
        case Method::M2a: return "m2a";
        case Method::M2b: return "m2b";
    }
    return "m1";
}

std::optional<Method> parse_method(std::string_view s) {
    if (s == "m1") return Method::M1;
    if (s == "m2a") return Method::M2a;
    if (s == "m2b") return Method::M2b;
    return std::nullopt;
}

bool BreakthroughSet::contains(PubIndex p) const {
    return std::binary_search(members.begin(), members.end(), p);
}

const Evidence* BreakthroughSet::evidence_of(PubIndex p) const {
    auto it = std::lower_bound(members.begin(), members.end(), p);
    if (it == members.end() || *it != p) return nullptr;
    return &evidence[static_cast<std::size_t>(it - members.begin())];
}

BreakthroughSet detect_m1(const Corpus& corpus, const CitationCounts& counts,
                          const M1Options& opts) {
    struct Best {
        std::uint32_t max = 0;
        std::vector<PubIndex> winners;
    };
    std::map<ClusterId, Best> best;
    for (PubIndex i = 0; i < corpus.size(); ++i) {
        const auto& p = corpus.pub(i);
        if (p.doc_type != DocType::Article || counts[i] == 0) continue;
        auto& b = best[p.micro_id];
        if (counts[i] > b.max) {
            b.max = counts[i];
            b.winners.clear();
        }
        if (counts[i] == b.max) b.winners.push_back(i);
    }

    std::vector<std::pair<PubIndex, Evidence>> rows;
    for (const auto& [micro, b] : best) {
        const bool tie = b.winners.size() > 1;
        for (PubIndex w : b.winners) {
            if (opts.follower_filter) {
                const auto* v = opts.follower_filter->find(w);
                if (v && !v->kept) continue;
            }
            rows.emplace_back(w, M1Evidence{micro, b.max, tie});
        }
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    BreakthroughSet set;
    set.method = Method::M1;
    for (auto& [p, e] : rows) {
        set.members.push_back(p);
        set.evidence.push_back(e);
    }
    return set;
}

BreakthroughSet detect_m2a(std::span<const PubIndex> pool, const FollowerResult& verdicts) {
    std::vector<PubIndex> sorted(pool.begin(), pool.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    BreakthroughSet set;
    set.method = Method::M2a;
    for (PubIndex p : sorted) {
        const auto* v = verdicts.find(p);
        if (v && v->kept) {
            set.members.push_back(p);
            set.evidence.push_back(M2aEvidence{v->alone_share});
        }
    }
    return set;
}

std::vector<DiffusionStat> macro_diffusion(const BreakthroughSet& m2a, const Corpus& corpus) {
    std::vector<DiffusionStat> out;
    out.reserve(m2a.size());
    std::vector<ClusterId> macros;
    for (PubIndex p : m2a.members) {
        const auto own = corpus.pub(p).macro_id;
        macros.clear();
        for (PubIndex c : corpus.citers(p)) {
            const auto m = corpus.pub(c).macro_id;
            if (m != own) macros.push_back(m);
        }
        std::sort(macros.begin(), macros.end());
        const auto distinct = static_cast<std::size_t>(
            std::unique(macros.begin(), macros.end()) - macros.begin());
        out.push_back({p, own, distinct});
    }
    return out;
}

BreakthroughSet detect_m2b(const BreakthroughSet& m2a, std::span<const DiffusionStat> diffusion,
                           const Corpus& corpus, bool strict) {
    std::map<ClusterId, std::vector<const DiffusionStat*>> groups;
    for (const auto& d : diffusion) {
        if (m2a.contains(d.pub)) groups[corpus.pub(d.pub).meso_id].push_back(&d);
    }

    std::vector<std::pair<PubIndex, Evidence>> rows;
    for (const auto& [meso, members] : groups) {
        std::size_t total = 0;
        for (const auto* d : members) total += d->external_macro_count;
        // count > mean  <=>  count * n > total
        const auto n = members.size();
        const double mean = static_cast<double>(total) / static_cast<double>(n);
        for (const auto* d : members) {
            const auto scaled = d->external_macro_count * n;
            const bool selected = strict ? scaled > total : scaled >= total;
            if (selected) rows.emplace_back(d->pub, M2bEvidence{d->external_macro_count, mean});
        }
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    BreakthroughSet set;
    set.method = Method::M2b;
    for (auto& [p, e] : rows) {
        set.members.push_back(p);
        set.evidence.push_back(e);
    }
    return set;
}

void write_breakthrough_set(std::ostream& out, const Corpus& corpus, const BreakthroughSet& set) {
    switch (set.method) {
        case Method::M1: out << "pub_id\tmethod\tmicro_id\tcitations\ttie\n"; break;
        case Method::M2a: out << "pub_id\tmethod\talone_share\n"; break;
        case Method::M2b: out << "pub_id\tmethod\texternal_macro_count\tmeso_mean\n"; break;
    }
    std::vector<std::size_t> order(set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return corpus.pub(set.members[a]).pub_id < corpus.pub(set.members[b]).pub_id;
    });
    for (std::size_t k : order) {
        out << corpus.pub(set.members[k]).pub_id << '\t' << to_string(set.method);
        std::visit(
            [&](const auto& e) {
                using E = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<E, M1Evidence>) {
                    out << '\t' << e.micro_id << '\t' << e.citations << '\t'
                        << (e.tie ? "true" : "false");
                } else if constexpr (std::is_same_v<E, M2aEvidence>) {
                    out << '\t' << tsv::format_double(e.alone_share);
                } else {
                    out << '\t' << e.external_macro_count << '\t'
                        << tsv::format_double(e.meso_mean);
                }
            },
            set.evidence[k]);
        out << '\n';
    }
}

} // namespace breakscan
