#include "breakscan/portfolio.hpp"

#include "breakscan/tsv.hpp"

#include <algorithm>
#include <json.hpp>
#include <ostream>
#include <set>

namespace breakscan {

ReferenceSet ReferenceSet::whole(const Corpus& corpus) {
    ReferenceSet r;
    r.member_.assign(corpus.size(), 1);
    return r;
}

ReferenceSet ReferenceSet::from_ids(const Corpus& corpus, std::span<const std::string> ids,
                                    std::size_t* unknown) {
    ReferenceSet r;
    r.member_.assign(corpus.size(), 0);
    std::size_t missing = 0;
    for (const auto& id : ids) {
        if (auto i = corpus.index_of(id)) {
            r.member_[*i] = 1;
        } else {
            ++missing;
        }
    }
    if (unknown) *unknown = missing;
    return r;
}

std::vector<double> top_decile_scores(const Corpus& corpus, const CitationCounts& counts) {
    std::map<std::pair<ClusterId, int>, std::vector<PubIndex>> strata;
    for (PubIndex i = 0; i < corpus.size(); ++i) {
        const auto& p = corpus.pub(i);
        if (is_eligible(p.doc_type)) strata[{p.meso_id, p.year}].push_back(i);
    }

    std::vector<double> scores(corpus.size(), 0.0);
    for (auto& [key, pubs] : strata) {
        std::sort(pubs.begin(), pubs.end(),
                  [&](PubIndex a, PubIndex b) { return counts[a] > counts[b]; });
        const double cut = static_cast<double>(pubs.size()) / 10.0;
        std::size_t a = 0;
        while (a < pubs.size()) {
            std::size_t b = a;
            while (b < pubs.size() && counts[pubs[b]] == counts[pubs[a]]) ++b;
            // Tie group occupies ranks [a, b); it receives its overlap with [0, cut).
            const double overlap =
                std::clamp(cut - static_cast<double>(a), 0.0, static_cast<double>(b - a));
            const double each = overlap / static_cast<double>(b - a);
            for (std::size_t k = a; k < b; ++k) scores[pubs[k]] = each;
            a = b;
        }
    }
    return scores;
}

std::optional<double> pp_top10(const Corpus& corpus, std::span<const double> scores,
                               const std::string& unit_id, const ReferenceSet& reference) {
    double sum = 0.0;
    std::size_t n = 0;
    for (PubIndex i = 0; i < corpus.size(); ++i) {
        const auto& p = corpus.pub(i);
        if (!is_eligible(p.doc_type) || !reference.contains(i)) continue;
        if (!unit_id.empty() && !p.has_unit(unit_id)) continue;
        sum += scores[i];
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

std::optional<double> pp_top10(const Corpus& corpus, const CitationCounts& counts,
                               const std::string& unit_id) {
    const auto scores = top_decile_scores(corpus, counts);
    return pp_top10(corpus, scores, unit_id, ReferenceSet::whole(corpus));
}

PortfolioReport unit_report(const Corpus& corpus, std::span<const BreakthroughSet> sets,
                            const std::string& unit_id, const ReferenceSet& reference,
                            std::span<const double> top10_scores) {
    PortfolioReport r;
    r.unit_id = unit_id.empty() ? kReferenceRowId : unit_id;

    std::vector<char> in_unit(corpus.size(), 0);
    for (PubIndex i = 0; i < corpus.size(); ++i) {
        const auto& p = corpus.pub(i);
        if (!is_eligible(p.doc_type) || !reference.contains(i)) continue;
        ++r.n_reference_pubs;
        if (unit_id.empty() || p.has_unit(unit_id)) {
            in_unit[i] = 1;
            ++r.n_pubs;
        }
    }

    for (const auto& set : sets) {
        MethodShare m;
        m.method = set.method;
        for (PubIndex p : set.members) {
            if (!reference.contains(p)) continue;
            ++m.reference_breakthroughs;
            if (in_unit[p]) ++m.n_breakthroughs;
        }
        if (r.n_pubs > 0) {
            m.pct_of_own_set =
                static_cast<double>(m.n_breakthroughs) / static_cast<double>(r.n_pubs);
        }
        if (m.reference_breakthroughs > 0) {
            m.share_of_reference_breakthroughs = static_cast<double>(m.n_breakthroughs) /
                                                 static_cast<double>(m.reference_breakthroughs);
            if (r.n_pubs > 0) {
                const double pub_share =
                    static_cast<double>(r.n_pubs) / static_cast<double>(r.n_reference_pubs);
                m.baseline_ratio = *m.share_of_reference_breakthroughs / pub_share;
            }
        }
        r.methods.push_back(m);
    }

    if (!top10_scores.empty()) {
        r.pp_top10 = pp_top10(corpus, top10_scores, unit_id, reference);
    }
    return r;
}

std::map<ClusterId, std::size_t> meso_overlay(const BreakthroughSet& set, const Corpus& corpus) {
    std::map<ClusterId, std::size_t> out;
    for (PubIndex p : set.members) ++out[corpus.pub(p).meso_id];
    return out;
}

std::string overlay_json(const BreakthroughSet& set, const Corpus& corpus) {
    nlohmann::ordered_json j;
    j["method"] = std::string(to_string(set.method));
    auto counts = nlohmann::ordered_json::object();
    for (const auto& [meso, n] : meso_overlay(set, corpus)) {
        counts[std::to_string(meso)] = n;
    }
    j["counts"] = counts;
    return j.dump(2) + "\n";
}

std::vector<std::string> corpus_units(const Corpus& corpus) {
    std::set<std::string> units;
    for (const auto& p : corpus.publications()) {
        units.insert(p.unit_ids.begin(), p.unit_ids.end());
    }
    return {units.begin(), units.end()};
}

namespace {

std::string opt_fixed(const std::optional<double>& v, double scale, int digits) {
    return v ? tsv::format_fixed(*v * scale, digits) : "NA";
}

} // namespace

void write_report(std::ostream& out, std::span<const PortfolioReport> reports) {
    out << "unit_id\tmethod\tn_pubs\tn_reference_pubs\tn_breakthroughs\treference_breakthroughs"
           "\tpct_of_own_set\tpct_of_reference_breakthroughs\tbaseline_ratio\tpp_top10\n";
    for (const auto& r : reports) {
        for (const auto& m : r.methods) {
            out << r.unit_id << '\t' << to_string(m.method) << '\t' << r.n_pubs << '\t'
                << r.n_reference_pubs << '\t' << m.n_breakthroughs << '\t'
                << m.reference_breakthroughs << '\t' << opt_fixed(m.pct_of_own_set, 100.0, 2)
                << '\t' << opt_fixed(m.share_of_reference_breakthroughs, 100.0, 2) << '\t'
                << opt_fixed(m.baseline_ratio, 1.0, 2) << '\t' << opt_fixed(r.pp_top10, 1.0, 4)
                << '\n';
        }
    }
}

} // namespace breakscan
