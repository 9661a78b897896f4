#include "breakscan/css.hpp"

#include "breakscan/tsv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace breakscan {

CitationClass CssThresholds::classify(double citations) const {
    if (uniform) {
        return T1;
    }
    std::uint8_t level = 1;
    for (double m : means) {
        if (citations >= m) {
            ++level;
        } else {
            break;
        }
    }
    return CitationClass(level);
}

CssThresholds css_thresholds(std::span<const std::int64_t> counts, int depth) {
    if (counts.empty()) {
        throw std::invalid_argument("css: empty citation distribution");
    }
    if (depth < 1) {
        throw std::invalid_argument("css: depth must be >= 1");
    }
    std::vector<std::int64_t> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 0) {
        throw std::invalid_argument("css: negative citation count");
    }

    CssThresholds t;
    t.n_members = sorted.size();
    t.uniform = sorted.front() == sorted.back();

    // The truncated subsets are suffixes of the ascending order.
    std::size_t first = 0;
    for (int k = 0; k < depth; ++k) {
        std::uint64_t sum = 0;
        for (std::size_t i = first; i < sorted.size(); ++i) {
            sum += static_cast<std::uint64_t>(sorted[i]);
        }
        const double mean =
            static_cast<double>(sum) / static_cast<double>(sorted.size() - first);
        t.means.push_back(mean);
        first = static_cast<std::size_t>(
            std::lower_bound(sorted.begin() + static_cast<std::ptrdiff_t>(first), sorted.end(),
                             mean,
                             [](std::int64_t c, double m) { return static_cast<double>(c) < m; }) -
            sorted.begin());
        // The maximum always satisfies c >= mean, so the subset never empties.
    }
    return t;
}

std::size_t CssPartition::count(CitationClass c) const {
    return static_cast<std::size_t>(std::count_if(
        members.begin(), members.end(), [c](const CssMember& m) { return m.cls == c; }));
}

CssPartition css_partition(std::span<const CssInput> values, int depth, ClusterId field_id) {
    std::vector<std::int64_t> counts;
    counts.reserve(values.size());
    for (const auto& v : values) counts.push_back(v.citations);

    CssPartition p;
    p.thresholds = css_thresholds(counts, depth);
    p.thresholds.field_id = field_id;
    p.members.reserve(values.size());
    for (const auto& v : values) {
        p.members.push_back(
            {v.pub, v.citations, p.thresholds.classify(static_cast<double>(v.citations))});
    }
    return p;
}

CssResult css_all_fields(const Corpus& corpus, const CitationCounts& counts, int depth) {
    CssResult result;
    result.depth = depth;
    result.class_of.assign(corpus.size(), CitationClass{});

    std::map<ClusterId, std::vector<CssInput>> by_field;
    for (const auto& [meso, macro] : corpus.hierarchy().meso_map()) {
        by_field[meso];
    }
    for (PubIndex i = 0; i < corpus.size(); ++i) {
        const auto& p = corpus.pub(i);
        if (!is_eligible(p.doc_type)) continue;
        by_field[p.meso_id].push_back({i, static_cast<std::int64_t>(counts[i])});
    }

    for (auto& [meso, inputs] : by_field) {
        if (inputs.empty()) {
            result.log.push_back("css: meso-field " + std::to_string(meso) +
                                 " has no articles or reviews; omitted");
            continue;
        }
        auto partition = css_partition(inputs, depth, meso);
        for (const auto& m : partition.members) result.class_of[m.pub] = m.cls;
        result.fields.emplace(meso, std::move(partition));
    }
    return result;
}

namespace {

void mean_sd(const std::vector<std::vector<double>>& rows, std::size_t n_classes,
             std::vector<double>& mean, std::vector<double>& sd) {
    mean.assign(n_classes, 0.0);
    sd.assign(n_classes, 0.0);
    if (rows.empty()) return;
    const double n = static_cast<double>(rows.size());
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < n_classes; ++k) mean[k] += r[k];
    }
    for (auto& m : mean) m /= n;
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < n_classes; ++k) sd[k] += (r[k] - mean[k]) * (r[k] - mean[k]);
    }
    for (auto& s : sd) s = std::sqrt(s / n);
}

} // namespace

CssSummary css_summary(const std::map<ClusterId, CssPartition>& fields) {
    CssSummary s;
    std::size_t n_classes = 0;
    for (const auto& [id, p] : fields) {
        n_classes = std::max<std::size_t>(n_classes, p.thresholds.means.size() + 1);
    }
    std::vector<std::vector<double>> shares, cite_shares;
    for (const auto& [id, p] : fields) {
        std::vector<double> share(n_classes, 0.0), cites(n_classes, 0.0);
        double total = 0.0;
        for (const auto& m : p.members) {
            const auto k = static_cast<std::size_t>(m.cls.level() - 1);
            share[k] += 1.0;
            cites[k] += static_cast<double>(m.citations);
            total += static_cast<double>(m.citations);
        }
        for (auto& x : share) x /= static_cast<double>(p.members.size());
        shares.push_back(std::move(share));
        if (total > 0.0) {
            for (auto& x : cites) x /= total;
            cite_shares.push_back(std::move(cites));
        }
    }
    s.n_fields = shares.size();
    s.n_fields_cited = cite_shares.size();
    mean_sd(shares, n_classes, s.share_mean, s.share_sd);
    mean_sd(cite_shares, n_classes, s.citation_share_mean, s.citation_share_sd);
    return s;
}

std::string format_css_summary(const CssSummary& s) {
    std::ostringstream out;
    out << "CSS over " << s.n_fields << " fields\n";
    out << "\t";
    for (std::size_t k = 0; k < s.share_mean.size(); ++k) {
        out << "\tT" << (k + 1) << " (%)";
    }
    auto row = [&](const char* label, const std::vector<double>& m,
                   const std::vector<double>& sd) {
        out << '\n' << label;
        for (std::size_t k = 0; k < m.size(); ++k) {
            out << '\t' << tsv::format_fixed(100.0 * m[k], 1) << " ("
                << tsv::format_fixed(100.0 * sd[k], 1) << ")";
        }
    };
    row("Proportion of publications (sd)", s.share_mean, s.share_sd);
    row("Proportion of citations (sd)", s.citation_share_mean, s.citation_share_sd);
    out << '\n';
    return out.str();
}

void write_css_thresholds(std::ostream& out, const CssResult& result) {
    out << "meso_id\tn";
    for (int k = 1; k <= result.depth; ++k) out << "\tmu" << k;
    out << '\n';
    for (const auto& [meso, p] : result.fields) {
        out << meso << '\t' << p.thresholds.n_members;
        for (double m : p.thresholds.means) out << '\t' << tsv::format_double(m);
        out << '\n';
    }
}

void write_css_classes(std::ostream& out, const Corpus& corpus, const CssResult& result) {
    std::vector<PubIndex> order;
    for (PubIndex i = 0; i < corpus.size(); ++i) {
        if (result.class_of[i].classified()) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](PubIndex a, PubIndex b) {
        return corpus.pub(a).pub_id < corpus.pub(b).pub_id;
    });
    out << "pub_id\tmeso_id\tclass\n";
    for (PubIndex i : order) {
        out << corpus.pub(i).pub_id << '\t' << corpus.pub(i).meso_id << '\t'
            << result.class_of[i].name() << '\n';
    }
}

void write_css_summary(std::ostream& out, const CssSummary& s) {
    out << "class\tshare_mean\tshare_sd\tcitation_share_mean\tcitation_share_sd\n";
    for (std::size_t k = 0; k < s.share_mean.size(); ++k) {
        out << 'T' << (k + 1) << '\t' << tsv::format_fixed(s.share_mean[k], 6) << '\t'
            << tsv::format_fixed(s.share_sd[k], 6) << '\t'
            << tsv::format_fixed(s.citation_share_mean[k], 6) << '\t'
            << tsv::format_fixed(s.citation_share_sd[k], 6) << '\n';
    }
}

} // namespace breakscan
