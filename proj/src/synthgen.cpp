#include "breakscan/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>

namespace breakscan {

void SynthConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("synth: " + what); };
    if (n_macro < 1 || meso_per_macro < 1 || micro_per_meso < 1 || papers_per_micro < 1) {
        fail("cluster and paper counts must be positive");
    }
    if (n_pubs() > 0xfffffff0u) fail("too many publications");
    if (year_max < year_min) fail("year_max < year_min");
    if (!(attract_scale >= 0.0)) fail("attract_scale must be nonnegative");
    auto unit_interval = [&](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) fail(std::string(name) + " must lie in [0, 1]");
    };
    unit_interval(within_micro_rate, "within_micro_rate");
    unit_interval(cross_macro_rate, "cross_macro_rate");
    unit_interval(follower_cociter_share, "follower_cociter_share");
    unit_interval(planted_quantile, "planted_quantile");
    unit_interval(review_share, "review_share");
    unit_interval(other_share, "other_share");
    unit_interval(unit_rate, "unit_rate");
    if (review_share + other_share > 1.0) fail("review_share + other_share exceeds 1");
    if (n_planted_breakthroughs < 0 || n_planted_followers < 0 || n_units < 0) {
        fail("planted and unit counts must be nonnegative");
    }
    if (n_planted_followers > 0 && n_planted_breakthroughs == 0) {
        fail("followers requested but no planted breakthroughs to follow");
    }
    const auto per_meso = static_cast<long long>(micro_per_meso) * papers_per_micro;
    const auto n_meso = static_cast<long long>(n_macro) * meso_per_macro;
    if (n_planted_breakthroughs + n_planted_followers > n_meso * per_meso) {
        fail("more planted papers than publications");
    }
    // Each breakthrough and its followers share one meso-field.
    const long long b = std::max(n_planted_breakthroughs, 1);
    const long long per_b = 1 + (n_planted_followers + b - 1) / b;
    const long long stacked = (n_planted_breakthroughs + n_meso - 1) / n_meso;
    if (n_planted_breakthroughs > 0 && per_b * stacked > per_meso) {
        fail("planted papers do not fit in their meso-fields");
    }
}

namespace {

// Publications of one cluster level, grouped contiguously by cluster and
// ordered by year inside each group.
class YearOrderedLevel {
public:
    YearOrderedLevel(const std::vector<PublicationRecord>& pubs, std::size_t group_size)
        : group_size_(group_size), order_(pubs.size()), years_(pubs.size()) {
        std::iota(order_.begin(), order_.end(), PubIndex{0});
        for (std::size_t g = 0; g * group_size < pubs.size(); ++g) {
            auto first = order_.begin() + static_cast<std::ptrdiff_t>(g * group_size);
            std::stable_sort(first, first + static_cast<std::ptrdiff_t>(group_size),
                             [&](PubIndex a, PubIndex b) { return pubs[a].year < pubs[b].year; });
        }
        for (std::size_t k = 0; k < order_.size(); ++k) years_[k] = pubs[order_[k]].year;
    }

    // Uniform draw among the group's papers published after `year`.
    template <class Rng>
    std::optional<PubIndex> draw_later(std::size_t group, int year, Rng& rng) const {
        const auto lo = years_.begin() + static_cast<std::ptrdiff_t>(group * group_size_);
        const auto hi = lo + static_cast<std::ptrdiff_t>(group_size_);
        const auto first = std::upper_bound(lo, hi, year);
        if (first == hi) return std::nullopt;
        std::uniform_int_distribution<std::ptrdiff_t> pick(0, (hi - first) - 1);
        return order_[static_cast<std::size_t>((first - years_.begin()) + pick(rng))];
    }

private:
    std::size_t group_size_;
    std::vector<PubIndex> order_;
    std::vector<int> years_;
};

std::string make_id(std::size_t i, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "P%0*zu", width, i);
    return buf;
}

} // namespace

SynthOutput generate(const SynthConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);

    const std::size_t per_micro = static_cast<std::size_t>(cfg.papers_per_micro);
    const std::size_t per_meso = per_micro * static_cast<std::size_t>(cfg.micro_per_meso);
    const std::size_t per_macro = per_meso * static_cast<std::size_t>(cfg.meso_per_macro);
    const std::size_t n_meso =
        static_cast<std::size_t>(cfg.n_macro) * static_cast<std::size_t>(cfg.meso_per_macro);
    const std::size_t n = cfg.n_pubs();
    const int width = static_cast<int>(std::to_string(n).size());

    ClusterHierarchy hierarchy;
    for (std::size_t micro = 0; micro < n / per_micro; ++micro) {
        const auto meso = micro / static_cast<std::size_t>(cfg.micro_per_meso);
        const auto macro = meso / static_cast<std::size_t>(cfg.meso_per_macro);
        hierarchy.add(static_cast<ClusterId>(micro + 1), static_cast<ClusterId>(meso + 1),
                      static_cast<ClusterId>(macro + 1));
    }

    std::uniform_int_distribution<int> year_dist(cfg.year_min, cfg.year_max);
    std::uniform_real_distribution<double> unit01(0.0, 1.0);
    std::lognormal_distribution<double> attract_dist(cfg.attract_location, cfg.attract_scale);

    std::vector<PublicationRecord> pubs(n);
    std::vector<double> attract(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& p = pubs[i];
        p.pub_id = make_id(i + 1, width);
        p.year = year_dist(rng);
        const double u = unit01(rng);
        p.doc_type = u < cfg.other_share                      ? DocType::Other
                     : u < cfg.other_share + cfg.review_share ? DocType::Review
                                                              : DocType::Article;
        const auto micro = i / per_micro;
        p.micro_id = static_cast<ClusterId>(micro + 1);
        p.meso_id = static_cast<ClusterId>(i / per_meso + 1);
        p.macro_id = static_cast<ClusterId>(i / per_macro + 1);
        if (cfg.n_units > 0 && unit01(rng) < cfg.unit_rate) {
            std::uniform_int_distribution<int> unit(1, cfg.n_units);
            p.unit_ids.push_back("U" + std::to_string(unit(rng)));
        }
        attract[i] = attract_dist(rng);
    }

    double planted_attract = 0.0;
    {
        std::vector<double> sorted = attract;
        const auto k = std::min(n - 1, static_cast<std::size_t>(
                                           std::floor(cfg.planted_quantile * double(n - 1))));
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k),
                         sorted.end());
        planted_attract = sorted[k];
    }

    // Planting: breakthroughs spread over distinct meso-fields and dated to
    // the first year so they cite nothing; followers come later in the same
    // meso-field.
    SynthOutput out;
    std::vector<char> planted(n, 0);
    std::vector<PubIndex> breakthroughs, followers;
    std::vector<CitationEdge> edges;

    std::vector<std::size_t> meso_order(n_meso);
    std::iota(meso_order.begin(), meso_order.end(), std::size_t{0});
    std::shuffle(meso_order.begin(), meso_order.end(), rng);

    auto pick_unplanted = [&](std::size_t meso) {
        std::uniform_int_distribution<std::size_t> pick(0, per_meso - 1);
        while (true) {
            const auto i = meso * per_meso + pick(rng);
            if (!planted[i]) return static_cast<PubIndex>(i);
        }
    };

    for (int b = 0; b < cfg.n_planted_breakthroughs; ++b) {
        const auto meso = meso_order[static_cast<std::size_t>(b) % n_meso];
        const auto i = pick_unplanted(meso);
        planted[i] = 1;
        pubs[i].doc_type = DocType::Article;
        pubs[i].year = cfg.year_min;
        attract[i] = planted_attract;
        breakthroughs.push_back(i);
    }
    std::vector<PubIndex> follows(static_cast<std::size_t>(cfg.n_planted_followers));
    for (int f = 0; f < cfg.n_planted_followers; ++f) {
        const auto b = breakthroughs[static_cast<std::size_t>(f) % breakthroughs.size()];
        const auto i = pick_unplanted(static_cast<std::size_t>(pubs[b].meso_id - 1));
        planted[i] = 1;
        std::uniform_int_distribution<int> lag(1, 3);
        pubs[i].doc_type = DocType::Article;
        pubs[i].year = std::min(cfg.year_max, pubs[b].year + lag(rng));
        attract[i] = planted_attract;
        followers.push_back(i);
        follows[static_cast<std::size_t>(f)] = b;
        edges.push_back({i, b});
    }

    double rate_scale = 1.0;
    if (cfg.target_edges > 0) {
        const double total = std::accumulate(attract.begin(), attract.end(), 0.0);
        if (total > 0.0) rate_scale = static_cast<double>(cfg.target_edges) / total;
    }

    const YearOrderedLevel by_micro(pubs, per_micro);
    const YearOrderedLevel by_meso(pubs, per_meso);
    const YearOrderedLevel by_macro(pubs, per_macro);
    std::uniform_int_distribution<std::size_t> foreign_macro(
        0, static_cast<std::size_t>(std::max(cfg.n_macro - 2, 0)));

    std::vector<int> follower_slot(n, -1);
    for (std::size_t f = 0; f < followers.size(); ++f) {
        follower_slot[followers[f]] = static_cast<int>(f);
    }
    std::vector<std::vector<PubIndex>> follower_citers(followers.size());
    const std::size_t planted_edges = edges.size();

    auto draw_citations = [&](double scale, std::mt19937_64 r) {
        edges.resize(planted_edges);
        std::vector<PubIndex> citers;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = pubs[i];
            const double rate = attract[i] * scale;
            std::poisson_distribution<long> cites(rate > 0.0 ? rate : 1.0);
            const long k = rate > 0.0 ? cites(r) : 0;
            citers.clear();
            const auto micro = i / per_micro, meso = i / per_meso, macro = i / per_macro;
            for (long c = 0; c < k; ++c) {
                std::optional<PubIndex> citer;
                if (cfg.n_macro > 1 && unit01(r) < cfg.cross_macro_rate) {
                    auto other = foreign_macro(r);
                    if (other >= macro) ++other;
                    citer = by_macro.draw_later(other, p.year, r);
                } else if (unit01(r) < cfg.within_micro_rate) {
                    citer = by_micro.draw_later(micro, p.year, r);
                } else {
                    citer = by_meso.draw_later(meso, p.year, r);
                }
                if (citer) citers.push_back(*citer);
            }
            std::sort(citers.begin(), citers.end());
            citers.erase(std::unique(citers.begin(), citers.end()), citers.end());
            for (PubIndex c : citers) edges.push_back({c, static_cast<PubIndex>(i)});

            if (follower_slot[i] >= 0) {
                follower_citers[static_cast<std::size_t>(follower_slot[i])] = citers;
            }
        }
        return r;
    };

    // Citers must be later papers and repeats collapse, so the realised
    // edge count falls short of the rate total; when a target is set the
    // scale is corrected from a trial draw over the same random stream.
    const auto stream = rng;
    rng = draw_citations(rate_scale, stream);
    for (int pass = 0; pass < 4 && cfg.target_edges > 0; ++pass) {
        const double got = static_cast<double>(edges.size());
        const double want = static_cast<double>(cfg.target_edges);
        if (got <= 0.0 || std::abs(got - want) <= 0.002 * want) break;
        rate_scale *= want / got;
        rng = draw_citations(rate_scale, stream);
    }

    // Forced co-citation of the followed breakthrough.
    for (std::size_t f = 0; f < followers.size(); ++f) {
        auto pool = follower_citers[f];
        std::shuffle(pool.begin(), pool.end(), rng);
        const auto forced = static_cast<std::size_t>(
            std::ceil(cfg.follower_cociter_share * static_cast<double>(pool.size())));
        for (std::size_t k = 0; k < forced && k < pool.size(); ++k) {
            edges.push_back({pool[k], follows[f]});
        }
    }

    for (PubIndex b : breakthroughs) out.truth.planted_breakthroughs.push_back(pubs[b].pub_id);
    for (PubIndex f : followers) out.truth.planted_followers.push_back(pubs[f].pub_id);

    LoadOptions opts;
    opts.year_min = cfg.year_min;
    opts.year_max = cfg.year_max;
    out.corpus = Corpus::build_indexed(std::move(pubs), std::move(edges), std::move(hierarchy),
                                       opts);
    return out;
}

void write_ground_truth(std::ostream& out, const GroundTruth& truth) {
    out << "pub_id\tlabel\n";
    for (const auto& id : truth.planted_breakthroughs) out << id << "\tbreakthrough\n";
    for (const auto& id : truth.planted_followers) out << id << "\tfollower\n";
}

std::vector<std::int64_t> lognormal_citation_field(std::size_t n, double location, double scale,
                                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::lognormal_distribution<double> attract(location, scale);
    std::vector<std::int64_t> counts(n);
    for (auto& c : counts) {
        std::poisson_distribution<std::int64_t> cites(attract(rng));
        c = cites(rng);
    }
    return counts;
}

} // namespace breakscan
