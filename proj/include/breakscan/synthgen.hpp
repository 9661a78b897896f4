#pragma once
// Deterministic synthetic citation corpora with planted breakthroughs and
// planted followers.
//
// Every paper has a lognormal latent attractiveness; its citation count is
// Poisson with that rate. Citers are drawn from strictly later papers: from
// a foreign macro-field with probability cross_macro_rate, otherwise from
// the cited paper's own micro-field (within_micro_rate) or elsewhere in its
// meso-field. Planted papers get the attractiveness quantile
// planted_quantile of the drawn sample. Each planted follower cites its
// breakthrough and a follower_cociter_share of its citers also cite it.

#include "breakscan/corpus.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace breakscan {

struct SynthConfig {
    std::uint64_t seed = 42;
    int n_macro = 21;
    int meso_per_macro = 5;
    int micro_per_meso = 10;
    int papers_per_micro = 50;
    int year_min = 1993;
    int year_max = 2011;

    double attract_location = 1.0;
    double attract_scale = 1.2;
    // When positive, rates are rescaled so the edge count lands near this.
    std::uint64_t target_edges = 0;

    double within_micro_rate = 0.5;
    double cross_macro_rate = 0.1;

    int n_planted_breakthroughs = 20;
    int n_planted_followers = 20;
    double follower_cociter_share = 0.5;
    double planted_quantile = 0.999;

    double review_share = 0.05;
    double other_share = 0.02;
    int n_units = 2;
    double unit_rate = 0.1;   // probability a paper carries a unit tag

    std::size_t n_pubs() const {
        return static_cast<std::size_t>(n_macro) * static_cast<std::size_t>(meso_per_macro) *
               static_cast<std::size_t>(micro_per_meso) *
               static_cast<std::size_t>(papers_per_micro);
    }

    // Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
};

struct GroundTruth {
    std::vector<std::string> planted_breakthroughs;
    std::vector<std::string> planted_followers;
};

struct SynthOutput {
    Corpus corpus;
    GroundTruth truth;
};

SynthOutput generate(const SynthConfig& config);

// pub_id, label (breakthrough|follower)
void write_ground_truth(std::ostream& out, const GroundTruth& truth);

// A single field of `n` Poisson-lognormal citation counts.
std::vector<std::int64_t> lognormal_citation_field(std::size_t n, double location, double scale,
                                                   std::uint64_t seed);

} // namespace breakscan
