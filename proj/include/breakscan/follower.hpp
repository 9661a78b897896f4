#pragma once
// Follower filtering of the outstanding (top-class) candidate pool.
//
// A candidate B2 that cites another candidate B1 is a potential follower.
// Its alone share is the fraction of its distinct citers that do not also
// cite a linked B1; a B2 survives when the alone share reaches the keep
// threshold. The B1 reference set is always the original pool.

#include "breakscan/corpus.hpp"
#include "breakscan/css.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace breakscan {

enum class FollowerSemantics {
    Union,    // a co-citer cites any linked B1
    PerPair,  // each (B2, B1) pair is judged alone; the worst pair decides
};

std::string_view to_string(FollowerSemantics s);
std::optional<FollowerSemantics> parse_follower_semantics(std::string_view s);

inline constexpr double kDefaultKeepThreshold = 0.70;

struct FollowerConfig {
    double keep_threshold = kDefaultKeepThreshold;
    FollowerSemantics semantics = FollowerSemantics::Union;
};

struct FollowerPair {
    PubIndex b2;   // citing candidate
    PubIndex b1;   // cited candidate

    bool operator==(const FollowerPair&) const = default;
    auto operator<=>(const FollowerPair&) const = default;
};

struct FollowerVerdict {
    PubIndex pub = 0;
    std::size_t n_citers = 0;
    std::size_t n_cociters = 0;
    double alone_share = 1.0;
    bool kept = true;
    bool has_pairs = false;
    bool zero_citers = false;   // paired B2 nobody cites: kept and logged
};

// Top-class articles, ascending PubIndex. Reviews shape the thresholds but
// are never candidates.
std::vector<PubIndex> candidate_pool(const Corpus& corpus, const CssResult& css);

// Every (b2, b1) with both in the pool and b2 citing b1, sorted.
std::vector<FollowerPair> find_pairs(std::span<const PubIndex> pool, const Corpus& corpus);

struct FollowerResult {
    std::vector<FollowerVerdict> verdicts;   // one per pool member, ascending pub
    std::vector<std::string> log;

    const FollowerVerdict* find(PubIndex pub) const;
    std::vector<PubIndex> kept() const;
};

FollowerResult filter_followers(std::span<const PubIndex> pool,
                                std::span<const FollowerPair> pairs,
                                const Corpus& corpus,
                                const FollowerConfig& config = {});

// pub_id, n_citers, n_cociters, alone_share, kept; rows ordered by pub_id
void write_verdicts(std::ostream& out, const Corpus& corpus, const FollowerResult& result);

} // namespace breakscan
