#pragma once
// The three breakthrough selection rules.
//
//   M1   most cited article(s) of each micro-field, ties included
//   M2a  top-class articles surviving the follower filter
//   M2b  M2a members cited from more foreign macro-fields than the mean
//        M2a member of their meso-field

#include "breakscan/corpus.hpp"
#include "breakscan/follower.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace breakscan {

enum class Method { M1, M2a, M2b };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view s);   // "m1", "m2a", "m2b"

struct M1Evidence {
    ClusterId micro_id;
    std::uint32_t citations;
    bool tie;   // more than one article shares the field maximum
};

struct M2aEvidence {
    double alone_share;
};

struct M2bEvidence {
    std::size_t external_macro_count;
    double meso_mean;
};

using Evidence = std::variant<M1Evidence, M2aEvidence, M2bEvidence>;

struct BreakthroughSet {
    Method method = Method::M1;
    std::vector<PubIndex> members;    // ascending
    std::vector<Evidence> evidence;   // parallel to members

    std::size_t size() const { return members.size(); }
    bool empty() const { return members.empty(); }
    bool contains(PubIndex p) const;
    const Evidence* evidence_of(PubIndex p) const;
};

struct M1Options {
    // When set, M1 winners discarded as followers by these verdicts are
    // dropped. Winners outside the candidate pool are unaffected.
    const FollowerResult* follower_filter = nullptr;
};

BreakthroughSet detect_m1(const Corpus& corpus, const CitationCounts& counts,
                          const M1Options& opts = {});

BreakthroughSet detect_m2a(std::span<const PubIndex> pool, const FollowerResult& verdicts);

struct DiffusionStat {
    PubIndex pub;
    ClusterId own_macro;
    std::size_t external_macro_count;
};

// Distinct macro-fields, other than the member's own, with at least one citer.
std::vector<DiffusionStat> macro_diffusion(const BreakthroughSet& m2a, const Corpus& corpus);

// strict = true selects members strictly above their meso-group mean.
BreakthroughSet detect_m2b(const BreakthroughSet& m2a, std::span<const DiffusionStat> diffusion,
                           const Corpus& corpus, bool strict = true);

// pub_id, method, evidence columns; rows ordered by pub_id.
//   m1:  micro_id, citations, tie
//   m2a: alone_share
//   m2b: external_macro_count, meso_mean
void write_breakthrough_set(std::ostream& out, const Corpus& corpus, const BreakthroughSet& set);

} // namespace breakscan
