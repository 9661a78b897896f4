#pragma once
// Characteristic Scores and Scales: partitions a field's citation
// distribution by successive conditional means.
//
//   mu_1 = mean(all), S_2 = {c >= mu_1}, mu_2 = mean(S_2), S_3 = {c >= mu_2}, ...
//
// With depth d there are d means and d+1 classes; class k+1 holds the
// members with mu_k <= c < mu_{k+1}. A field whose members all share one
// count never shrinks under truncation and is placed entirely in T1.

#include "breakscan/corpus.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace breakscan {

inline constexpr int kDefaultCssDepth = 3;

// Citation class T1 < T2 < ... Level 0 marks "not classified".
class CitationClass {
public:
    constexpr CitationClass() = default;
    constexpr explicit CitationClass(std::uint8_t level) : level_(level) {}

    constexpr std::uint8_t level() const { return level_; }
    constexpr bool classified() const { return level_ != 0; }
    std::string name() const { return "T" + std::to_string(level_); }

    constexpr auto operator<=>(const CitationClass&) const = default;

private:
    std::uint8_t level_ = 0;
};

inline constexpr CitationClass T1{1};
inline constexpr CitationClass T2{2};
inline constexpr CitationClass T3{3};
inline constexpr CitationClass T4{4};

struct CssThresholds {
    ClusterId field_id = 0;
    std::size_t n_members = 0;
    std::vector<double> means;   // mu_1 .. mu_depth, nondecreasing
    bool uniform = false;        // every member has the same count

    double mu(std::size_t k) const { return means.at(k - 1); }
    int depth() const { return static_cast<int>(means.size()); }
    CitationClass top_class() const {
        return CitationClass(static_cast<std::uint8_t>(means.size() + 1));
    }
    CitationClass classify(double citations) const;
};

// Thresholds for a multiset of counts. Throws std::invalid_argument on an
// empty input, a negative count or depth < 1.
CssThresholds css_thresholds(std::span<const std::int64_t> counts,
                             int depth = kDefaultCssDepth);

struct CssInput {
    PubIndex pub;
    std::int64_t citations;
};

struct CssMember {
    PubIndex pub;
    std::int64_t citations;
    CitationClass cls;
};

struct CssPartition {
    CssThresholds thresholds;
    std::vector<CssMember> members;   // input order

    std::size_t count(CitationClass c) const;
};

CssPartition css_partition(std::span<const CssInput> values, int depth = kDefaultCssDepth,
                           ClusterId field_id = 0);

struct CssResult {
    std::map<ClusterId, CssPartition> fields;   // keyed by meso id
    std::vector<CitationClass> class_of;         // per PubIndex, unclassified for "other"
    std::vector<std::string> log;
    int depth = kDefaultCssDepth;

    CitationClass top_class() const {
        return CitationClass(static_cast<std::uint8_t>(depth + 1));
    }
};

// One partition per meso-field over its articles and reviews.
CssResult css_all_fields(const Corpus& corpus, const CitationCounts& counts,
                         int depth = kDefaultCssDepth);

// Mean and standard deviation across fields of the per-class membership
// share and received-citation share. Citation shares only average over
// fields that received any citations. Standard deviations are population
// (divide by the number of fields).
struct CssSummary {
    std::size_t n_fields = 0;
    std::size_t n_fields_cited = 0;
    std::vector<double> share_mean, share_sd;
    std::vector<double> citation_share_mean, citation_share_sd;
};

CssSummary css_summary(const std::map<ClusterId, CssPartition>& fields);

// Two-row table of percentages with sd in parentheses.
std::string format_css_summary(const CssSummary& s);

// meso_id, n, mu1..mu_depth
void write_css_thresholds(std::ostream& out, const CssResult& result);
// pub_id, meso_id, class; rows ordered by pub_id
void write_css_classes(std::ostream& out, const Corpus& corpus, const CssResult& result);
void write_css_summary(std::ostream& out, const CssSummary& s);

} // namespace breakscan
