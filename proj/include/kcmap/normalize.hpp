#pragma once

#include "kcmap/corpus.hpp"
#include "kcmap/exec.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kcmap {

// Citation and impact-factor baselines for one (publication year, subject
// category) cell. Citation fields are exact integer tallies so normalized
// ratios can be formed with a single floating division.
struct BaselineCell {
    int year = 0;
    std::string sc_code;
    long long publication_count = 0;        // all publications in the cell
    long long cited_publication_count = 0;  // publications with at least one citation
    long long total_citations = 0;          // citations over the cited ones
    double impact_factor_sum = 0.0;         // journal IF at publication year, all members

    bool citation_degenerate() const { return cited_publication_count == 0; }
    bool if_degenerate() const { return publication_count == 0 || impact_factor_sum <= 0.0; }
    double mean_citations() const;       // 0 when citation-degenerate
    double mean_impact_factor() const;   // 0 when IF-degenerate
};

class BaselineTable {
public:
    static BaselineTable compute(const Corpus& corpus);

    const BaselineCell* find(int year, std::string_view sc_code) const;
    // Sorted by (year, sc_code).
    const std::vector<BaselineCell>& cells() const { return cells_; }

private:
    std::vector<BaselineCell> cells_;
    std::map<std::pair<int, std::string>, std::size_t> index_;
};

// (year, SC) -> weight of the citation component in the combined impact score.
// Without a default, a missing pair is an error; the fallback is opt-in.
class WeightTable {
public:
    WeightTable() = default;
    explicit WeightTable(std::vector<WeightEntry> entries);
    WeightTable(std::vector<WeightEntry> entries, double default_weight);

    double weight(int year, std::string_view sc_code) const;
    std::optional<double> default_weight() const { return default_weight_; }

private:
    std::map<std::pair<int, std::string>, double> entries_;
    std::optional<double> default_weight_;
};

// Citations of the publication over the mean citations of cited publications in
// the same cell, averaged over the publication's subject categories.
// Degenerate cells contribute 0 and set *degenerate.
double field_normalized_citations(const PublicationRecord& pub, const BaselineTable& baselines,
                                  bool* degenerate = nullptr);

// Journal impact factor at publication year over the cell mean, averaged over
// subject categories. Degenerate cells contribute 0 and set *degenerate.
double field_normalized_if(const PublicationRecord& pub, const JournalRecord& journal,
                           const BaselineTable& baselines, bool* degenerate = nullptr);

double combined_impact(double fnc, double fnif, double citation_weight);

struct PublicationScore {
    std::string pub_id;
    double fnc = 0.0;
    double fnif = 0.0;
    double citation_weight = 0.5;  // averaged over the publication's SCs
    double impact = 0.0;
    bool citation_degenerate = false;
    bool if_degenerate = false;
};

// One score per corpus publication, in corpus order.
std::vector<PublicationScore> score_corpus(const Corpus& corpus, const BaselineTable& baselines,
                                           const WeightTable& weights, ExecMode mode);

} // namespace kcmap
