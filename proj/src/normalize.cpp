#include "kcmap/normalize.hpp"

#include "kcmap/errors.hpp"

#include <algorithm>
#include <exception>

namespace kcmap {

double BaselineCell::mean_citations() const {
    if (citation_degenerate()) return 0.0;
    return static_cast<double>(total_citations) / static_cast<double>(cited_publication_count);
}

double BaselineCell::mean_impact_factor() const {
    if (if_degenerate()) return 0.0;
    return impact_factor_sum / static_cast<double>(publication_count);
}

BaselineTable BaselineTable::compute(const Corpus& corpus) {
    BaselineTable table;
    std::map<std::pair<int, std::string>, BaselineCell> cells;
    for (const auto& pub : corpus.publications()) {
        const JournalRecord* journal = corpus.find_journal(pub.journal_id);
        if (!journal) {
            throw ComputationError("pub " + pub.pub_id + " references unknown journal '" +
                                   pub.journal_id + "'");
        }
        auto impact = journal->impact_factor(pub.year);
        if (!impact) {
            throw ComputationError("journal " + pub.journal_id + " has no impact factor for year " +
                                   std::to_string(pub.year));
        }
        for (const std::string& sc : pub.subject_categories) {
            BaselineCell& cell = cells[{pub.year, sc}];
            cell.year = pub.year;
            cell.sc_code = sc;
            cell.publication_count += 1;
            if (pub.citation_count > 0) {
                cell.cited_publication_count += 1;
                cell.total_citations += pub.citation_count;
            }
            cell.impact_factor_sum += *impact;
        }
    }
    table.cells_.reserve(cells.size());
    for (auto& [key, cell] : cells) {
        table.index_.emplace(key, table.cells_.size());
        table.cells_.push_back(std::move(cell));
    }
    return table;
}

const BaselineCell* BaselineTable::find(int year, std::string_view sc_code) const {
    auto it = index_.find({year, std::string(sc_code)});
    if (it == index_.end()) return nullptr;
    return &cells_[it->second];
}

WeightTable::WeightTable(std::vector<WeightEntry> entries) {
    for (auto& e : entries) {
        entries_[{e.year, e.sc_code}] = e.citation_weight;
    }
}

WeightTable::WeightTable(std::vector<WeightEntry> entries, double default_weight)
    : WeightTable(std::move(entries)) {
    if (default_weight < 0.0 || default_weight > 1.0) {
        throw ValidationError("default citation weight must lie in [0,1]");
    }
    default_weight_ = default_weight;
}

double WeightTable::weight(int year, std::string_view sc_code) const {
    auto it = entries_.find({year, std::string(sc_code)});
    if (it != entries_.end()) return it->second;
    if (default_weight_) return *default_weight_;
    throw ComputationError("no weight entry for year " + std::to_string(year) + " SC " +
                           std::string(sc_code) + " and no default weight configured");
}

namespace {

const BaselineCell& require_cell(const BaselineTable& baselines, int year,
                                 const std::string& sc_code) {
    const BaselineCell* cell = baselines.find(year, sc_code);
    if (!cell) {
        throw ComputationError("no baseline cell for year " + std::to_string(year) + " SC " +
                               sc_code);
    }
    return *cell;
}

} // namespace

double field_normalized_citations(const PublicationRecord& pub, const BaselineTable& baselines,
                                  bool* degenerate) {
    double sum = 0.0;
    bool hit_degenerate = false;
    for (const std::string& sc : pub.subject_categories) {
        const BaselineCell& cell = require_cell(baselines, pub.year, sc);
        if (cell.citation_degenerate()) {
            hit_degenerate = true;
            continue;
        }
        // citations / (total/cited_count), formed as one division of two exact
        // integers: uniform integer scaling of citation counts cancels without
        // perturbing the quotient.
        const double numerator =
            static_cast<double>(pub.citation_count * cell.cited_publication_count);
        sum += numerator / static_cast<double>(cell.total_citations);
    }
    if (degenerate) *degenerate = hit_degenerate;
    return sum / static_cast<double>(pub.subject_categories.size());
}

double field_normalized_if(const PublicationRecord& pub, const JournalRecord& journal,
                           const BaselineTable& baselines, bool* degenerate) {
    auto impact = journal.impact_factor(pub.year);
    if (!impact) {
        throw ComputationError("journal " + journal.journal_id + " has no impact factor for year " +
                               std::to_string(pub.year));
    }
    double sum = 0.0;
    bool hit_degenerate = false;
    for (const std::string& sc : pub.subject_categories) {
        const BaselineCell& cell = require_cell(baselines, pub.year, sc);
        if (cell.if_degenerate()) {
            hit_degenerate = true;
            continue;
        }
        sum += *impact / cell.mean_impact_factor();
    }
    if (degenerate) *degenerate = hit_degenerate;
    return sum / static_cast<double>(pub.subject_categories.size());
}

double combined_impact(double fnc, double fnif, double citation_weight) {
    return citation_weight * fnc + (1.0 - citation_weight) * fnif;
}

namespace {

PublicationScore score_one(const PublicationRecord& pub, const Corpus& corpus,
                           const BaselineTable& baselines, const WeightTable& weights) {
    PublicationScore score;
    score.pub_id = pub.pub_id;
    const JournalRecord* journal = corpus.find_journal(pub.journal_id);
    if (!journal) {
        throw ComputationError("pub " + pub.pub_id + " references unknown journal '" +
                               pub.journal_id + "'");
    }
    score.fnc = field_normalized_citations(pub, baselines, &score.citation_degenerate);
    score.fnif = field_normalized_if(pub, *journal, baselines, &score.if_degenerate);
    double weight_sum = 0.0;
    for (const std::string& sc : pub.subject_categories) {
        weight_sum += weights.weight(pub.year, sc);
    }
    score.citation_weight = weight_sum / static_cast<double>(pub.subject_categories.size());
    score.impact = combined_impact(score.fnc, score.fnif, score.citation_weight);
    return score;
}

} // namespace

std::vector<PublicationScore> score_corpus(const Corpus& corpus, const BaselineTable& baselines,
                                           const WeightTable& weights, ExecMode mode) {
    const auto& pubs = corpus.publications();
    std::vector<PublicationScore> out(pubs.size());
    if (mode == ExecMode::Parallel) {
#ifdef _OPENMP
        std::exception_ptr failure;
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(pubs.size()); ++i) {
            try {
                out[static_cast<std::size_t>(i)] =
                    score_one(pubs[static_cast<std::size_t>(i)], corpus, baselines, weights);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        return out;
#endif
    }
    for (std::size_t i = 0; i < pubs.size(); ++i) {
        out[i] = score_one(pubs[i], corpus, baselines, weights);
    }
    return out;
}

} // namespace kcmap
