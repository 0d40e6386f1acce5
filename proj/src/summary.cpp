#include "kcmap/summary.hpp"

#include "kcmap/errors.hpp"
#include "kcmap/indicators.hpp"

#include <set>

namespace kcmap {

namespace {

SpecialtySummary summarize(const std::string& label, const std::vector<std::size_t>& members,
                           const Corpus& corpus, const std::vector<PublicationCredit>& credits,
                           const TerritoryIndex& territory) {
    SpecialtySummary row;
    row.specialty = label;
    row.publications = static_cast<long long>(members.size());
    std::set<std::string> nuts3, nuts2;
    for (std::size_t i : members) {
        const PublicationRecord& pub = corpus.publications()[i];
        row.citations += pub.citation_count;
        row.authorships += static_cast<long long>(pub.byline.size());
        for (const auto& [lau_code, share] : credits[i].shares.lau_share) {
            if (!(share > 0.0)) continue;
            nuts3.insert(territory.ancestor_code(lau_code, TerritoryLevel::Nuts3));
            nuts2.insert(territory.ancestor_code(lau_code, TerritoryLevel::Nuts2));
        }
    }
    row.nuts3_count = static_cast<long long>(nuts3.size());
    row.nuts2_count = static_cast<long long>(nuts2.size());
    return row;
}

} // namespace

SummaryReport compute_summary(const Corpus& corpus, const std::vector<PublicationCredit>& credits,
                              const TerritoryIndex& territory, const SpecialtyConfig& config) {
    if (credits.size() != corpus.publications().size()) {
        throw ComputationError("summary: credit rows out of step with corpus");
    }
    SummaryReport report;
    std::set<std::size_t> union_members;
    for (const Specialty& specialty : config.specialties) {
        std::vector<std::size_t> members = specialty_publications(corpus, specialty);
        union_members.insert(members.begin(), members.end());
        report.rows.push_back(summarize(specialty.name, members, corpus, credits, territory));
    }
    std::vector<std::size_t> distinct(union_members.begin(), union_members.end());
    report.total = summarize("Total", distinct, corpus, credits, territory);
    return report;
}

} // namespace kcmap
