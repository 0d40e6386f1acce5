#pragma once

#include "kcmap/corpus.hpp"
#include "kcmap/credit.hpp"
#include "kcmap/territory.hpp"

#include <string>
#include <vector>

namespace kcmap {

struct SpecialtySummary {
    std::string specialty;
    long long publications = 0;
    long long citations = 0;
    long long authorships = 0;   // byline entries
    long long nuts3_count = 0;   // provinces holding a positive share
    long long nuts2_count = 0;   // regions holding a positive share
};

struct SummaryReport {
    std::vector<SpecialtySummary> rows;  // config order
    SpecialtySummary total;              // distinct union; never the column sum
};

// Publications belong to every specialty whose SC set intersects theirs, so the
// total row counts distinct publications and can fall below the column sums.
SummaryReport compute_summary(const Corpus& corpus, const std::vector<PublicationCredit>& credits,
                              const TerritoryIndex& territory, const SpecialtyConfig& config);

} // namespace kcmap
