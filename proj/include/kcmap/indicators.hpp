#pragma once

#include "kcmap/corpus.hpp"
#include "kcmap/credit.hpp"
#include "kcmap/match.hpp"
#include "kcmap/normalize.hpp"
#include "kcmap/territory.hpp"

#include <span>
#include <string>
#include <vector>

namespace kcmap {

inline constexpr std::string_view kOverallSpecialty = "overall";
inline constexpr long long kLowHeadcountThreshold = 5;

struct ProfessorScore {
    std::string professor_id;
    std::string sds_code;
    std::string university_id;
    std::string lau_code;            // LAU of the university
    double productivity_core = 0.0;  // (1/t) * sum of impact * author_weight
    double raw_fss = 0.0;            // productivity_core / (w_r/2 + k)
    double normalized_fss = 0.0;     // productivity_core / group mean over positive members
    int matched_publication_count = 0;
};

struct SdsGroup {
    std::string sds_code;
    long long member_count = 0;
    long long positive_count = 0;
    double mean_positive_core = 0.0;
    bool degenerate = false;  // no member with positive score
};

struct ProfessorScoreSet {
    std::vector<ProfessorScore> scores;  // roster order (sorted by professor_id)
    std::vector<SdsGroup> groups;        // sorted by sds_code
};

// Divides each raw value by the mean over strictly positive entries; zeros stay
// zero. A group without positive members normalizes to all zeros and is flagged.
struct GroupNormalization {
    double mean_positive = 0.0;
    long long positive_count = 0;
    bool degenerate = false;
};
GroupNormalization normalize_group(std::span<const double> raw, std::span<double> normalized);

// Productivity per professor. The observation span t is the professor's count
// of active years; f_i is the full positional author weight (the affiliation
// split applies only to territorial accounting). Normalization is computed on
// the cost-free core so uniform cost rescaling cannot perturb it.
ProfessorScoreSet compute_professor_scores(const Corpus& corpus,
                                           const std::vector<PublicationScore>& pub_scores,
                                           const std::vector<PublicationCredit>& credits,
                                           const std::vector<Assignment>& assignments,
                                           const Roster& roster,
                                           const std::vector<ResolvedAddress>& addresses);

struct TerritoryScore {
    std::string territory_code;
    TerritoryLevel level = TerritoryLevel::Lau;
    std::string specialty;                // specialty name or "overall"
    double kc = 0.0;                      // sum of impact * territory share
    double kc_pc = 0.0;                   // kc per million residents
    double normalized_kc_pc = 0.0;        // kc_pc over the national kc_pc
    bool has_fss = false;                 // false when the territory has no professors
    double mean_normalized_fss = 0.0;
    long long professor_count = 0;
    bool low_headcount() const { return professor_count < kLowHeadcountThreshold; }
};

struct SpecialtyNationals {
    std::string specialty;
    double national_kc = 0.0;
    double national_kc_pc = 0.0;
    double foreign_kc = 0.0;      // impact credited to foreign addresses
    double unresolved_kc = 0.0;   // impact credited to unresolvable domestic addresses
    long long publication_count = 0;
    bool degenerate = false;      // national kc not positive
};

struct TerritoryScoreSet {
    // Ordered by specialty (config order, then "overall"), level
    // (lau, nuts3, nuts2, nuts1), then territory code.
    std::vector<TerritoryScore> rows;
    std::vector<SpecialtyNationals> nationals;  // config order, then "overall"
};

// KC per territory and specialty with rollups along the LAU -> NUTS3 -> NUTS2
// -> NUTS1 ladder (children summed in sorted code order, so parents reproduce
// child sums exactly), per-million-capita densities against the national
// density, and mean normalized FSS of the professors located in the territory.
// The "overall" pseudo-specialty averages KC columns over all specialties
// (absent KC counts as 0) and FSS over covered specialties only.
TerritoryScoreSet compute_territory_scores(const Corpus& corpus,
                                           const std::vector<PublicationScore>& pub_scores,
                                           const std::vector<PublicationCredit>& credits,
                                           const ProfessorScoreSet& professors,
                                           const TerritoryIndex& territory,
                                           const SpecialtyConfig& config);

// Publications whose subject categories intersect the specialty's SC set,
// as ordinals into corpus.publications(), ascending.
std::vector<std::size_t> specialty_publications(const Corpus& corpus, const Specialty& specialty);

} // namespace kcmap
