#pragma once

#include "kcmap/indicators.hpp"
#include "kcmap/territory.hpp"

#include <string>
#include <vector>

namespace kcmap {

// x = normalized_kc_pc, y = mean_normalized_fss; 1.0 is the national average
// and scores exactly at the cutoff count as above it.
enum class QuadrantLabel { UpperRight, UpperLeft, LowerRight, LowerLeft };

std::string_view quadrant_name(QuadrantLabel q);
QuadrantLabel classify_quadrant(double normalized_kc_pc, double mean_normalized_fss);

struct ScatterRow {
    std::string territory_code;
    std::string territory_name;
    double x = 0.0;  // normalized_kc_pc
    double y = 0.0;  // mean_normalized_fss
    QuadrantLabel quadrant = QuadrantLabel::LowerLeft;
    long long professor_count = 0;
    bool low_headcount = false;
};

struct ExcludedTerritory {
    std::string territory_code;
    std::string territory_name;
    std::string reason;
};

// Every territory of the level lands in exactly one of the two lists;
// territories without professors in the specialty are excluded, not plotted.
struct ScatterData {
    std::vector<ScatterRow> rows;
    std::vector<ExcludedTerritory> excluded;
};

ScatterData build_scatter(const TerritoryScoreSet& scores, const TerritoryIndex& territory,
                          TerritoryLevel level, const std::string& specialty);

enum class ChoroplethMetric { KcPc, NormalizedKcPc };

std::string_view metric_name(ChoroplethMetric m);

struct ChoroplethRow {
    std::string territory_code;
    std::string territory_name;
    double value = 0.0;
};

struct ChoroplethData {
    std::vector<ChoroplethRow> rows;  // sorted by territory code
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;  // arithmetic mean over rows
};

ChoroplethData build_choropleth(const TerritoryScoreSet& scores, const TerritoryIndex& territory,
                                TerritoryLevel level, const std::string& specialty,
                                ChoroplethMetric metric);

// Externally supplied per-territory series pass through unchanged; every code
// must exist at the level.
ChoroplethData build_choropleth_series(const std::map<std::string, double>& series,
                                       const TerritoryIndex& territory, TerritoryLevel level);

// One row per region: normalized KC_PC per specialty plus the all-specialty
// mean, and mean normalized FSS per specialty (absent cells stay absent) plus
// the covered-specialty mean.
struct RegionOverviewRow {
    std::string region_code;
    std::string region_name;
    std::vector<double> kcpc_by_specialty;
    double kcpc_total = 0.0;
    std::vector<bool> fss_present;
    std::vector<double> fss_by_specialty;  // meaningful where fss_present
    bool fss_total_present = false;
    double fss_total = 0.0;
};

struct RegionOverview {
    std::vector<std::string> specialties;  // config order
    std::vector<RegionOverviewRow> rows;   // sorted by region code
};

RegionOverview build_region_overview(const TerritoryScoreSet& scores,
                                     const TerritoryIndex& territory,
                                     const SpecialtyConfig& config);

} // namespace kcmap
