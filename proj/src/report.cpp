#include "kcmap/report.hpp"

#include "kcmap/errors.hpp"

#include <algorithm>
#include <cmath>

namespace kcmap {

std::string_view quadrant_name(QuadrantLabel q) {
    switch (q) {
        case QuadrantLabel::UpperRight: return "UpperRight";
        case QuadrantLabel::UpperLeft: return "UpperLeft";
        case QuadrantLabel::LowerRight: return "LowerRight";
        case QuadrantLabel::LowerLeft: return "LowerLeft";
    }
    return "LowerLeft";
}

QuadrantLabel classify_quadrant(double normalized_kc_pc, double mean_normalized_fss) {
    if (!std::isfinite(normalized_kc_pc) || !std::isfinite(mean_normalized_fss) ||
        normalized_kc_pc < 0.0 || mean_normalized_fss < 0.0) {
        throw ComputationError("quadrant classification needs finite non-negative scores");
    }
    const bool right = normalized_kc_pc >= 1.0;
    const bool upper = mean_normalized_fss >= 1.0;
    if (right && upper) return QuadrantLabel::UpperRight;
    if (!right && upper) return QuadrantLabel::UpperLeft;
    if (right) return QuadrantLabel::LowerRight;
    return QuadrantLabel::LowerLeft;
}

namespace {

const TerritoryNode& node_at(const TerritoryIndex& territory, TerritoryLevel level,
                             const std::string& code) {
    const TerritoryNode* node = territory.find(level, code);
    if (!node) {
        throw ComputationError("territory " + code + " is absent from the gazetteer at level " +
                               std::string(level_name(level)));
    }
    return *node;
}

std::vector<const TerritoryScore*> rows_for(const TerritoryScoreSet& scores, TerritoryLevel level,
                                            const std::string& specialty) {
    std::vector<const TerritoryScore*> out;
    for (const TerritoryScore& row : scores.rows) {
        if (row.level == level && row.specialty == specialty) out.push_back(&row);
    }
    if (out.empty()) {
        throw ComputationError("no territory scores for specialty '" + specialty +
                               "' at level " + std::string(level_name(level)));
    }
    std::sort(out.begin(), out.end(), [](const TerritoryScore* a, const TerritoryScore* b) {
        return a->territory_code < b->territory_code;
    });
    return out;
}

} // namespace

ScatterData build_scatter(const TerritoryScoreSet& scores, const TerritoryIndex& territory,
                          TerritoryLevel level, const std::string& specialty) {
    ScatterData data;
    for (const TerritoryScore* row : rows_for(scores, level, specialty)) {
        const TerritoryNode& node = node_at(territory, level, row->territory_code);
        if (!row->has_fss) {
            data.excluded.push_back(
                {row->territory_code, node.name, "no professors in " + specialty});
            continue;
        }
        ScatterRow out;
        out.territory_code = row->territory_code;
        out.territory_name = node.name;
        out.x = row->normalized_kc_pc;
        out.y = row->mean_normalized_fss;
        out.quadrant = classify_quadrant(out.x, out.y);
        out.professor_count = row->professor_count;
        out.low_headcount = row->low_headcount();
        data.rows.push_back(std::move(out));
    }
    return data;
}

std::string_view metric_name(ChoroplethMetric m) {
    return m == ChoroplethMetric::KcPc ? "kc_pc" : "normalized_kc_pc";
}

namespace {

void finalize_stats(ChoroplethData& data) {
    if (data.rows.empty()) return;
    data.min = data.rows.front().value;
    data.max = data.rows.front().value;
    double sum = 0.0;
    for (const ChoroplethRow& row : data.rows) {
        data.min = std::min(data.min, row.value);
        data.max = std::max(data.max, row.value);
        sum += row.value;
    }
    data.mean = sum / static_cast<double>(data.rows.size());
}

} // namespace

ChoroplethData build_choropleth(const TerritoryScoreSet& scores, const TerritoryIndex& territory,
                                TerritoryLevel level, const std::string& specialty,
                                ChoroplethMetric metric) {
    ChoroplethData data;
    for (const TerritoryScore* row : rows_for(scores, level, specialty)) {
        const TerritoryNode& node = node_at(territory, level, row->territory_code);
        double value = metric == ChoroplethMetric::KcPc ? row->kc_pc : row->normalized_kc_pc;
        data.rows.push_back({row->territory_code, node.name, value});
    }
    finalize_stats(data);
    return data;
}

ChoroplethData build_choropleth_series(const std::map<std::string, double>& series,
                                       const TerritoryIndex& territory, TerritoryLevel level) {
    ChoroplethData data;
    for (const auto& [code, value] : series) {
        const TerritoryNode& node = node_at(territory, level, code);
        data.rows.push_back({code, node.name, value});
    }
    finalize_stats(data);
    return data;
}

RegionOverview build_region_overview(const TerritoryScoreSet& scores,
                                     const TerritoryIndex& territory,
                                     const SpecialtyConfig& config) {
    RegionOverview overview;
    for (const Specialty& s : config.specialties) overview.specialties.push_back(s.name);

    const auto& regions = territory.nodes(TerritoryLevel::Nuts2);
    std::map<std::string, std::size_t> row_index;
    for (const TerritoryNode& region : regions) {
        RegionOverviewRow row;
        row.region_code = region.code;
        row.region_name = region.name;
        row.kcpc_by_specialty.assign(config.specialties.size(), 0.0);
        row.fss_present.assign(config.specialties.size(), false);
        row.fss_by_specialty.assign(config.specialties.size(), 0.0);
        row_index.emplace(region.code, overview.rows.size());
        overview.rows.push_back(std::move(row));
    }

    std::map<std::string, std::size_t> specialty_index;
    for (std::size_t s = 0; s < config.specialties.size(); ++s) {
        specialty_index.emplace(config.specialties[s].name, s);
    }

    for (const TerritoryScore& score : scores.rows) {
        if (score.level != TerritoryLevel::Nuts2) continue;
        auto region_it = row_index.find(score.territory_code);
        if (region_it == row_index.end()) {
            throw ComputationError("region " + score.territory_code +
                                   " is absent from the gazetteer");
        }
        RegionOverviewRow& row = overview.rows[region_it->second];
        if (score.specialty == kOverallSpecialty) {
            row.kcpc_total = score.normalized_kc_pc;
            row.fss_total_present = score.has_fss;
            row.fss_total = score.mean_normalized_fss;
            continue;
        }
        const std::size_t s = specialty_index.at(score.specialty);
        row.kcpc_by_specialty[s] = score.normalized_kc_pc;
        row.fss_present[s] = score.has_fss;
        row.fss_by_specialty[s] = score.mean_normalized_fss;
    }
    return overview;
}

} // namespace kcmap
