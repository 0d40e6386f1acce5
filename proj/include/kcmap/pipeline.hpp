#pragma once

#include "kcmap/exec.hpp"
#include "kcmap/match.hpp"
#include "kcmap/report.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace kcmap {

enum class OutputFormat { Csv, Json };

struct PipelineOptions {
    std::filesystem::path corpus_path;
    std::filesystem::path journals_path;
    std::filesystem::path institutions_path;
    std::filesystem::path roster_path;
    std::filesystem::path costs_path;
    std::filesystem::path weights_path;      // optional
    std::filesystem::path gazetteer_path;
    std::filesystem::path population_path;
    std::filesystem::path specialties_path;
    std::filesystem::path gold_path;         // optional
    std::filesystem::path series_path;       // optional external choropleth series
    std::filesystem::path out_dir;

    TerritoryLevel level = TerritoryLevel::Nuts2;
    std::string specialty = std::string(kOverallSpecialty);
    OutputFormat format = OutputFormat::Csv;
    std::optional<double> default_weight;    // opt-in fallback for missing weight entries
    ChoroplethMetric metric = ChoroplethMetric::NormalizedKcPc;

    bool require_university_match = true;
    NamePolicy name_policy = NamePolicy::SurnameInitials;
    AmbiguityPolicy ambiguity_policy = AmbiguityPolicy::RejectAmbiguous;

    bool serial = false;
    int threads = 0;  // 0 keeps the library default
};

// Each entry point loads what it needs, runs the stages in order, writes its
// outputs under out_dir and throws ValidationError or ComputationError with the
// failing stage named. The log stream receives one line per stage.
void run_validate(const PipelineOptions& options, std::ostream& log);
void run_summary(const PipelineOptions& options, std::ostream& log);
void run_score(const PipelineOptions& options, std::ostream& log);
void run_report(const PipelineOptions& options, std::ostream& log);
void run_match_eval(const PipelineOptions& options, std::ostream& log);

std::string specialty_slug(std::string_view specialty);

} // namespace kcmap
