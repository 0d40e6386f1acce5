#include "kcmap/errors.hpp"
#include "kcmap/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

using namespace kcmap;

// Each subcommand registers only the flags its pipeline entry point consumes,
// so `--help` is truthful and an unused flag is a parse error, not a no-op.

void add_input_flags(CLI::App* cmd, PipelineOptions& options) {
    cmd->add_option("--corpus", options.corpus_path, "Publication records, one JSON object per line");
    cmd->add_option("--journals", options.journals_path, "Journal impact factors by year (CSV)");
    cmd->add_option("--institutions", options.institutions_path, "Institution registry (CSV)");
    cmd->add_option("--roster", options.roster_path, "Professor roster (CSV)");
    cmd->add_option("--costs", options.costs_path, "Per-field salary and capital cost rows (CSV)");
    cmd->add_option("--weights", options.weights_path, "Citation/impact-factor weights by year and field (CSV)");
    cmd->add_option("--gazetteer", options.gazetteer_path, "Territory hierarchy (CSV)");
    cmd->add_option("--population", options.population_path, "Resident population by territory (CSV)");
    cmd->add_option("--specialties", options.specialties_path, "Specialty definitions (JSON)");
    cmd->add_option("--gold", options.gold_path, "Gold-standard authorship assignments (CSV)");
}

void add_exec_flags(CLI::App* cmd, PipelineOptions& options) {
    cmd->add_option("--out", options.out_dir, "Output directory");
    cmd->add_flag("--serial", options.serial, "Run the serial reference kernels");
    cmd->add_option("--threads", options.threads, "Thread cap for parallel kernels (0 = default)");
}

void add_match_flags(CLI::App* cmd, PipelineOptions& options) {
    cmd->add_flag("--require-university-match,!--no-require-university-match",
                  options.require_university_match,
                  "Accept a name match only when the authorship lists the professor's university");

    static const std::map<std::string, NamePolicy> name_policies{
        {"exact-folded", NamePolicy::ExactFolded},
        {"surname+initials", NamePolicy::SurnameInitials}};
    cmd->add_option("--name-policy", options.name_policy, "Author-name matching rule")
        ->transform(CLI::CheckedTransformer(name_policies, CLI::ignore_case));

    static const std::map<std::string, AmbiguityPolicy> ambiguity_policies{
        {"reject-ambiguous", AmbiguityPolicy::RejectAmbiguous},
        {"error", AmbiguityPolicy::Error}};
    cmd->add_option("--ambiguity-policy", options.ambiguity_policy,
                    "What to do when several professors fit one authorship")
        ->transform(CLI::CheckedTransformer(ambiguity_policies, CLI::ignore_case));
}

void add_weight_fallback_flag(CLI::App* cmd, PipelineOptions& options) {
    cmd->add_option("--default-weight", options.default_weight,
                    "Fallback weight for (year, field) cells missing from --weights; "
                    "without it such cells are an error");
}

void add_format_flag(CLI::App* cmd, PipelineOptions& options) {
    static const std::map<std::string, OutputFormat> formats{
        {"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}};
    cmd->add_option("--format", options.format, "Table format for report and summary outputs")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

void add_report_flags(CLI::App* cmd, PipelineOptions& options) {
    static const std::map<std::string, TerritoryLevel> levels{
        {"lau", TerritoryLevel::Lau},
        {"nuts3", TerritoryLevel::Nuts3},
        {"nuts2", TerritoryLevel::Nuts2},
        {"nuts1", TerritoryLevel::Nuts1}};
    cmd->add_option("--level", options.level, "Reporting level")
        ->transform(CLI::CheckedTransformer(levels, CLI::ignore_case));

    cmd->add_option("--specialty", options.specialty,
                    "Specialty name, or 'overall' for the cross-specialty aggregate");

    static const std::map<std::string, ChoroplethMetric> metrics{
        {"kc_pc", ChoroplethMetric::KcPc},
        {"normalized_kc_pc", ChoroplethMetric::NormalizedKcPc}};
    cmd->add_option("--metric", options.metric, "Choropleth metric")
        ->transform(CLI::CheckedTransformer(metrics, CLI::ignore_case));

    cmd->add_option("--series", options.series_path,
                    "External per-territory series to pass through as an extra choropleth (CSV: code,value)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Territorial knowledge-capital and research-productivity engine"};
    app.require_subcommand(1);

    kcmap::PipelineOptions options;

    CLI::App* validate = app.add_subcommand("validate", "Parse and cross-check all inputs, write nothing");
    CLI::App* summary = app.add_subcommand("summary", "Per-specialty corpus summary table");
    CLI::App* score = app.add_subcommand("score", "Run the pipeline through professor and territory scores");
    CLI::App* report = app.add_subcommand("report", "Score plus scatter, choropleth and overview tables");
    CLI::App* match_eval = app.add_subcommand("match-eval", "Match authorships and grade them against --gold");

    for (CLI::App* cmd : {validate, summary, score, report, match_eval}) {
        add_input_flags(cmd, options);
    }
    for (CLI::App* cmd : {summary, score, report, match_eval}) {
        add_exec_flags(cmd, options);
    }
    for (CLI::App* cmd : {score, report, match_eval}) {
        add_match_flags(cmd, options);
    }
    for (CLI::App* cmd : {score, report}) {
        add_weight_fallback_flag(cmd, options);
    }
    for (CLI::App* cmd : {summary, report}) {
        add_format_flag(cmd, options);
    }
    add_report_flags(report, options);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) kcmap::run_validate(options, std::cout);
        if (summary->parsed()) kcmap::run_summary(options, std::cout);
        if (score->parsed()) kcmap::run_score(options, std::cout);
        if (report->parsed()) kcmap::run_report(options, std::cout);
        if (match_eval->parsed()) kcmap::run_match_eval(options, std::cout);
    } catch (const kcmap::ValidationError& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    } catch (const kcmap::ComputationError& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 3;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 3;
    }
    return 0;
}
