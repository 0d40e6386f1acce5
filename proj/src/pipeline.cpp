#include "kcmap/pipeline.hpp"

#include "kcmap/csv.hpp"
#include "kcmap/errors.hpp"
#include "kcmap/fingerprint.hpp"
#include "kcmap/format.hpp"
#include "kcmap/indicators.hpp"
#include "kcmap/normalize.hpp"
#include "kcmap/summary.hpp"
#include "kcmap/text.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <map>

namespace kcmap {

using nlohmann::json;

namespace {

constexpr std::string_view kToolVersion = "kcmap 1.0.0";

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(name) + " stage: " + e.what());
    } catch (const ComputationError& e) {
        throw ComputationError(std::string(name) + " stage: " + e.what());
    }
}

struct LoadedInputs {
    SpecialtyConfig config;
    TerritoryIndex territory;
    Corpus corpus;
    std::vector<ResolvedAddress> addresses;
};

struct ScoredState {
    Roster roster;
    BaselineTable baselines;
    WeightTable weights;
    std::vector<PublicationScore> pub_scores;
    std::vector<PublicationCredit> credits;
    MatchResult matches;
    ProfessorScoreSet professors;
    TerritoryScoreSet territory_scores;
};

ExecMode exec_mode(const PipelineOptions& options) {
    if (options.threads > 0) set_thread_limit(options.threads);
    return options.serial ? ExecMode::Serial : ExecMode::Parallel;
}

void require_input(const std::filesystem::path& path, const char* flag) {
    if (path.empty()) {
        throw ValidationError(std::string("missing required input: ") + flag);
    }
    if (!std::filesystem::exists(path)) {
        throw ValidationError(std::string(flag) + " file not found: " + path.string());
    }
}

LoadedInputs load_inputs(const PipelineOptions& options, std::ostream& log) {
    LoadedInputs in;
    in.config = stage("config", [&] {
        require_input(options.specialties_path, "--specialties");
        return load_specialty_config(options.specialties_path);
    });
    log << "config: " << in.config.specialties.size() << " specialties, window "
        << in.config.window_start << ".." << in.config.window_end << "\n";

    in.territory = stage("territory", [&] {
        require_input(options.gazetteer_path, "--gazetteer");
        require_input(options.population_path, "--population");
        return TerritoryIndex::build(options.gazetteer_path, options.population_path);
    });
    log << "territory: " << in.territory.nodes(TerritoryLevel::Lau).size() << " LAUs, "
        << in.territory.nodes(TerritoryLevel::Nuts3).size() << " NUTS3, "
        << in.territory.nodes(TerritoryLevel::Nuts2).size() << " NUTS2, "
        << in.territory.nodes(TerritoryLevel::Nuts1).size() << " NUTS1\n";

    in.corpus = stage("corpus", [&] {
        require_input(options.corpus_path, "--corpus");
        require_input(options.journals_path, "--journals");
        require_input(options.institutions_path, "--institutions");
        return load_corpus(options.corpus_path, options.journals_path, options.institutions_path,
                           in.config.country);
    });
    log << "corpus: " << in.corpus.publications().size() << " publications, "
        << in.corpus.journals().size() << " journals, " << in.corpus.institutions().size()
        << " institutions\n";

    in.addresses = stage("resolve", [&] { return in.territory.resolve_institutions(in.corpus); });
    std::size_t unresolved = 0;
    for (const auto& a : in.addresses) {
        if (a.kind == AddressKind::Unresolved) ++unresolved;
    }
    log << "resolve: " << unresolved << " unresolved institution addresses\n";
    return in;
}

Roster load_roster_stage(const PipelineOptions& options, const SpecialtyConfig& config,
                         std::ostream& log) {
    Roster roster = stage("roster", [&] {
        require_input(options.roster_path, "--roster");
        require_input(options.costs_path, "--costs");
        return load_roster(options.roster_path, options.costs_path, config.window_start,
                           config.window_end);
    });
    log << "roster: " << roster.professors.size() << " professors, " << roster.costs_by_sds.size()
        << " cost rows\n";
    return roster;
}

WeightTable load_weights_stage(const PipelineOptions& options) {
    return stage("normalize", [&] {
        std::vector<WeightEntry> entries;
        if (!options.weights_path.empty()) {
            require_input(options.weights_path, "--weights");
            entries = load_weight_entries(options.weights_path);
        }
        if (options.default_weight) {
            return WeightTable(std::move(entries), *options.default_weight);
        }
        if (entries.empty() && options.weights_path.empty()) {
            throw ValidationError(
                "no weight table: pass --weights or opt into a fallback with --default-weight");
        }
        return WeightTable(std::move(entries));
    });
}

ScoredState run_scoring(const PipelineOptions& options, const LoadedInputs& in,
                        std::ostream& log) {
    const ExecMode mode = exec_mode(options);
    ScoredState st;
    st.roster = load_roster_stage(options, in.config, log);
    st.baselines = stage("baselines", [&] { return BaselineTable::compute(in.corpus); });
    std::size_t degenerate_cells = 0;
    for (const auto& cell : st.baselines.cells()) {
        if (cell.citation_degenerate() || cell.if_degenerate()) ++degenerate_cells;
    }
    log << "baselines: " << st.baselines.cells().size() << " cells, " << degenerate_cells
        << " degenerate\n";

    st.weights = load_weights_stage(options);
    st.pub_scores = stage("normalize", [&] {
        return score_corpus(in.corpus, st.baselines, st.weights, mode);
    });
    log << "normalize: " << st.pub_scores.size() << " impact scores\n";

    st.credits = stage("credit", [&] { return credit_corpus(in.corpus, in.addresses, mode); });
    log << "credit: " << st.credits.size() << " publications credited\n";

    st.matches = stage("match", [&] {
        MatchRuleConfig rules(options.require_university_match, options.name_policy,
                              options.ambiguity_policy);
        return match_authorships(in.corpus, st.roster, rules, mode);
    });
    log << "match: " << st.matches.assignments.size() << " assigned, "
        << st.matches.unmatched.size() << " unmatched, " << st.matches.ambiguous.size()
        << " ambiguous\n";

    std::tie(st.professors, st.territory_scores) = stage("indicators", [&] {
        ProfessorScoreSet professors =
            compute_professor_scores(in.corpus, st.pub_scores, st.credits,
                                     st.matches.assignments, st.roster, in.addresses);
        TerritoryScoreSet territory_scores = compute_territory_scores(
            in.corpus, st.pub_scores, st.credits, professors, in.territory, in.config);
        return std::make_pair(std::move(professors), std::move(territory_scores));
    });
    log << "indicators: " << st.professors.scores.size() << " professor scores, "
        << st.territory_scores.rows.size() << " territory rows\n";
    return st;
}

// ---- manifest ----

json input_digest(const std::filesystem::path& path) {
    json j;
    j["path"] = path.string();
    j["fnv1a64"] = to_hex16(fnv1a64_file(path));
    return j;
}

struct ManifestInfo {
    json document;
    std::string digest;
};

ManifestInfo build_manifest(const PipelineOptions& options, const LoadedInputs& in,
                            const char* command, const ScoredState* scored) {
    json m;
    m["tool_version"] = std::string(kToolVersion);
    m["command"] = command;
    m["census_date"] = in.config.census_date;
    m["country"] = in.config.country;
    m["observation_window"] = {in.config.window_start, in.config.window_end};

    json inputs;
    inputs["corpus"] = input_digest(options.corpus_path);
    inputs["journals"] = input_digest(options.journals_path);
    inputs["institutions"] = input_digest(options.institutions_path);
    inputs["gazetteer"] = input_digest(options.gazetteer_path);
    inputs["population"] = input_digest(options.population_path);
    inputs["specialties"] = input_digest(options.specialties_path);
    if (!options.roster_path.empty() && std::filesystem::exists(options.roster_path)) {
        inputs["roster"] = input_digest(options.roster_path);
    }
    if (!options.costs_path.empty() && std::filesystem::exists(options.costs_path)) {
        inputs["costs"] = input_digest(options.costs_path);
    }
    if (!options.weights_path.empty() && std::filesystem::exists(options.weights_path)) {
        inputs["weights"] = input_digest(options.weights_path);
    }
    if (!options.gold_path.empty() && std::filesystem::exists(options.gold_path)) {
        inputs["gold"] = input_digest(options.gold_path);
    }
    if (!options.series_path.empty() && std::filesystem::exists(options.series_path)) {
        inputs["series"] = input_digest(options.series_path);
    }
    m["inputs"] = std::move(inputs);

    json config;
    config["level"] = std::string(level_name(options.level));
    config["specialty"] = options.specialty;
    config["format"] = options.format == OutputFormat::Csv ? "csv" : "json";
    config["metric"] = std::string(metric_name(options.metric));
    if (options.default_weight) {
        config["default_weight"] = *options.default_weight;
    }
    config["match_rules"] = {
        {"require_university_match", options.require_university_match},
        {"name_policy", std::string(name_policy_label(options.name_policy))},
        {"ambiguity_policy", std::string(ambiguity_policy_label(options.ambiguity_policy))},
    };
    m["config"] = std::move(config);

    json counts;
    counts["publications"] = in.corpus.publications().size();
    counts["journals"] = in.corpus.journals().size();
    counts["institutions"] = in.corpus.institutions().size();
    counts["specialties"] = in.config.specialties.size();
    counts["territories"] = {
        {"lau", in.territory.nodes(TerritoryLevel::Lau).size()},
        {"nuts3", in.territory.nodes(TerritoryLevel::Nuts3).size()},
        {"nuts2", in.territory.nodes(TerritoryLevel::Nuts2).size()},
        {"nuts1", in.territory.nodes(TerritoryLevel::Nuts1).size()},
    };
    if (scored) counts["professors"] = scored->professors.scores.size();
    m["counts"] = std::move(counts);

    json unresolved = json::array();
    std::size_t unresolved_count = 0;
    for (std::size_t i = 0; i < in.addresses.size(); ++i) {
        if (in.addresses[i].kind != AddressKind::Unresolved) continue;
        ++unresolved_count;
        if (unresolved.size() < 50) {
            unresolved.push_back(in.corpus.institutions()[i].institution_id);
        }
    }
    m["unresolved_addresses"] = {{"count", unresolved_count}, {"institution_ids", unresolved}};

    if (scored) {
        json degenerate = json::array();
        std::size_t degenerate_count = 0;
        for (const auto& cell : scored->baselines.cells()) {
            if (!cell.citation_degenerate() && !cell.if_degenerate()) continue;
            ++degenerate_count;
            if (degenerate.size() < 50) {
                degenerate.push_back(std::to_string(cell.year) + ":" + cell.sc_code);
            }
        }
        m["degenerate_baselines"] = {{"count", degenerate_count}, {"cells", degenerate}};

        json sds_groups = json::array();
        for (const auto& group : scored->professors.groups) {
            if (group.degenerate) sds_groups.push_back(group.sds_code);
        }
        m["degenerate_sds_groups"] = std::move(sds_groups);

        json specialties = json::array();
        for (const auto& nat : scored->territory_scores.nationals) {
            if (nat.degenerate) specialties.push_back(nat.specialty);
        }
        m["degenerate_specialties"] = std::move(specialties);
    }

    ManifestInfo info;
    info.digest = to_hex16(fnv1a64(m.dump(2)));
    m["digest"] = info.digest;
    info.document = std::move(m);
    return info;
}

void write_manifest(const std::filesystem::path& out_dir, const ManifestInfo& manifest) {
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    if (!out) {
        throw ComputationError("cannot write " + (out_dir / "manifest.json").string());
    }
    out << manifest.document.dump(2) << "\n";
}

// ---- emission helpers ----

std::string fixed6(double v) { return format_fixed6(v); }

CsvWriter open_csv(const std::filesystem::path& out_dir, const std::string& name,
                   const ManifestInfo& manifest) {
    CsvWriter w(out_dir / name);
    w.comment("manifest " + manifest.digest);
    return w;
}

void write_json_file(const std::filesystem::path& out_dir, const std::string& name,
                     json document, const ManifestInfo& manifest) {
    document["manifest"] = manifest.digest;
    std::ofstream out(out_dir / name, std::ios::binary);
    if (!out) throw ComputationError("cannot write " + (out_dir / name).string());
    out << document.dump(2) << "\n";
}

void emit_summary(const std::filesystem::path& out_dir, const SummaryReport& report,
                  const ManifestInfo& manifest, OutputFormat format) {
    if (format == OutputFormat::Json) {
        json rows = json::array();
        auto row_json = [](const SpecialtySummary& s) {
            return json{{"specialty", s.specialty},
                        {"publications", s.publications},
                        {"citations", s.citations},
                        {"authorships", s.authorships},
                        {"nuts3_count", s.nuts3_count},
                        {"nuts2_count", s.nuts2_count}};
        };
        for (const auto& s : report.rows) rows.push_back(row_json(s));
        json doc;
        doc["rows"] = std::move(rows);
        doc["total"] = row_json(report.total);
        write_json_file(out_dir, "summary.json", std::move(doc), manifest);
        return;
    }
    CsvWriter w = open_csv(out_dir, "summary.csv", manifest);
    w.row({"specialty", "publications", "citations", "authorships", "nuts3_count", "nuts2_count"});
    auto emit_row = [&w](const SpecialtySummary& s) {
        w.row({s.specialty, std::to_string(s.publications), std::to_string(s.citations),
               std::to_string(s.authorships), std::to_string(s.nuts3_count),
               std::to_string(s.nuts2_count)});
    };
    for (const auto& s : report.rows) emit_row(s);
    emit_row(report.total);
}

void emit_baselines(const std::filesystem::path& out_dir, const BaselineTable& baselines,
                    const ManifestInfo& manifest) {
    CsvWriter w = open_csv(out_dir, "baselines.csv", manifest);
    w.row({"year", "sc_code", "mean_citations_of_cited", "mean_if", "cited_count", "total_count",
           "degenerate_flag"});
    for (const BaselineCell& cell : baselines.cells()) {
        const bool degenerate = cell.citation_degenerate() || cell.if_degenerate();
        w.row({std::to_string(cell.year), cell.sc_code, fixed6(cell.mean_citations()),
               fixed6(cell.mean_impact_factor()), std::to_string(cell.cited_publication_count),
               std::to_string(cell.publication_count), degenerate ? "1" : "0"});
    }
}

void emit_impact(const std::filesystem::path& out_dir,
                 const std::vector<PublicationScore>& scores, const ManifestInfo& manifest) {
    CsvWriter w = open_csv(out_dir, "impact.csv", manifest);
    w.row({"pub_id", "fnc", "fnif", "c"});
    for (const PublicationScore& s : scores) {
        w.row({s.pub_id, fixed6(s.fnc), fixed6(s.fnif), fixed6(s.impact)});
    }
}

void emit_credit(const std::filesystem::path& out_dir,
                 const std::vector<PublicationCredit>& credits, const Corpus& corpus,
                 const std::vector<ResolvedAddress>& addresses, const ManifestInfo& manifest) {
    CsvWriter w = open_csv(out_dir, "credit.csv", manifest);
    w.row({"pub_id", "position", "author_weight", "institution_id", "lau_code", "share"});
    const InstitutionRecord* base = corpus.institutions().data();
    for (const PublicationCredit& credit : credits) {
        for (const AuthorCredit& author : credit.authors) {
            for (const auto& [institution_id, share] : author.shares) {
                const InstitutionRecord* inst = corpus.find_institution(institution_id);
                const ResolvedAddress& addr =
                    addresses[static_cast<std::size_t>(inst - base)];
                w.row({credit.pub_id, std::to_string(author.position), fixed6(author.weight),
                       institution_id, addr.kind == AddressKind::Lau ? addr.lau_code : "",
                       fixed6(share)});
            }
        }
    }
}

void emit_matches(const std::filesystem::path& out_dir, const MatchResult& matches,
                  const ManifestInfo& manifest) {
    CsvWriter w = open_csv(out_dir, "matches.csv", manifest);
    w.row({"pub_id", "position", "professor_id", "status", "candidates"});

    struct Line {
        std::string pub_id;
        int position;
        std::string professor_id;
        const char* status;
        std::string candidates;
    };
    std::vector<Line> lines;
    lines.reserve(matches.assignments.size() + matches.unmatched.size() +
                  matches.ambiguous.size());
    for (const Assignment& a : matches.assignments) {
        lines.push_back({a.pub_id, a.position, a.professor_id, "assigned", ""});
    }
    for (const BylineRef& r : matches.unmatched) {
        lines.push_back({r.pub_id, r.position, "", "unmatched", ""});
    }
    for (const AmbiguousCase& c : matches.ambiguous) {
        lines.push_back({c.pub_id, c.position, "", "ambiguous", join(c.candidates, ";")});
    }
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        return std::tie(a.pub_id, a.position) < std::tie(b.pub_id, b.position);
    });
    for (const Line& l : lines) {
        w.row({l.pub_id, std::to_string(l.position), l.professor_id, l.status, l.candidates});
    }
}

void emit_match_quality(const std::filesystem::path& out_dir, const MatchQuality& quality,
                        const ManifestInfo& manifest) {
    json doc;
    doc["tp"] = quality.tp;
    doc["fp"] = quality.fp;
    doc["fn"] = quality.fn;
    doc["precision"] = quality.precision;
    doc["recall"] = quality.recall;
    doc["f_measure"] = quality.f_measure;
    write_json_file(out_dir, "match_quality.json", std::move(doc), manifest);
}

void emit_professor_scores(const std::filesystem::path& out_dir, const ProfessorScoreSet& set,
                           const ManifestInfo& manifest) {
    CsvWriter w = open_csv(out_dir, "professors_scores.csv", manifest);
    w.row({"professor_id", "sds_code", "raw_fss", "normalized_fss"});
    for (const ProfessorScore& s : set.scores) {
        w.row({s.professor_id, s.sds_code, fixed6(s.raw_fss), fixed6(s.normalized_fss)});
    }
}

void emit_territory_scores(const std::filesystem::path& out_dir, const TerritoryScoreSet& set,
                           const ManifestInfo& manifest) {
    CsvWriter w = open_csv(out_dir, "territory_scores.csv", manifest);
    w.row({"territory_code", "level", "specialty", "kc", "kc_pc", "normalized_kc_pc",
           "mean_normalized_fss", "professor_count", "low_headcount_flag"});
    for (const TerritoryScore& row : set.rows) {
        w.row({row.territory_code, std::string(level_name(row.level)), row.specialty,
               fixed6(row.kc), fixed6(row.kc_pc), fixed6(row.normalized_kc_pc),
               row.has_fss ? fixed6(row.mean_normalized_fss) : "",
               std::to_string(row.professor_count), row.low_headcount() ? "1" : "0"});
    }
}

void emit_scatter(const std::filesystem::path& out_dir, const ScatterData& data,
                  TerritoryLevel level, const std::string& specialty,
                  const ManifestInfo& manifest, OutputFormat format) {
    const std::string stem =
        "scatter_" + std::string(level_name(level)) + "_" + specialty_slug(specialty);
    if (format == OutputFormat::Json) {
        json rows = json::array();
        for (const ScatterRow& r : data.rows) {
            rows.push_back({{"territory_code", r.territory_code},
                            {"territory_name", r.territory_name},
                            {"normalized_kc_pc", r.x},
                            {"mean_normalized_fss", r.y},
                            {"quadrant", std::string(quadrant_name(r.quadrant))},
                            {"professor_count", r.professor_count},
                            {"low_headcount_flag", r.low_headcount}});
        }
        json excluded = json::array();
        for (const ExcludedTerritory& e : data.excluded) {
            excluded.push_back({{"territory_code", e.territory_code},
                                {"territory_name", e.territory_name},
                                {"reason", e.reason}});
        }
        json doc;
        doc["level"] = std::string(level_name(level));
        doc["specialty"] = specialty;
        doc["rows"] = std::move(rows);
        doc["excluded"] = std::move(excluded);
        write_json_file(out_dir, stem + ".json", std::move(doc), manifest);
        return;
    }
    {
        CsvWriter w = open_csv(out_dir, stem + ".csv", manifest);
        w.row({"territory_code", "territory_name", "normalized_kc_pc", "mean_normalized_fss",
               "quadrant", "professor_count", "low_headcount_flag"});
        for (const ScatterRow& r : data.rows) {
            w.row({r.territory_code, r.territory_name, fixed6(r.x), fixed6(r.y),
                   std::string(quadrant_name(r.quadrant)), std::to_string(r.professor_count),
                   r.low_headcount ? "1" : "0"});
        }
    }
    CsvWriter w = open_csv(out_dir, stem + "_excluded.csv", manifest);
    w.row({"territory_code", "territory_name", "reason"});
    for (const ExcludedTerritory& e : data.excluded) {
        w.row({e.territory_code, e.territory_name, e.reason});
    }
}

void emit_choropleth(const std::filesystem::path& out_dir, const ChoroplethData& data,
                     TerritoryLevel level, const std::string& label, const ManifestInfo& manifest,
                     OutputFormat format) {
    const std::string stem = "choropleth_" + std::string(level_name(level)) + "_" + label;
    if (format == OutputFormat::Json) {
        json rows = json::array();
        for (const ChoroplethRow& r : data.rows) {
            rows.push_back({{"territory_code", r.territory_code},
                            {"territory_name", r.territory_name},
                            {"value", r.value}});
        }
        json doc;
        doc["level"] = std::string(level_name(level));
        doc["min"] = data.min;
        doc["max"] = data.max;
        doc["mean"] = data.mean;
        doc["rows"] = std::move(rows);
        write_json_file(out_dir, stem + ".json", std::move(doc), manifest);
        return;
    }
    CsvWriter w = open_csv(out_dir, stem + ".csv", manifest);
    w.comment("min " + fixed6(data.min));
    w.comment("max " + fixed6(data.max));
    w.comment("mean " + fixed6(data.mean));
    w.row({"territory_code", "territory_name", "value"});
    for (const ChoroplethRow& r : data.rows) {
        w.row({r.territory_code, r.territory_name, fixed6(r.value)});
    }
}

void emit_region_overview(const std::filesystem::path& out_dir, const RegionOverview& overview,
                          const ManifestInfo& manifest, OutputFormat format) {
    if (format == OutputFormat::Json) {
        json rows = json::array();
        for (const RegionOverviewRow& r : overview.rows) {
            json kcpc = json::object();
            json fss = json::object();
            for (std::size_t s = 0; s < overview.specialties.size(); ++s) {
                kcpc[overview.specialties[s]] = r.kcpc_by_specialty[s];
                fss[overview.specialties[s]] =
                    r.fss_present[s] ? json(r.fss_by_specialty[s]) : json(nullptr);
            }
            rows.push_back({{"region_code", r.region_code},
                            {"region_name", r.region_name},
                            {"kcpc", std::move(kcpc)},
                            {"kcpc_total", r.kcpc_total},
                            {"fss", std::move(fss)},
                            {"fss_total", r.fss_total_present ? json(r.fss_total) : json(nullptr)}});
        }
        json doc;
        doc["specialties"] = overview.specialties;
        doc["rows"] = std::move(rows);
        write_json_file(out_dir, "region_overview.json", std::move(doc), manifest);
        return;
    }
    CsvWriter w = open_csv(out_dir, "region_overview.csv", manifest);
    std::vector<std::string> header = {"region_code", "region_name"};
    for (const std::string& s : overview.specialties) header.push_back("kcpc_" + specialty_slug(s));
    header.push_back("kcpc_total");
    for (const std::string& s : overview.specialties) header.push_back("fss_" + specialty_slug(s));
    header.push_back("fss_total");
    w.row(header);
    for (const RegionOverviewRow& r : overview.rows) {
        std::vector<std::string> fields = {r.region_code, r.region_name};
        for (double v : r.kcpc_by_specialty) fields.push_back(fixed6(v));
        fields.push_back(fixed6(r.kcpc_total));
        for (std::size_t s = 0; s < overview.specialties.size(); ++s) {
            fields.push_back(r.fss_present[s] ? fixed6(r.fss_by_specialty[s]) : "");
        }
        fields.push_back(r.fss_total_present ? fixed6(r.fss_total) : "");
        w.row(fields);
    }
}

void ensure_out_dir(const PipelineOptions& options) {
    if (options.out_dir.empty()) {
        throw ValidationError("missing required output directory: --out");
    }
    std::filesystem::create_directories(options.out_dir);
}

std::map<std::string, double> load_series(const std::filesystem::path& path) {
    CsvReader csv(path);
    const std::size_t col_code = csv.require_column("code");
    const std::size_t col_value = csv.require_column("value");
    std::map<std::string, double> out;
    CsvReader::Row row;
    while (csv.next(row)) {
        const std::string context = csv.name() + " line " + std::to_string(row.line_no);
        const std::string& code = row.fields[col_code];
        if (code.empty()) throw ValidationError(context + ": empty code");
        double value = 0.0;
        try {
            std::size_t consumed = 0;
            value = std::stod(row.fields[col_value], &consumed);
            if (consumed != row.fields[col_value].size()) throw std::invalid_argument("t");
        } catch (const std::exception&) {
            throw ValidationError(context + ": value is not a number");
        }
        if (!out.emplace(code, value).second) {
            throw ValidationError(context + ": duplicate series row for " + code);
        }
    }
    return out;
}

void check_specialty_flag(const SpecialtyConfig& config, const std::string& specialty) {
    if (specialty == kOverallSpecialty) return;
    if (!config.find_specialty(specialty)) {
        throw ValidationError("unknown specialty '" + specialty +
                              "'; pass a configured name or 'overall'");
    }
}

} // namespace

std::string specialty_slug(std::string_view specialty) {
    std::string slug;
    for (char c : specialty) {
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            slug.push_back(c);
        } else if (c >= 'A' && c <= 'Z') {
            slug.push_back(static_cast<char>(c - 'A' + 'a'));
        } else {
            slug.push_back('_');
        }
    }
    return slug;
}

void run_validate(const PipelineOptions& options, std::ostream& log) {
    LoadedInputs in = load_inputs(options, log);
    if (!options.roster_path.empty() || !options.costs_path.empty()) {
        Roster roster = load_roster_stage(options, in.config, log);
        stage("roster", [&] {
            for (const ProfessorRecord& prof : roster.professors) {
                if (!in.corpus.find_institution(prof.university_id)) {
                    throw ValidationError("professor " + prof.professor_id +
                                          " lists unknown university '" + prof.university_id +
                                          "'");
                }
            }
            return 0;
        });
    }
    if (!options.weights_path.empty()) {
        stage("normalize", [&] { return load_weight_entries(options.weights_path); });
    }
    if (!options.gold_path.empty()) {
        stage("match", [&] { return load_gold(options.gold_path); });
    }
    log << "validate: all inputs pass\n";
}

void run_summary(const PipelineOptions& options, std::ostream& log) {
    LoadedInputs in = load_inputs(options, log);
    ensure_out_dir(options);
    const ExecMode mode = exec_mode(options);
    std::vector<PublicationCredit> credits =
        stage("credit", [&] { return credit_corpus(in.corpus, in.addresses, mode); });
    SummaryReport report = stage("summary", [&] {
        return compute_summary(in.corpus, credits, in.territory, in.config);
    });
    ManifestInfo manifest = build_manifest(options, in, "summary", nullptr);
    stage("emit", [&] {
        emit_summary(options.out_dir, report, manifest, options.format);
        write_manifest(options.out_dir, manifest);
        return 0;
    });
    log << "summary: " << report.total.publications << " distinct publications across "
        << report.rows.size() << " specialties\n";
}

namespace {

void emit_score_outputs(const PipelineOptions& options, const LoadedInputs& in,
                        const ScoredState& st, const ManifestInfo& manifest) {
    emit_baselines(options.out_dir, st.baselines, manifest);
    emit_impact(options.out_dir, st.pub_scores, manifest);
    emit_credit(options.out_dir, st.credits, in.corpus, in.addresses, manifest);
    emit_matches(options.out_dir, st.matches, manifest);
    emit_professor_scores(options.out_dir, st.professors, manifest);
    emit_territory_scores(options.out_dir, st.territory_scores, manifest);
    write_manifest(options.out_dir, manifest);
}

MatchQuality eval_gold(const PipelineOptions& options, const LoadedInputs& in,
                       const MatchResult& matches) {
    return stage("match", [&] {
        std::vector<Assignment> gold = load_gold(options.gold_path);
        return evaluate_matching(matches, gold, in.corpus);
    });
}

} // namespace

void run_score(const PipelineOptions& options, std::ostream& log) {
    LoadedInputs in = load_inputs(options, log);
    ensure_out_dir(options);
    ScoredState st = run_scoring(options, in, log);
    ManifestInfo manifest = build_manifest(options, in, "score", &st);
    stage("emit", [&] {
        emit_score_outputs(options, in, st, manifest);
        if (!options.gold_path.empty()) {
            emit_match_quality(options.out_dir, eval_gold(options, in, st.matches), manifest);
        }
        return 0;
    });
    log << "score: outputs written to " << options.out_dir.string() << "\n";
}

void run_report(const PipelineOptions& options, std::ostream& log) {
    LoadedInputs in = load_inputs(options, log);
    stage("config", [&] {
        check_specialty_flag(in.config, options.specialty);
        return 0;
    });
    ensure_out_dir(options);
    ScoredState st = run_scoring(options, in, log);
    ManifestInfo manifest = build_manifest(options, in, "report", &st);
    stage("emit", [&] {
        emit_score_outputs(options, in, st, manifest);
        if (!options.gold_path.empty()) {
            emit_match_quality(options.out_dir, eval_gold(options, in, st.matches), manifest);
        }

        ScatterData scatter =
            build_scatter(st.territory_scores, in.territory, options.level, options.specialty);
        emit_scatter(options.out_dir, scatter, options.level, options.specialty, manifest,
                     options.format);

        ChoroplethData choropleth = build_choropleth(st.territory_scores, in.territory,
                                                     options.level, options.specialty,
                                                     options.metric);
        emit_choropleth(options.out_dir, choropleth, options.level,
                        specialty_slug(options.specialty) + "_" +
                            std::string(metric_name(options.metric)),
                        manifest, options.format);

        if (!options.series_path.empty()) {
            std::map<std::string, double> series = load_series(options.series_path);
            ChoroplethData external =
                build_choropleth_series(series, in.territory, options.level);
            emit_choropleth(options.out_dir, external, options.level, "series", manifest,
                            options.format);
        }

        RegionOverview overview =
            build_region_overview(st.territory_scores, in.territory, in.config);
        emit_region_overview(options.out_dir, overview, manifest, options.format);

        SummaryReport summary = compute_summary(in.corpus, st.credits, in.territory, in.config);
        emit_summary(options.out_dir, summary, manifest, options.format);
        return 0;
    });
    log << "report: outputs written to " << options.out_dir.string() << "\n";
}

void run_match_eval(const PipelineOptions& options, std::ostream& log) {
    LoadedInputs in = load_inputs(options, log);
    ensure_out_dir(options);
    const ExecMode mode = exec_mode(options);
    Roster roster = load_roster_stage(options, in.config, log);
    MatchResult matches = stage("match", [&] {
        MatchRuleConfig rules(options.require_university_match, options.name_policy,
                              options.ambiguity_policy);
        return match_authorships(in.corpus, roster, rules, mode);
    });
    stage("match", [&] {
        require_input(options.gold_path, "--gold");
        return 0;
    });
    MatchQuality quality = eval_gold(options, in, matches);
    ManifestInfo manifest = build_manifest(options, in, "match-eval", nullptr);
    stage("emit", [&] {
        emit_matches(options.out_dir, matches, manifest);
        emit_match_quality(options.out_dir, quality, manifest);
        write_manifest(options.out_dir, manifest);
        return 0;
    });
    log << "match-eval: P " << quality.precision << " R " << quality.recall << " F "
        << quality.f_measure << "\n";
}

} // namespace kcmap
