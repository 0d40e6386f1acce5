#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kcmap {

struct AuthorshipEntry {
    std::string raw_name;                   // surname + initials as printed
    std::vector<std::string> affiliations;  // institution ids, never empty
    int position = 0;                       // 1-based byline position
};

struct PublicationRecord {
    std::string pub_id;
    int year = 0;
    std::string doi; // may be empty
    std::string journal_id;
    std::vector<std::string> subject_categories;
    long long citation_count = 0; // as observed at the census date
    std::vector<AuthorshipEntry> byline; // listed author order
};

struct InstitutionRecord {
    std::string institution_id;
    std::string name;
    std::string city;
    std::string country;
    // LAU of the institution. Empty for foreign institutions, and for
    // domestic ones whose city still needs resolving against the gazetteer.
    std::string lau_code;
};

struct JournalRecord {
    std::string journal_id;
    std::map<int, double> impact_factor_by_year;
    std::vector<std::string> subject_categories;

    std::optional<double> impact_factor(int year) const {
        auto it = impact_factor_by_year.find(year);
        if (it == impact_factor_by_year.end()) return std::nullopt;
        return it->second;
    }
};

struct ProfessorRecord {
    std::string professor_id;
    std::string full_name;
    std::string university_id;
    std::string sds_code;
    std::vector<int> active_years; // within the observation window, sorted
    std::string rank;

    int years_active() const { return static_cast<int>(active_years.size()); }
};

struct CostParameters {
    std::string sds_code;
    double yearly_salary = 0;  // w_r of the field
    double yearly_capital = 0; // k of the field

    // Yearly research cost: half the salary plus the research capital.
    double cost_divisor() const { return yearly_salary / 2.0 + yearly_capital; }
};

struct WeightEntry {
    int year = 0;
    std::string sc_code;
    double citation_weight = 0; // weight on normalized citations, in [0,1]
};

struct Specialty {
    std::string name;
    std::vector<std::string> sc_codes;
    std::vector<std::string> sds_codes;
};

struct SpecialtyConfig {
    std::string country = "Italy";
    int window_start = 0;
    int window_end = 0;
    std::string census_date;
    std::vector<Specialty> specialties;

    const Specialty* find_specialty(std::string_view name) const;
};

/// Immutable, validated view of the publication inputs. Records are kept
/// sorted by id, so identical content loads to the identical corpus whatever
/// the input row order.
class Corpus {
public:
    Corpus() = default;

    /// Validates and indexes the records. Throws ValidationError on any
    /// invariant violation, dangling reference, duplicate id, missing
    /// journal impact factor for a publication year, or publication without
    /// a single domestic affiliation.
    static Corpus from_records(std::vector<PublicationRecord> publications,
                               std::vector<JournalRecord> journals,
                               std::vector<InstitutionRecord> institutions,
                               std::string analysis_country);

    const std::vector<PublicationRecord>& publications() const { return publications_; }
    const std::vector<JournalRecord>& journals() const { return journals_; }
    const std::vector<InstitutionRecord>& institutions() const { return institutions_; }
    const std::string& analysis_country() const { return analysis_country_; }

    const PublicationRecord* find_publication(std::string_view pub_id) const;
    const JournalRecord* find_journal(std::string_view journal_id) const;
    const InstitutionRecord* find_institution(std::string_view institution_id) const;

    bool is_domestic(const InstitutionRecord& inst) const;

private:
    std::vector<PublicationRecord> publications_;
    std::vector<JournalRecord> journals_;
    std::vector<InstitutionRecord> institutions_;
    std::unordered_map<std::string, std::size_t> publication_index_;
    std::unordered_map<std::string, std::size_t> journal_index_;
    std::unordered_map<std::string, std::size_t> institution_index_;
    std::string analysis_country_;
    std::string folded_country_;
};

struct Roster {
    std::vector<ProfessorRecord> professors; // sorted by professor_id
    std::map<std::string, CostParameters> costs_by_sds;

    const ProfessorRecord* find(std::string_view professor_id) const;
    const CostParameters& costs_for(std::string_view sds_code) const;
};

/// Loads and validates the publication corpus from a JSON-lines publications
/// file and the journals/institutions tables.
Corpus load_corpus(const std::filesystem::path& publications_path,
                   const std::filesystem::path& journals_path,
                   const std::filesystem::path& institutions_path,
                   const std::string& analysis_country);

/// Loads the roster and cost tables. Active years outside the observation
/// window are dropped; a professor left with none is an error, as is an SDS
/// in use without a cost row.
Roster load_roster(const std::filesystem::path& roster_path,
                   const std::filesystem::path& costs_path,
                   int window_start, int window_end);

std::vector<WeightEntry> load_weight_entries(const std::filesystem::path& weights_path);

SpecialtyConfig load_specialty_config(const std::filesystem::path& config_path);

} // namespace kcmap
