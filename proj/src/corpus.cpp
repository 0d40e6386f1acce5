#include "kcmap/corpus.hpp"

#include "kcmap/csv.hpp"
#include "kcmap/errors.hpp"
#include "kcmap/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace kcmap {

using nlohmann::json;

namespace {

long long parse_int_field(const std::string& value, const std::string& context) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ValidationError(context + ": not an integer: '" + value + "'");
    }
    return out;
}

double parse_double_field(const std::string& value, const std::string& context) {
    try {
        std::size_t consumed = 0;
        double out = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument("trailing");
        return out;
    } catch (const std::exception&) {
        throw ValidationError(context + ": not a number: '" + value + "'");
    }
}

std::string jsonl_context(const std::filesystem::path& path, std::size_t line_no) {
    return path.filename().string() + " line " + std::to_string(line_no);
}

const json& require_key(const json& obj, const char* key, const std::string& context) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(context + ": missing field '" + key + "'");
    return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& context) {
    const json& v = require_key(obj, key, context);
    if (!v.is_string()) throw ValidationError(context + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

long long require_integer(const json& obj, const char* key, const std::string& context) {
    const json& v = require_key(obj, key, context);
    if (!v.is_number_integer()) {
        throw ValidationError(context + ": field '" + key + "' must be an integer");
    }
    return v.get<long long>();
}

std::vector<PublicationRecord> parse_publications(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open publications file: " + path.string());

    std::vector<PublicationRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        const std::string context = jsonl_context(path, line_no);

        json obj;
        try {
            obj = json::parse(body);
        } catch (const json::exception& e) {
            throw ValidationError(context + ": invalid JSON (" + e.what() + ")");
        }
        if (!obj.is_object()) throw ValidationError(context + ": expected a JSON object");

        PublicationRecord rec;
        rec.pub_id = require_string(obj, "pub_id", context);
        if (rec.pub_id.empty()) throw ValidationError(context + ": empty pub_id");
        rec.year = static_cast<int>(require_integer(obj, "year", context));
        if (rec.year <= 0) throw ValidationError(context + ": field 'year' must be positive");
        if (auto it = obj.find("doi"); it != obj.end() && !it->is_null()) {
            if (!it->is_string()) throw ValidationError(context + ": field 'doi' must be a string");
            rec.doi = it->get<std::string>();
        }
        rec.journal_id = require_string(obj, "journal_id", context);
        rec.citation_count = require_integer(obj, "citation_count", context);
        if (rec.citation_count < 0) {
            throw ValidationError(context + " (pub " + rec.pub_id +
                                  "): citation_count must be non-negative");
        }

        const json& scs = require_key(obj, "subject_categories", context);
        if (!scs.is_array() || scs.empty()) {
            throw ValidationError(context + " (pub " + rec.pub_id +
                                  "): subject_categories must be a non-empty array");
        }
        for (const auto& sc : scs) {
            if (!sc.is_string() || sc.get<std::string>().empty()) {
                throw ValidationError(context + " (pub " + rec.pub_id +
                                      "): subject_categories entries must be non-empty strings");
            }
            rec.subject_categories.push_back(sc.get<std::string>());
        }

        const json& byline = require_key(obj, "byline", context);
        if (!byline.is_array() || byline.empty()) {
            throw ValidationError(context + " (pub " + rec.pub_id +
                                  "): byline must be a non-empty array");
        }
        for (const auto& entry : byline) {
            if (!entry.is_object()) {
                throw ValidationError(context + " (pub " + rec.pub_id +
                                      "): byline entries must be objects");
            }
            AuthorshipEntry author;
            author.raw_name = require_string(entry, "name", context);
            author.position = static_cast<int>(require_integer(entry, "position", context));
            const json& affs = require_key(entry, "affiliations", context);
            if (!affs.is_array() || affs.empty()) {
                throw ValidationError(context + " (pub " + rec.pub_id + ", position " +
                                      std::to_string(author.position) +
                                      "): affiliations must be non-empty");
            }
            for (const auto& a : affs) {
                if (!a.is_string() || a.get<std::string>().empty()) {
                    throw ValidationError(context + " (pub " + rec.pub_id +
                                          "): affiliation ids must be non-empty strings");
                }
                author.affiliations.push_back(a.get<std::string>());
            }
            rec.byline.push_back(std::move(author));
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<JournalRecord> parse_journals(const std::filesystem::path& path) {
    CsvReader csv(path);
    const std::size_t col_id = csv.require_column("journal_id");
    const std::size_t col_year = csv.require_column("year");
    const std::size_t col_if = csv.require_column("impact_factor");
    const std::size_t col_scs = csv.require_column("sc_codes");

    std::map<std::string, JournalRecord> by_id;
    CsvReader::Row row;
    while (csv.next(row)) {
        const std::string context = csv.name() + " line " + std::to_string(row.line_no);
        const std::string& id = row.fields[col_id];
        if (id.empty()) throw ValidationError(context + ": empty journal_id");
        int year = static_cast<int>(parse_int_field(row.fields[col_year], context));
        double impact = parse_double_field(row.fields[col_if], context);
        if (impact < 0) {
            throw ValidationError(context + " (journal " + id +
                                  "): impact_factor must be non-negative");
        }
        std::vector<std::string> scs = split_list(row.fields[col_scs], ';');
        if (scs.empty()) {
            throw ValidationError(context + " (journal " + id + "): sc_codes must be non-empty");
        }
        std::sort(scs.begin(), scs.end());
        scs.erase(std::unique(scs.begin(), scs.end()), scs.end());

        auto [it, inserted] = by_id.try_emplace(id);
        JournalRecord& rec = it->second;
        if (inserted) {
            rec.journal_id = id;
            rec.subject_categories = std::move(scs);
        } else if (rec.subject_categories != scs) {
            throw ValidationError(context + ": journal " + id +
                                  " lists different sc_codes than an earlier row");
        }
        if (!rec.impact_factor_by_year.emplace(year, impact).second) {
            throw ValidationError(context + ": duplicate impact factor row for journal " + id +
                                  " year " + std::to_string(year));
        }
    }

    std::vector<JournalRecord> out;
    out.reserve(by_id.size());
    for (auto& [id, rec] : by_id) out.push_back(std::move(rec));
    return out;
}

std::vector<InstitutionRecord> parse_institutions(const std::filesystem::path& path) {
    CsvReader csv(path);
    const std::size_t col_id = csv.require_column("institution_id");
    const std::size_t col_name = csv.require_column("name");
    const std::size_t col_city = csv.require_column("city");
    const std::size_t col_country = csv.require_column("country");
    const std::size_t col_lau = csv.require_column("lau_code");

    std::vector<InstitutionRecord> out;
    CsvReader::Row row;
    while (csv.next(row)) {
        const std::string context = csv.name() + " line " + std::to_string(row.line_no);
        InstitutionRecord rec;
        rec.institution_id = row.fields[col_id];
        if (rec.institution_id.empty()) throw ValidationError(context + ": empty institution_id");
        rec.name = row.fields[col_name];
        rec.city = row.fields[col_city];
        rec.country = row.fields[col_country];
        if (rec.country.empty()) {
            throw ValidationError(context + " (institution " + rec.institution_id +
                                  "): empty country");
        }
        rec.lau_code = row.fields[col_lau];
        out.push_back(std::move(rec));
    }
    return out;
}

} // namespace

const Specialty* SpecialtyConfig::find_specialty(std::string_view name) const {
    for (const auto& s : specialties) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

Corpus Corpus::from_records(std::vector<PublicationRecord> publications,
                            std::vector<JournalRecord> journals,
                            std::vector<InstitutionRecord> institutions,
                            std::string analysis_country) {
    Corpus corpus;
    corpus.analysis_country_ = std::move(analysis_country);
    corpus.folded_country_ = fold_name(corpus.analysis_country_);

    std::sort(journals.begin(), journals.end(),
              [](const auto& a, const auto& b) { return a.journal_id < b.journal_id; });
    for (std::size_t i = 0; i < journals.size(); ++i) {
        const JournalRecord& j = journals[i];
        if (j.subject_categories.empty()) {
            throw ValidationError("journal " + j.journal_id + " has no subject categories");
        }
        for (const auto& [year, impact] : j.impact_factor_by_year) {
            if (impact < 0) {
                throw ValidationError("journal " + j.journal_id + " year " +
                                      std::to_string(year) + ": negative impact factor");
            }
        }
        if (!corpus.journal_index_.emplace(j.journal_id, i).second) {
            throw ValidationError("duplicate journal_id: " + j.journal_id);
        }
    }
    corpus.journals_ = std::move(journals);

    std::sort(institutions.begin(), institutions.end(),
              [](const auto& a, const auto& b) { return a.institution_id < b.institution_id; });
    for (std::size_t i = 0; i < institutions.size(); ++i) {
        const InstitutionRecord& inst = institutions[i];
        if (!corpus.institution_index_.emplace(inst.institution_id, i).second) {
            throw ValidationError("duplicate institution_id: " + inst.institution_id);
        }
        bool domestic = fold_name(inst.country) == corpus.folded_country_;
        if (!domestic && !inst.lau_code.empty()) {
            throw ValidationError("institution " + inst.institution_id + " in " + inst.country +
                                  " carries LAU code " + inst.lau_code +
                                  " but is outside the analysis country");
        }
    }
    corpus.institutions_ = std::move(institutions);

    std::sort(publications.begin(), publications.end(),
              [](const auto& a, const auto& b) { return a.pub_id < b.pub_id; });
    for (std::size_t i = 0; i < publications.size(); ++i) {
        PublicationRecord& pub = publications[i];
        if (!corpus.publication_index_.emplace(pub.pub_id, i).second) {
            throw ValidationError("duplicate pub_id: " + pub.pub_id);
        }
        if (pub.citation_count < 0) {
            throw ValidationError("pub " + pub.pub_id + ": negative citation count");
        }
        if (pub.subject_categories.empty()) {
            throw ValidationError("pub " + pub.pub_id + ": no subject categories");
        }
        std::sort(pub.subject_categories.begin(), pub.subject_categories.end());
        pub.subject_categories.erase(
            std::unique(pub.subject_categories.begin(), pub.subject_categories.end()),
            pub.subject_categories.end());
        if (pub.byline.empty()) {
            throw ValidationError("pub " + pub.pub_id + ": empty byline");
        }

        auto journal_it = corpus.journal_index_.find(pub.journal_id);
        if (journal_it == corpus.journal_index_.end()) {
            throw ValidationError("pub " + pub.pub_id + " references unknown journal '" +
                                  pub.journal_id + "'");
        }
        const JournalRecord& journal = corpus.journals_[journal_it->second];
        if (!journal.impact_factor(pub.year)) {
            throw ValidationError("pub " + pub.pub_id + ": journal " + pub.journal_id +
                                  " has no impact factor for year " + std::to_string(pub.year));
        }

        std::sort(pub.byline.begin(), pub.byline.end(),
                  [](const auto& a, const auto& b) { return a.position < b.position; });
        bool any_domestic = false;
        for (std::size_t k = 0; k < pub.byline.size(); ++k) {
            const AuthorshipEntry& author = pub.byline[k];
            if (author.position != static_cast<int>(k) + 1) {
                throw ValidationError("pub " + pub.pub_id +
                                      ": byline positions must be unique and cover 1.." +
                                      std::to_string(pub.byline.size()));
            }
            if (author.affiliations.empty()) {
                throw ValidationError("pub " + pub.pub_id + " position " +
                                      std::to_string(author.position) + ": no affiliations");
            }
            for (const std::string& aff : author.affiliations) {
                auto inst_it = corpus.institution_index_.find(aff);
                if (inst_it == corpus.institution_index_.end()) {
                    throw ValidationError("pub " + pub.pub_id + " position " +
                                          std::to_string(author.position) +
                                          " references unknown institution '" + aff + "'");
                }
                if (corpus.is_domestic(corpus.institutions_[inst_it->second])) {
                    any_domestic = true;
                }
            }
        }
        if (!any_domestic) {
            throw ValidationError("pub " + pub.pub_id + ": no affiliation in " +
                                  corpus.analysis_country_ +
                                  "; publications without a domestic address do not belong to "
                                  "the corpus");
        }
    }
    corpus.publications_ = std::move(publications);
    return corpus;
}

const PublicationRecord* Corpus::find_publication(std::string_view pub_id) const {
    auto it = publication_index_.find(std::string(pub_id));
    return it == publication_index_.end() ? nullptr : &publications_[it->second];
}

const JournalRecord* Corpus::find_journal(std::string_view journal_id) const {
    auto it = journal_index_.find(std::string(journal_id));
    return it == journal_index_.end() ? nullptr : &journals_[it->second];
}

const InstitutionRecord* Corpus::find_institution(std::string_view institution_id) const {
    auto it = institution_index_.find(std::string(institution_id));
    return it == institution_index_.end() ? nullptr : &institutions_[it->second];
}

bool Corpus::is_domestic(const InstitutionRecord& inst) const {
    return fold_name(inst.country) == folded_country_;
}

const ProfessorRecord* Roster::find(std::string_view professor_id) const {
    auto it = std::lower_bound(professors.begin(), professors.end(), professor_id,
                               [](const ProfessorRecord& p, std::string_view id) {
                                   return p.professor_id < id;
                               });
    if (it == professors.end() || it->professor_id != professor_id) return nullptr;
    return &*it;
}

const CostParameters& Roster::costs_for(std::string_view sds_code) const {
    auto it = costs_by_sds.find(std::string(sds_code));
    if (it == costs_by_sds.end()) {
        throw ValidationError("no cost parameters for SDS '" + std::string(sds_code) + "'");
    }
    return it->second;
}

Corpus load_corpus(const std::filesystem::path& publications_path,
                   const std::filesystem::path& journals_path,
                   const std::filesystem::path& institutions_path,
                   const std::string& analysis_country) {
    auto journals = parse_journals(journals_path);
    auto institutions = parse_institutions(institutions_path);
    auto publications = parse_publications(publications_path);
    return Corpus::from_records(std::move(publications), std::move(journals),
                                std::move(institutions), analysis_country);
}

Roster load_roster(const std::filesystem::path& roster_path,
                   const std::filesystem::path& costs_path,
                   int window_start, int window_end) {
    Roster roster;
    {
        CsvReader csv(costs_path);
        const std::size_t col_sds = csv.require_column("sds_code");
        const std::size_t col_salary = csv.require_column("w_r");
        const std::size_t col_capital = csv.require_column("k");
        CsvReader::Row row;
        while (csv.next(row)) {
            const std::string context = csv.name() + " line " + std::to_string(row.line_no);
            CostParameters cp;
            cp.sds_code = row.fields[col_sds];
            if (cp.sds_code.empty()) throw ValidationError(context + ": empty sds_code");
            cp.yearly_salary = parse_double_field(row.fields[col_salary], context);
            cp.yearly_capital = parse_double_field(row.fields[col_capital], context);
            if (cp.yearly_salary <= 0) {
                throw ValidationError(context + " (SDS " + cp.sds_code +
                                      "): w_r must be positive");
            }
            if (cp.yearly_capital < 0) {
                throw ValidationError(context + " (SDS " + cp.sds_code +
                                      "): k must be non-negative");
            }
            if (cp.cost_divisor() <= 0) {
                throw ValidationError(context + " (SDS " + cp.sds_code +
                                      "): w_r/2 + k must be positive");
            }
            std::string key = cp.sds_code;
            if (!roster.costs_by_sds.emplace(key, std::move(cp)).second) {
                throw ValidationError(context + ": duplicate cost row for SDS " + key);
            }
        }
    }

    {
        CsvReader csv(roster_path);
        const std::size_t col_id = csv.require_column("professor_id");
        const std::size_t col_name = csv.require_column("full_name");
        const std::size_t col_univ = csv.require_column("university_id");
        const std::size_t col_sds = csv.require_column("sds_code");
        const std::size_t col_years = csv.require_column("active_years");
        const std::size_t col_rank = csv.require_column("rank");
        CsvReader::Row row;
        while (csv.next(row)) {
            const std::string context = csv.name() + " line " + std::to_string(row.line_no);
            ProfessorRecord rec;
            rec.professor_id = row.fields[col_id];
            if (rec.professor_id.empty()) throw ValidationError(context + ": empty professor_id");
            rec.full_name = row.fields[col_name];
            if (rec.full_name.empty()) {
                throw ValidationError(context + " (professor " + rec.professor_id +
                                      "): empty full_name");
            }
            rec.university_id = row.fields[col_univ];
            if (rec.university_id.empty()) {
                throw ValidationError(context + " (professor " + rec.professor_id +
                                      "): empty university_id");
            }
            rec.sds_code = row.fields[col_sds];
            if (rec.sds_code.empty()) {
                throw ValidationError(context + " (professor " + rec.professor_id +
                                      "): empty sds_code");
            }
            rec.rank = row.fields[col_rank];

            for (const std::string& y : split_list(row.fields[col_years], ';')) {
                int year = static_cast<int>(parse_int_field(y, context));
                if (year >= window_start && year <= window_end) rec.active_years.push_back(year);
            }
            std::sort(rec.active_years.begin(), rec.active_years.end());
            rec.active_years.erase(std::unique(rec.active_years.begin(), rec.active_years.end()),
                                   rec.active_years.end());
            if (rec.active_years.empty()) {
                throw ValidationError(context + ": professor " + rec.professor_id +
                                      " has no active years within the observation window " +
                                      std::to_string(window_start) + ".." +
                                      std::to_string(window_end));
            }
            if (roster.costs_by_sds.find(rec.sds_code) == roster.costs_by_sds.end()) {
                throw ValidationError(context + ": professor " + rec.professor_id +
                                      " has SDS '" + rec.sds_code + "' with no cost row");
            }
            roster.professors.push_back(std::move(rec));
        }
    }

    std::sort(roster.professors.begin(), roster.professors.end(),
              [](const auto& a, const auto& b) { return a.professor_id < b.professor_id; });
    for (std::size_t i = 1; i < roster.professors.size(); ++i) {
        if (roster.professors[i].professor_id == roster.professors[i - 1].professor_id) {
            throw ValidationError("duplicate professor_id: " + roster.professors[i].professor_id);
        }
    }
    return roster;
}

std::vector<WeightEntry> load_weight_entries(const std::filesystem::path& weights_path) {
    CsvReader csv(weights_path);
    const std::size_t col_year = csv.require_column("year");
    const std::size_t col_sc = csv.require_column("sc_code");
    const std::size_t col_w = csv.require_column("citation_weight");

    std::vector<WeightEntry> out;
    CsvReader::Row row;
    while (csv.next(row)) {
        const std::string context = csv.name() + " line " + std::to_string(row.line_no);
        WeightEntry entry;
        entry.year = static_cast<int>(parse_int_field(row.fields[col_year], context));
        entry.sc_code = row.fields[col_sc];
        if (entry.sc_code.empty()) throw ValidationError(context + ": empty sc_code");
        entry.citation_weight = parse_double_field(row.fields[col_w], context);
        if (entry.citation_weight < 0 || entry.citation_weight > 1) {
            throw ValidationError(context + ": citation_weight must lie in [0,1], got " +
                                  row.fields[col_w]);
        }
        out.push_back(std::move(entry));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.year, a.sc_code) < std::tie(b.year, b.sc_code);
    });
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i].year == out[i - 1].year && out[i].sc_code == out[i - 1].sc_code) {
            throw ValidationError(weights_path.string() + ": duplicate weight entry for year " +
                                  std::to_string(out[i].year) + " SC " + out[i].sc_code);
        }
    }
    return out;
}

SpecialtyConfig load_specialty_config(const std::filesystem::path& config_path) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ValidationError("cannot open specialties config: " + config_path.string());
    json obj;
    try {
        obj = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(config_path.string() + ": invalid JSON (" + e.what() + ")");
    }
    const std::string context = config_path.filename().string();
    if (!obj.is_object()) throw ValidationError(context + ": expected a JSON object");

    SpecialtyConfig config;
    if (auto it = obj.find("country"); it != obj.end()) {
        if (!it->is_string() || it->get<std::string>().empty()) {
            throw ValidationError(context + ": 'country' must be a non-empty string");
        }
        config.country = it->get<std::string>();
    }
    const json& window = require_key(obj, "observation_window", context);
    if (!window.is_array() || window.size() != 2 || !window[0].is_number_integer() ||
        !window[1].is_number_integer()) {
        throw ValidationError(context + ": 'observation_window' must be [start_year, end_year]");
    }
    config.window_start = window[0].get<int>();
    config.window_end = window[1].get<int>();
    if (config.window_start > config.window_end) {
        throw ValidationError(context + ": observation window start exceeds end");
    }
    config.census_date = require_string(obj, "census_date", context);
    if (config.census_date.empty()) {
        throw ValidationError(context + ": 'census_date' must be set");
    }

    const json& specialties = require_key(obj, "specialties", context);
    if (!specialties.is_array() || specialties.empty()) {
        throw ValidationError(context + ": 'specialties' must be a non-empty array");
    }
    std::set<std::string> seen;
    for (const auto& s : specialties) {
        if (!s.is_object()) throw ValidationError(context + ": specialty entries must be objects");
        Specialty spec;
        spec.name = require_string(s, "name", context);
        if (spec.name.empty()) throw ValidationError(context + ": specialty with empty name");
        if (spec.name == "overall") {
            throw ValidationError(context + ": 'overall' is reserved for the all-specialty view");
        }
        if (!seen.insert(spec.name).second) {
            throw ValidationError(context + ": duplicate specialty name '" + spec.name + "'");
        }
        const json& scs = require_key(s, "sc_codes", context);
        if (!scs.is_array() || scs.empty()) {
            throw ValidationError(context + ": specialty '" + spec.name +
                                  "' needs a non-empty sc_codes array");
        }
        for (const auto& sc : scs) {
            if (!sc.is_string()) {
                throw ValidationError(context + ": sc_codes entries must be strings");
            }
            spec.sc_codes.push_back(sc.get<std::string>());
        }
        if (auto it = s.find("sds_codes"); it != s.end()) {
            if (!it->is_array()) {
                throw ValidationError(context + ": sds_codes must be an array");
            }
            for (const auto& sds : *it) {
                if (!sds.is_string()) {
                    throw ValidationError(context + ": sds_codes entries must be strings");
                }
                spec.sds_codes.push_back(sds.get<std::string>());
            }
        }
        std::sort(spec.sc_codes.begin(), spec.sc_codes.end());
        spec.sc_codes.erase(std::unique(spec.sc_codes.begin(), spec.sc_codes.end()),
                            spec.sc_codes.end());
        std::sort(spec.sds_codes.begin(), spec.sds_codes.end());
        spec.sds_codes.erase(std::unique(spec.sds_codes.begin(), spec.sds_codes.end()),
                             spec.sds_codes.end());
        config.specialties.push_back(std::move(spec));
    }
    return config;
}

} // namespace kcmap
