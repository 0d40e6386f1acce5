#include "kcmap/synth.hpp"

#include "kcmap/csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

namespace kcmap::synth {

using nlohmann::json;

namespace {

std::string padded(const char* prefix, std::size_t i, int width) {
    std::string digits = std::to_string(i);
    std::string out(prefix);
    out.append(static_cast<std::size_t>(std::max(0, width - static_cast<int>(digits.size()))),
               '0');
    out += digits;
    return out;
}

} // namespace

SynthData generate(const SynthConfig& config) {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SynthData data;
    data.window_start = config.window_start;
    data.window_end = config.window_end;

    // territory ladder: 3 LAUs per NUTS3, 2 NUTS3 per NUTS2, 2 NUTS2 per NUTS1
    const std::size_t n_laus = std::max<std::size_t>(1, config.laus);
    std::uniform_real_distribution<double> pop_dist(20000.0, 900000.0);
    for (std::size_t i = 0; i < n_laus; ++i) {
        SynthData::Lau lau;
        lau.code = padded("L", i, 3);
        lau.name = "Cityville" + std::to_string(i);
        const std::size_t n3 = i / 3;
        const std::size_t n2 = n3 / 2;
        const std::size_t n1 = n2 / 2;
        lau.nuts3 = padded("P", n3, 2);
        lau.nuts3_name = "Province" + std::to_string(n3);
        lau.nuts2 = padded("R", n2, 2);
        lau.nuts2_name = "Region" + std::to_string(n2);
        lau.nuts1 = padded("M", n1, 2);
        lau.nuts1_name = "Macro" + std::to_string(n1);
        lau.population = std::floor(pop_dist(rng));
        data.laus.push_back(std::move(lau));
    }

    // subject categories and specialties; adjacent specialties can share one SC
    const std::size_t n_specialties = std::max<std::size_t>(1, config.specialties);
    const std::size_t per = std::max<std::size_t>(1, config.scs_per_specialty);
    std::vector<std::string> all_scs;
    for (std::size_t s = 0; s < n_specialties; ++s) {
        SynthData::Spec spec;
        spec.name = "Specialty" + std::to_string(s);
        for (std::size_t j = 0; j < per; ++j) {
            std::string sc = padded("SC", s * per + j, 3);
            spec.sc_codes.push_back(sc);
            all_scs.push_back(sc);
        }
        if (config.overlapping_specialties && s > 0) {
            spec.sc_codes.push_back(padded("SC", s * per - 1, 3));
        }
        for (std::size_t j = 0; j < 2; ++j) {
            std::string sds = "SDS_" + std::to_string(s) + "_" + std::to_string(j);
            spec.sds_codes.push_back(sds);
            std::uniform_real_distribution<double> salary(80.0, 150.0);
            std::uniform_real_distribution<double> capital(10.0, 60.0);
            data.costs.push_back({sds, std::floor(salary(rng) * 100.0) / 100.0,
                                  std::floor(capital(rng) * 100.0) / 100.0});
        }
        data.specialties.push_back(std::move(spec));
    }

    for (int year = config.window_start; year <= config.window_end; ++year) {
        for (const std::string& sc : all_scs) {
            std::uniform_real_distribution<double> w(0.3, 0.8);
            data.weights.push_back({year, sc, std::floor(w(rng) * 1000.0) / 1000.0});
        }
    }

    // institutions: universities and other domestic rows spread over the LAUs,
    // half with explicit LAU codes and half resolved by city name
    auto add_domestic = [&](const char* prefix, std::size_t i, std::size_t count_so_far) {
        SynthData::Institution inst;
        inst.institution_id = padded(prefix, i, 2);
        inst.name = std::string(prefix) + " Institute " + std::to_string(i);
        const SynthData::Lau& lau = data.laus[(i * 7 + count_so_far) % data.laus.size()];
        inst.city = lau.name;
        inst.country = data.country;
        if (i % 2 == 0) inst.lau_code = lau.code;
        data.institutions.push_back(std::move(inst));
    };
    for (std::size_t i = 0; i < config.universities; ++i) add_domestic("U", i, 0);
    for (std::size_t i = 0; i < config.other_domestic; ++i) add_domestic("D", i, 3);
    const char* foreign_countries[] = {"France", "Germany", "Spain", "Austria"};
    const char* foreign_cities[] = {"Lyon", "Munich", "Madrid", "Vienna"};
    for (std::size_t i = 0; i < config.foreign_institutions; ++i) {
        SynthData::Institution inst;
        inst.institution_id = padded("F", i, 2);
        inst.name = "Foreign Institute " + std::to_string(i);
        inst.city = foreign_cities[i % 4];
        inst.country = foreign_countries[i % 4];
        data.institutions.push_back(std::move(inst));
    }

    // professors with surnames unique across the roster and disjoint from
    // non-roster author names, so the default match rules resolve exactly
    const char* given_names[] = {"Mario", "Anna", "Luca", "Elena", "Paolo",
                                 "Giulia", "Marco", "Silvia", "Andrea", "Chiara"};
    std::uniform_int_distribution<std::size_t> uni_pick(0, std::max<std::size_t>(1, config.universities) - 1);
    for (std::size_t i = 0; i < config.professors; ++i) {
        SynthData::Professor prof;
        prof.professor_id = padded("PR", i, 4);
        prof.full_name =
            std::string(given_names[i % 10]) + " Santoro" + std::to_string(i);
        prof.university_id = padded("U", config.universities == 0 ? 0 : uni_pick(rng), 2);
        const SynthData::Spec& spec = data.specialties[i % data.specialties.size()];
        prof.sds_code = spec.sds_codes[i % spec.sds_codes.size()];
        for (int year = config.window_start; year <= config.window_end; ++year) {
            if (unit(rng) < 0.8) prof.active_years.push_back(year);
        }
        if (prof.active_years.empty()) prof.active_years.push_back(config.window_start);
        prof.rank = (i % 3 == 0) ? "full" : (i % 3 == 1 ? "associate" : "assistant");
        data.professors.push_back(std::move(prof));
    }

    // journals hosting 1..2 SCs with an impact factor per window year
    const std::size_t n_journals = std::max<std::size_t>(1, config.journals);
    std::uniform_int_distribution<std::size_t> sc_pick(0, all_scs.size() - 1);
    std::uniform_real_distribution<double> if_dist(0.5, 15.0);
    for (std::size_t i = 0; i < n_journals; ++i) {
        SynthData::Journal journal;
        journal.journal_id = padded("J", i, 3);
        std::set<std::string> scs;
        scs.insert(all_scs[sc_pick(rng)]);
        if (unit(rng) < 0.3) scs.insert(all_scs[sc_pick(rng)]);
        journal.sc_codes.assign(scs.begin(), scs.end());
        for (int year = config.window_start; year <= config.window_end; ++year) {
            journal.if_by_year[year] = std::floor(if_dist(rng) * 1000.0) / 1000.0;
        }
        data.journals.push_back(std::move(journal));
    }

    // publications
    std::uniform_int_distribution<int> year_pick(config.window_start, config.window_end);
    std::uniform_int_distribution<std::size_t> journal_pick(0, n_journals - 1);
    std::uniform_int_distribution<int> byline_pick(config.min_byline, config.max_byline);
    std::uniform_int_distribution<long long> citation_pick(1, 50);
    std::uniform_int_distribution<std::size_t> domestic_pick(
        0, config.universities + config.other_domestic - 1);
    std::uniform_int_distribution<std::size_t> prof_pick(
        0, std::max<std::size_t>(1, config.professors) - 1);

    std::size_t extern_counter = 0;
    for (std::size_t i = 0; i < config.publications; ++i) {
        SynthData::Pub pub;
        pub.pub_id = padded("PB", i, 7);
        pub.year = year_pick(rng);
        const SynthData::Journal& journal = data.journals[journal_pick(rng)];
        pub.journal_id = journal.journal_id;
        pub.sc_codes = journal.sc_codes;
        pub.citations = unit(rng) < config.zero_citation_prob ? 0 : citation_pick(rng);

        const int length = config.byline_cycle.empty()
                               ? byline_pick(rng)
                               : config.byline_cycle[i % config.byline_cycle.size()];
        std::set<std::string> used_professors;
        bool any_domestic = false;
        for (int pos = 1; pos <= length; ++pos) {
            SynthData::Author author;
            author.position = pos;
            const bool as_professor =
                config.professors > 0 && unit(rng) < config.professor_author_prob;
            if (as_professor) {
                const SynthData::Professor& prof = data.professors[prof_pick(rng)];
                if (!used_professors.insert(prof.professor_id).second) {
                    author.name = "Ext Verdi" + std::to_string(extern_counter++);
                    author.affiliations.push_back(
                        data.institutions[domestic_pick(rng)].institution_id);
                    any_domestic = true;
                    pub.byline.push_back(std::move(author));
                    continue;
                }
                // half surname-initial style, half full name
                const std::string& full = prof.full_name;
                const auto space = full.find(' ');
                if (i % 2 == 0) {
                    author.name = full.substr(space + 1) + ", " + full.substr(0, 1);
                } else {
                    author.name = full;
                }
                author.affiliations.push_back(prof.university_id);
                if (unit(rng) < config.multi_affiliation_prob && config.max_affiliations > 1) {
                    std::string extra = data.institutions[domestic_pick(rng)].institution_id;
                    if (extra != prof.university_id) author.affiliations.push_back(extra);
                }
                any_domestic = true;
                data.gold.emplace_back(pub.pub_id, pos, prof.professor_id);
            } else {
                author.name = "Ext Verdi" + std::to_string(extern_counter++);
                const bool foreign = config.foreign_institutions > 0 &&
                                     unit(rng) < config.foreign_author_prob;
                if (foreign) {
                    std::uniform_int_distribution<std::size_t> fp(
                        0, config.foreign_institutions - 1);
                    author.affiliations.push_back(padded("F", fp(rng), 2));
                } else {
                    author.affiliations.push_back(
                        data.institutions[domestic_pick(rng)].institution_id);
                    any_domestic = true;
                }
                if (unit(rng) < config.multi_affiliation_prob && config.max_affiliations > 1) {
                    std::string extra = data.institutions[domestic_pick(rng)].institution_id;
                    if (extra != author.affiliations.front()) {
                        author.affiliations.push_back(extra);
                        any_domestic = true;
                    }
                }
            }
            pub.byline.push_back(std::move(author));
        }
        if (!any_domestic) {
            pub.byline.front().affiliations.front() =
                data.institutions[domestic_pick(rng)].institution_id;
        }
        data.pubs.push_back(std::move(pub));
    }
    return data;
}

SynthPaths write_all(const SynthData& data, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    SynthPaths paths;

    paths.corpus = dir / "publications.jsonl";
    {
        std::ofstream out(paths.corpus, std::ios::binary);
        for (const auto& pub : data.pubs) {
            json byline = json::array();
            for (const auto& author : pub.byline) {
                byline.push_back({{"name", author.name},
                                  {"position", author.position},
                                  {"affiliations", author.affiliations}});
            }
            json line = {{"pub_id", pub.pub_id},
                         {"year", pub.year},
                         {"journal_id", pub.journal_id},
                         {"subject_categories", pub.sc_codes},
                         {"citation_count", pub.citations},
                         {"byline", std::move(byline)}};
            out << line.dump() << "\n";
        }
    }

    paths.journals = dir / "journals.csv";
    {
        std::ofstream file(paths.journals, std::ios::binary);
        CsvWriter w(file);
        w.row({"journal_id", "year", "impact_factor", "sc_codes"});
        for (const auto& journal : data.journals) {
            std::string scs;
            for (std::size_t i = 0; i < journal.sc_codes.size(); ++i) {
                if (i) scs += ';';
                scs += journal.sc_codes[i];
            }
            for (const auto& [year, impact] : journal.if_by_year) {
                w.row({journal.journal_id, std::to_string(year), std::to_string(impact), scs});
            }
        }
    }

    paths.institutions = dir / "institutions.csv";
    {
        std::ofstream file(paths.institutions, std::ios::binary);
        CsvWriter w(file);
        w.row({"institution_id", "name", "city", "country", "lau_code"});
        for (const auto& inst : data.institutions) {
            w.row({inst.institution_id, inst.name, inst.city, inst.country, inst.lau_code});
        }
    }

    paths.roster = dir / "roster.csv";
    {
        std::ofstream file(paths.roster, std::ios::binary);
        CsvWriter w(file);
        w.row({"professor_id", "full_name", "university_id", "sds_code", "active_years", "rank"});
        for (const auto& prof : data.professors) {
            std::string years;
            for (std::size_t i = 0; i < prof.active_years.size(); ++i) {
                if (i) years += ';';
                years += std::to_string(prof.active_years[i]);
            }
            w.row({prof.professor_id, prof.full_name, prof.university_id, prof.sds_code, years,
                   prof.rank});
        }
    }

    paths.costs = dir / "costs.csv";
    {
        std::ofstream file(paths.costs, std::ios::binary);
        CsvWriter w(file);
        w.row({"sds_code", "w_r", "k"});
        for (const auto& cost : data.costs) {
            w.row({cost.sds_code, std::to_string(cost.w_r), std::to_string(cost.k)});
        }
    }

    paths.weights = dir / "weights.csv";
    {
        std::ofstream file(paths.weights, std::ios::binary);
        CsvWriter w(file);
        w.row({"year", "sc_code", "citation_weight"});
        for (const auto& weight : data.weights) {
            w.row({std::to_string(weight.year), weight.sc_code, std::to_string(weight.value)});
        }
    }

    paths.gazetteer = dir / "gazetteer.csv";
    {
        std::ofstream file(paths.gazetteer, std::ios::binary);
        CsvWriter w(file);
        w.row({"code", "level", "name", "parent_code", "aliases"});
        std::set<std::string> seen;
        for (const auto& lau : data.laus) {
            w.row({lau.code, "lau", lau.name, lau.nuts3, ""});
        }
        for (const auto& lau : data.laus) {
            if (seen.insert(lau.nuts3).second) {
                w.row({lau.nuts3, "nuts3", lau.nuts3_name, lau.nuts2, ""});
            }
        }
        for (const auto& lau : data.laus) {
            if (seen.insert(lau.nuts2).second) {
                w.row({lau.nuts2, "nuts2", lau.nuts2_name, lau.nuts1, ""});
            }
        }
        for (const auto& lau : data.laus) {
            if (seen.insert(lau.nuts1).second) {
                w.row({lau.nuts1, "nuts1", lau.nuts1_name, "", ""});
            }
        }
    }

    paths.population = dir / "population.csv";
    {
        std::ofstream file(paths.population, std::ios::binary);
        CsvWriter w(file);
        w.row({"code", "population", "reference_year"});
        for (const auto& lau : data.laus) {
            w.row({lau.code, std::to_string(static_cast<long long>(lau.population)),
                   std::to_string(data.window_end + 1)});
        }
    }

    paths.specialties = dir / "specialties.json";
    {
        json specs = json::array();
        for (const auto& spec : data.specialties) {
            specs.push_back({{"name", spec.name},
                             {"sc_codes", spec.sc_codes},
                             {"sds_codes", spec.sds_codes}});
        }
        json doc = {{"country", data.country},
                    {"observation_window", {data.window_start, data.window_end}},
                    {"census_date", data.census_date},
                    {"specialties", std::move(specs)}};
        std::ofstream out(paths.specialties, std::ios::binary);
        out << doc.dump(2) << "\n";
    }

    paths.gold = dir / "gold.csv";
    {
        std::ofstream file(paths.gold, std::ios::binary);
        CsvWriter w(file);
        w.row({"pub_id", "position", "professor_id"});
        for (const auto& [pub_id, position, professor_id] : data.gold) {
            w.row({pub_id, std::to_string(position), professor_id});
        }
    }
    return paths;
}

} // namespace kcmap::synth
