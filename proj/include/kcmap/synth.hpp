#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace kcmap::synth {

// Deterministic corpus generator for tests and benchmarks. The row structs
// below mirror the input files, not the engine's domain types; tests that
// recompute indicators from them stay independent of the pipeline.
struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t publications = 100;
    // when non-empty, byline lengths cycle through this pattern
    std::vector<int> byline_cycle;
    int min_byline = 1;
    int max_byline = 12;
    std::size_t journals = 20;
    std::size_t specialties = 3;
    std::size_t scs_per_specialty = 2;
    bool overlapping_specialties = true;  // adjacent specialties share one SC
    std::size_t universities = 6;
    std::size_t other_domestic = 6;
    std::size_t foreign_institutions = 4;
    std::size_t laus = 12;
    std::size_t professors = 40;
    int window_start = 2014;
    int window_end = 2018;
    double professor_author_prob = 0.35;
    double multi_affiliation_prob = 0.10;
    double foreign_author_prob = 0.20;
    int max_affiliations = 2;
    double zero_citation_prob = 0.25;
};

struct SynthData {
    struct Author {
        std::string name;
        int position = 0;
        std::vector<std::string> affiliations;
    };
    struct Pub {
        std::string pub_id;
        int year = 0;
        std::string journal_id;
        std::vector<std::string> sc_codes;
        long long citations = 0;
        std::vector<Author> byline;
    };
    struct Journal {
        std::string journal_id;
        std::vector<std::string> sc_codes;
        std::map<int, double> if_by_year;
    };
    struct Institution {
        std::string institution_id;
        std::string name;
        std::string city;
        std::string country;
        std::string lau_code;  // may be empty for domestic rows resolved by city
    };
    struct Professor {
        std::string professor_id;
        std::string full_name;
        std::string university_id;
        std::string sds_code;
        std::vector<int> active_years;
        std::string rank;
    };
    struct Cost {
        std::string sds_code;
        double w_r = 0.0;
        double k = 0.0;
    };
    struct Weight {
        int year = 0;
        std::string sc_code;
        double value = 0.5;
    };
    struct Lau {
        std::string code, name;
        std::string nuts3, nuts3_name;
        std::string nuts2, nuts2_name;
        std::string nuts1, nuts1_name;
        double population = 0.0;
    };
    struct Spec {
        std::string name;
        std::vector<std::string> sc_codes;
        std::vector<std::string> sds_codes;
    };

    std::vector<Pub> pubs;
    std::vector<Journal> journals;
    std::vector<Institution> institutions;
    std::vector<Professor> professors;
    std::vector<Cost> costs;
    std::vector<Weight> weights;
    std::vector<Lau> laus;
    std::vector<Spec> specialties;
    // (pub_id, position, professor_id)
    std::vector<std::tuple<std::string, int, std::string>> gold;

    std::string country = "Italy";
    int window_start = 2014;
    int window_end = 2018;
    std::string census_date = "2019-12-31";
};

SynthData generate(const SynthConfig& config);

struct SynthPaths {
    std::filesystem::path corpus, journals, institutions, roster, costs, weights;
    std::filesystem::path gazetteer, population, specialties, gold;
};

// Writes every input file the engine consumes and returns their paths.
SynthPaths write_all(const SynthData& data, const std::filesystem::path& dir);

} // namespace kcmap::synth
