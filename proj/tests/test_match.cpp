#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kcmap/corpus.hpp"
#include "kcmap/errors.hpp"
#include "kcmap/match.hpp"
#include "kcmap/synth.hpp"
#include "kcmap/territory.hpp"
#include "support/testutil.hpp"

#include <algorithm>
#include <string>

using namespace kcmap;
using testutil::temp_dir;
using testutil::write_file;

namespace {

Roster make_roster(std::vector<ProfessorRecord> professors) {
    Roster roster;
    std::sort(professors.begin(), professors.end(),
              [](const auto& a, const auto& b) { return a.professor_id < b.professor_id; });
    roster.professors = std::move(professors);
    for (const auto& prof : roster.professors) {
        CostParameters cost;
        cost.sds_code = prof.sds_code;
        cost.yearly_salary = 100;
        cost.yearly_capital = 20;
        roster.costs_by_sds.emplace(prof.sds_code, cost);
    }
    return roster;
}

ProfessorRecord prof(const std::string& id, const std::string& name,
                     const std::string& university = "U1") {
    ProfessorRecord p;
    p.professor_id = id;
    p.full_name = name;
    p.university_id = university;
    p.sds_code = "MED/07";
    p.active_years = {2018};
    p.rank = "full";
    return p;
}

Corpus byline_corpus(const std::vector<std::pair<std::string, std::vector<std::string>>>& authors) {
    std::vector<InstitutionRecord> institutions(3);
    institutions[0] = {"U1", "University One", "Lecce", "Italy", ""};
    institutions[1] = {"U2", "University Two", "Pisa", "Italy", ""};
    institutions[2] = {"F1", "Foreign", "Lyon", "France", ""};
    JournalRecord j;
    j.journal_id = "J1";
    j.subject_categories = {"SC"};
    j.impact_factor_by_year[2018] = 1.0;
    PublicationRecord p;
    p.pub_id = "PB1";
    p.year = 2018;
    p.journal_id = "J1";
    p.subject_categories = {"SC"};
    p.citation_count = 0;
    int pos = 0;
    for (const auto& [name, affiliations] : authors) {
        AuthorshipEntry a;
        a.raw_name = name;
        a.affiliations = affiliations;
        a.position = ++pos;
        p.byline.push_back(std::move(a));
    }
    return Corpus::from_records({std::move(p)}, {std::move(j)}, std::move(institutions), "Italy");
}

const MatchRuleConfig kDefaultRules{true, NamePolicy::SurnameInitials,
                                    AmbiguityPolicy::RejectAmbiguous};

} // namespace

TEST_CASE("surname plus initial resolves a unique professor") {
    Roster roster = make_roster({prof("PR1", "Mario Santoro"), prof("PR2", "Anna Bianchi")});
    Corpus corpus = byline_corpus({{"Santoro, M", {"U1"}}, {"Verdi, K", {"U1"}}});

    MatchResult result = match_authorships(corpus, roster, kDefaultRules, ExecMode::Serial);
    REQUIRE(result.assignments.size() == 1);
    CHECK(result.assignments[0].pub_id == "PB1");
    CHECK(result.assignments[0].position == 1);
    CHECK(result.assignments[0].professor_id == "PR1");
    REQUIRE(result.unmatched.size() == 1);
    CHECK(result.unmatched[0].position == 2);
    CHECK(result.ambiguous.empty());
}

TEST_CASE("full given names must agree verbatim, initials as initials") {
    Roster roster = make_roster({prof("PR1", "Mario Santoro")});

    auto run = [&](const std::string& byline_name) {
        Corpus corpus = byline_corpus({{byline_name, {"U1"}}});
        return match_authorships(corpus, roster, kDefaultRules, ExecMode::Serial);
    };
    CHECK(run("Santoro, M").assignments.size() == 1);
    CHECK(run("Santoro, Mario").assignments.size() == 1);
    CHECK(run("Mario Santoro").assignments.size() == 1);
    CHECK(run("M. Santoro").assignments.size() == 1);
    CHECK(run("Santoro, Maria").assignments.empty());
    CHECK(run("Santoro, K").assignments.empty());
    CHECK(run("Santoro, M K").assignments.empty());
}

TEST_CASE("multi-token surnames match as a suffix") {
    Roster roster = make_roster({prof("PR1", "Mario De Santis")});
    Corpus corpus = byline_corpus({{"De Santis, M", {"U1"}}, {"Santis, M", {"U1"}}});
    MatchResult result = match_authorships(corpus, roster, kDefaultRules, ExecMode::Serial);
    REQUIRE(result.assignments.size() == 2);
    CHECK(result.assignments[0].position == 1);
    CHECK(result.assignments[1].position == 2);
}

TEST_CASE("exact-folded policy requires the whole name") {
    MatchRuleConfig rules{true, NamePolicy::ExactFolded, AmbiguityPolicy::RejectAmbiguous};
    Roster roster = make_roster({prof("PR1", "Mario Santoro")});

    Corpus full = byline_corpus({{"mario SANTORO", {"U1"}}});
    CHECK(match_authorships(full, roster, rules, ExecMode::Serial).assignments.size() == 1);

    Corpus initial = byline_corpus({{"Santoro, M", {"U1"}}});
    CHECK(match_authorships(initial, roster, rules, ExecMode::Serial).assignments.empty());
}

TEST_CASE("homonym initials are ambiguous and listed with their candidates") {
    Roster roster = make_roster({prof("PR1", "Maria Rossi"), prof("PR2", "Marco Rossi")});
    Corpus corpus = byline_corpus({{"Rossi, M", {"U1"}}});

    MatchResult result = match_authorships(corpus, roster, kDefaultRules, ExecMode::Serial);
    CHECK(result.assignments.empty());
    REQUIRE(result.ambiguous.size() == 1);
    CHECK(result.ambiguous[0].pub_id == "PB1");
    REQUIRE(result.ambiguous[0].candidates.size() == 2);
    CHECK(result.ambiguous[0].candidates[0] == "PR1");
    CHECK(result.ambiguous[0].candidates[1] == "PR2");

    MatchRuleConfig strict{true, NamePolicy::SurnameInitials, AmbiguityPolicy::Error};
    CHECK_THROWS_AS(match_authorships(corpus, roster, strict, ExecMode::Serial),
                    ComputationError);

    // A full given name separates the two homonyms.
    Corpus disambiguated = byline_corpus({{"Rossi, Maria", {"U1"}}});
    MatchResult fixed = match_authorships(disambiguated, roster, kDefaultRules, ExecMode::Serial);
    REQUIRE(fixed.assignments.size() == 1);
    CHECK(fixed.assignments[0].professor_id == "PR1");
}

TEST_CASE("university requirement filters candidates by affiliation") {
    Roster roster = make_roster({prof("PR1", "Mario Santoro", "U2")});
    Corpus corpus = byline_corpus({{"Santoro, M", {"U1"}}});

    MatchResult with = match_authorships(corpus, roster, kDefaultRules, ExecMode::Serial);
    CHECK(with.assignments.empty());
    CHECK(with.unmatched.size() == 1);

    MatchRuleConfig relaxed{false, NamePolicy::SurnameInitials, AmbiguityPolicy::RejectAmbiguous};
    MatchResult without = match_authorships(corpus, roster, relaxed, ExecMode::Serial);
    CHECK(without.assignments.size() == 1);

    // The filter also resolves an otherwise ambiguous pair at different universities.
    Roster two = make_roster({prof("PR1", "Maria Rossi", "U1"), prof("PR2", "Marco Rossi", "U2")});
    Corpus one = byline_corpus({{"Rossi, M", {"U1"}}});
    MatchResult filtered = match_authorships(one, two, kDefaultRules, ExecMode::Serial);
    REQUIRE(filtered.assignments.size() == 1);
    CHECK(filtered.assignments[0].professor_id == "PR1");
}

TEST_CASE("diacritics fold away in both directions") {
    Roster roster = make_roster({prof("PR1", "José Niccolò D'Angelo")});
    Corpus corpus = byline_corpus({{"DAngelo, J N", {"U1"}}});
    CHECK(match_authorships(corpus, roster, kDefaultRules, ExecMode::Serial).assignments.size() ==
          1);
}

TEST_CASE("evaluation arithmetic and boundary conventions") {
    // One publication with ten positions; gold maps each to a professor.
    std::vector<std::pair<std::string, std::vector<std::string>>> authors;
    std::vector<ProfessorRecord> professors;
    std::vector<Assignment> gold;
    for (int i = 1; i <= 10; ++i) {
        authors.push_back({"Name" + std::to_string(i) + ", X", {"U1"}});
        professors.push_back(prof("PR" + std::to_string(i), "Xavier Name" + std::to_string(i)));
        gold.push_back({"PB1", i, "PR" + std::to_string(i)});
    }
    Corpus corpus = byline_corpus(authors);

    MatchResult result;
    for (int i = 1; i <= 8; ++i) result.assignments.push_back({"PB1", i, "PR" + std::to_string(i)});
    result.assignments.push_back({"PB1", 9, "PR10"});  // wrong professor: one fp, one fn
    result.assignments.push_back({"PB1", 10, "PR9"});  // wrong professor: one fp, one fn

    MatchQuality q = evaluate_matching(result, gold, corpus);
    CHECK(q.tp == 8);
    CHECK(q.fp == 2);
    CHECK(q.fn == 2);
    CHECK(q.precision == 0.8);
    CHECK(q.recall == 0.8);
    CHECK(q.f_measure == doctest::Approx(0.8).epsilon(1e-15));

    MatchResult perfect;
    perfect.assignments = gold;
    MatchQuality p = evaluate_matching(perfect, gold, corpus);
    CHECK(p.precision == 1.0);
    CHECK(p.recall == 1.0);
    CHECK(p.f_measure == 1.0);

    MatchResult nothing;
    MatchQuality empty_result = evaluate_matching(nothing, gold, corpus);
    CHECK(empty_result.precision == 1.0);  // no positives claimed
    CHECK(empty_result.recall == 0.0);
    CHECK(empty_result.f_measure == 0.0);

    MatchQuality both_empty = evaluate_matching(nothing, {}, corpus);
    CHECK(both_empty.precision == 1.0);
    CHECK(both_empty.recall == 1.0);
    CHECK(both_empty.f_measure == 1.0);
}

TEST_CASE("gold rows must reference the corpus") {
    Corpus corpus = byline_corpus({{"Santoro, M", {"U1"}}});
    MatchResult empty;
    CHECK_THROWS_AS(evaluate_matching(empty, {{"PB9", 1, "PR1"}}, corpus), ValidationError);
    CHECK_THROWS_AS(evaluate_matching(empty, {{"PB1", 5, "PR1"}}, corpus), ValidationError);
}

TEST_CASE("gold file loads and validates") {
    auto dir = temp_dir("gold");
    auto gold = load_gold(
        write_file(dir / "g.csv", "pub_id,position,professor_id\nPB1,2,PR1\nPB1,1,PR2\n"));
    REQUIRE(gold.size() == 2);
    CHECK(gold[0].pub_id == "PB1");

    CHECK_THROWS_AS(
        load_gold(write_file(dir / "bad.csv", "pub_id,position,professor_id\nPB1,0,PR1\n")),
        ValidationError);
}

TEST_CASE("the generated corpus matches its gold standard exactly") {
    synth::SynthConfig config;
    config.seed = 11;
    config.publications = 150;
    config.professors = 60;
    synth::SynthData data = synth::generate(config);
    auto dir = temp_dir("match_synth");
    synth::SynthPaths paths = synth::write_all(data, dir);

    Corpus corpus = load_corpus(paths.corpus, paths.journals, paths.institutions, data.country);
    Roster roster = load_roster(paths.roster, paths.costs, data.window_start, data.window_end);
    std::vector<Assignment> gold = load_gold(paths.gold);

    MatchResult serial = match_authorships(corpus, roster, kDefaultRules, ExecMode::Serial);
    MatchQuality q = evaluate_matching(serial, gold, corpus);
    CHECK(q.fp == 0);
    CHECK(q.fn == 0);
    CHECK(q.f_measure == 1.0);

    MatchResult parallel = match_authorships(corpus, roster, kDefaultRules, ExecMode::Parallel);
    REQUIRE(parallel.assignments.size() == serial.assignments.size());
    for (std::size_t i = 0; i < serial.assignments.size(); ++i) {
        CHECK(parallel.assignments[i].pub_id == serial.assignments[i].pub_id);
        CHECK(parallel.assignments[i].position == serial.assignments[i].position);
        CHECK(parallel.assignments[i].professor_id == serial.assignments[i].professor_id);
    }
    CHECK(parallel.unmatched.size() == serial.unmatched.size());
    CHECK(parallel.ambiguous.size() == serial.ambiguous.size());
}
