#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kcmap/corpus.hpp"
#include "kcmap/credit.hpp"
#include "kcmap/errors.hpp"
#include "kcmap/indicators.hpp"
#include "kcmap/normalize.hpp"
#include "kcmap/synth.hpp"
#include "kcmap/territory.hpp"
#include "support/testutil.hpp"

#include <cmath>
#include <set>

using namespace kcmap;
using testutil::temp_dir;
using testutil::write_file;

namespace {

TerritoryIndex three_city_territory(const std::string& tag) {
    auto dir = temp_dir("indicators_" + tag);
    return TerritoryIndex::build(write_file(dir / "g.csv", testutil::small_gazetteer()),
                                 write_file(dir / "p.csv", testutil::small_population()));
}

struct Fixture {
    Corpus corpus;
    TerritoryIndex territory;
    std::vector<ResolvedAddress> addresses;
    std::vector<PublicationCredit> credits;
};

// Two publications: PB1 with a 2-author byline split Lecce / foreign,
// PB2 single-authored from Lecce.
Fixture lecce_fixture(const std::string& tag) {
    std::vector<InstitutionRecord> institutions(2);
    institutions[0] = {"U1", "University One", "Lecce", "Italy", ""};
    institutions[1] = {"F1", "Foreign", "Lyon", "France", ""};
    JournalRecord j;
    j.journal_id = "J1";
    j.subject_categories = {"SC1"};
    j.impact_factor_by_year[2018] = 1.0;

    PublicationRecord p1;
    p1.pub_id = "PB1";
    p1.year = 2018;
    p1.journal_id = "J1";
    p1.subject_categories = {"SC1"};
    p1.citation_count = 3;
    p1.byline = {{"Santoro, M", {"U1"}, 1}, {"B, B", {"F1"}, 2}};

    PublicationRecord p2 = p1;
    p2.pub_id = "PB2";
    p2.byline = {{"Santoro, M", {"U1"}, 1}};

    Fixture f{Corpus::from_records({p1, p2}, {j}, std::move(institutions), "Italy"),
              three_city_territory(tag),
              {},
              {}};
    f.addresses = f.territory.resolve_institutions(f.corpus);
    f.credits = credit_corpus(f.corpus, f.addresses, ExecMode::Serial);
    return f;
}

std::vector<PublicationScore> impacts(const Corpus& corpus, std::vector<double> values) {
    std::vector<PublicationScore> scores;
    for (std::size_t i = 0; i < corpus.publications().size(); ++i) {
        PublicationScore s;
        s.pub_id = corpus.publications()[i].pub_id;
        s.impact = values.at(i);
        scores.push_back(std::move(s));
    }
    return scores;
}

Roster one_professor_roster(int active_year_count) {
    Roster roster;
    ProfessorRecord prof;
    prof.professor_id = "PR1";
    prof.full_name = "Mario Santoro";
    prof.university_id = "U1";
    prof.sds_code = "MED/07";
    for (int y = 0; y < active_year_count; ++y) prof.active_years.push_back(2014 + y);
    prof.rank = "full";
    roster.professors.push_back(std::move(prof));
    CostParameters cost;
    cost.sds_code = "MED/07";
    cost.yearly_salary = 100;  // divisor 100/2 + 20 = 70
    cost.yearly_capital = 20;
    roster.costs_by_sds.emplace("MED/07", cost);
    return roster;
}

SpecialtyConfig one_specialty_config() {
    SpecialtyConfig config;
    config.country = "Italy";
    config.window_start = 2014;
    config.window_end = 2018;
    config.census_date = "2019-12-31";
    Specialty s;
    s.name = "Virology";
    s.sc_codes = {"SC1"};
    s.sds_codes = {"MED/07"};
    config.specialties.push_back(std::move(s));
    return config;
}

} // namespace

TEST_CASE("group normalization divides by the mean over positive members") {
    std::vector<double> raw{0.0, 2.0, 4.0};
    std::vector<double> normalized(3);
    GroupNormalization g = normalize_group(raw, normalized);
    CHECK(g.positive_count == 2);
    CHECK(g.mean_positive == doctest::Approx(3.0));
    CHECK_FALSE(g.degenerate);
    CHECK(normalized[0] == 0.0);
    CHECK(normalized[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(normalized[2] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

    std::vector<double> zeros{0.0, 0.0};
    std::vector<double> out(2);
    GroupNormalization z = normalize_group(zeros, out);
    CHECK(z.degenerate);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
}

TEST_CASE("professor productivity divides impact share by span and cost") {
    Fixture f = lecce_fixture("fss");
    Roster roster = one_professor_roster(5);
    // PB1 impact 1.5 matched at position 1 (weight 0.5); PB2 unmatched.
    auto pub_scores = impacts(f.corpus, {1.5, 99.0});
    std::vector<Assignment> assignments{{"PB1", 1, "PR1"}};

    ProfessorScoreSet scores = compute_professor_scores(f.corpus, pub_scores, f.credits,
                                                        assignments, roster, f.addresses);
    REQUIRE(scores.scores.size() == 1);
    const ProfessorScore& s = scores.scores[0];
    CHECK(s.professor_id == "PR1");
    CHECK(s.lau_code == "LE01");
    CHECK(s.matched_publication_count == 1);
    CHECK(std::abs(s.productivity_core - 0.15) < 1e-15);        // (1.5 * 0.5) / 5
    CHECK(std::abs(s.raw_fss - 0.15 / 70.0) < 1e-15);
    CHECK(s.raw_fss == doctest::Approx(0.002142857142857).epsilon(1e-9));
    // single positive member: normalized against its own mean
    CHECK(s.normalized_fss == doctest::Approx(1.0).epsilon(1e-12));

    REQUIRE(scores.groups.size() == 1);
    CHECK(scores.groups[0].sds_code == "MED/07");
    CHECK(scores.groups[0].member_count == 1);
    CHECK(scores.groups[0].positive_count == 1);
}

TEST_CASE("unmatched professors score zero and flag their group") {
    Fixture f = lecce_fixture("zero");
    Roster roster = one_professor_roster(3);
    auto pub_scores = impacts(f.corpus, {1.0, 1.0});

    ProfessorScoreSet scores =
        compute_professor_scores(f.corpus, pub_scores, f.credits, {}, roster, f.addresses);
    REQUIRE(scores.scores.size() == 1);
    CHECK(scores.scores[0].productivity_core == 0.0);
    CHECK(scores.scores[0].normalized_fss == 0.0);
    CHECK(scores.groups[0].degenerate);
}

TEST_CASE("a professor whose university is not locatable is an error") {
    Fixture f = lecce_fixture("unlocatable");
    Roster roster = one_professor_roster(3);
    roster.professors[0].university_id = "F1";
    auto pub_scores = impacts(f.corpus, {1.0, 1.0});
    CHECK_THROWS_AS(
        compute_professor_scores(f.corpus, pub_scores, f.credits, {}, roster, f.addresses),
        ValidationError);
}

TEST_CASE("territory knowledge capital weighs impact by shares and ladders up") {
    Fixture f = lecce_fixture("kc");
    auto pub_scores = impacts(f.corpus, {2.0, 1.0});
    ProfessorScoreSet no_professors;
    SpecialtyConfig config = one_specialty_config();

    TerritoryScoreSet scores = compute_territory_scores(f.corpus, pub_scores, f.credits,
                                                        no_professors, f.territory, config);

    auto row = [&](TerritoryLevel level, const std::string& code, const std::string& specialty) {
        for (const auto& r : scores.rows) {
            if (r.level == level && r.territory_code == code && r.specialty == specialty)
                return &r;
        }
        return static_cast<const TerritoryScore*>(nullptr);
    };

    // KC(LE01) = 2.0 * 0.5 + 1.0 * 1.0
    const TerritoryScore* lecce = row(TerritoryLevel::Lau, "LE01", "Virology");
    REQUIRE(lecce != nullptr);
    CHECK(std::abs(lecce->kc - 2.0) < 1e-12);
    CHECK(lecce->kc_pc == doctest::Approx(2.0 / 0.095).epsilon(1e-12));
    CHECK_FALSE(lecce->has_fss);

    const TerritoryScore* pisa = row(TerritoryLevel::Lau, "PI01", "Virology");
    REQUIRE(pisa != nullptr);
    CHECK(pisa->kc == 0.0);

    // rollups reproduce the LAU exactly at every level
    CHECK(row(TerritoryLevel::Nuts3, "P_LE", "Virology")->kc == lecce->kc);
    CHECK(row(TerritoryLevel::Nuts2, "R_PU", "Virology")->kc == lecce->kc);
    CHECK(row(TerritoryLevel::Nuts1, "M_S", "Virology")->kc == lecce->kc);

    REQUIRE(scores.nationals.size() == 2);  // specialty + overall
    const SpecialtyNationals& nat = scores.nationals[0];
    CHECK(nat.specialty == "Virology");
    CHECK(std::abs(nat.national_kc - 2.0) < 1e-12);
    CHECK(std::abs(nat.foreign_kc - 1.0) < 1e-12);  // half of PB1's impact 2.0
    CHECK(nat.publication_count == 2);
    CHECK(nat.national_kc_pc == doctest::Approx(2.0 / 0.235).epsilon(1e-12));

    // normalized density: (kc / pop) over the national density
    CHECK(lecce->normalized_kc_pc ==
          doctest::Approx((2.0 / 0.095) / (2.0 / 0.235)).epsilon(1e-12));
}

TEST_CASE("mean normalized FSS covers the professors located in the territory") {
    Fixture f = lecce_fixture("fss_territory");
    Roster roster = one_professor_roster(5);
    auto pub_scores = impacts(f.corpus, {1.5, 99.0});
    std::vector<Assignment> assignments{{"PB1", 1, "PR1"}};
    ProfessorScoreSet professors = compute_professor_scores(f.corpus, pub_scores, f.credits,
                                                            assignments, roster, f.addresses);
    SpecialtyConfig config = one_specialty_config();

    TerritoryScoreSet scores = compute_territory_scores(f.corpus, pub_scores, f.credits,
                                                        professors, f.territory, config);
    bool found = false;
    for (const auto& r : scores.rows) {
        if (r.level == TerritoryLevel::Lau && r.territory_code == "LE01" &&
            r.specialty == "Virology") {
            found = true;
            CHECK(r.has_fss);
            CHECK(r.professor_count == 1);
            CHECK(r.low_headcount());  // 1 < 5
            CHECK(r.mean_normalized_fss == doctest::Approx(1.0).epsilon(1e-12));
        }
        if (r.territory_code == "PI01" && r.specialty == "Virology") {
            CHECK_FALSE(r.has_fss);
        }
    }
    CHECK(found);
}

TEST_CASE("population-weighted mean of normalized density is one at every level") {
    synth::SynthConfig sc;
    sc.seed = 21;
    sc.publications = 400;
    sc.professors = 80;
    sc.laus = 18;
    synth::SynthData data = synth::generate(sc);
    auto dir = temp_dir("synth_density");
    synth::SynthPaths paths = synth::write_all(data, dir);

    Corpus corpus = load_corpus(paths.corpus, paths.journals, paths.institutions, data.country);
    TerritoryIndex territory = TerritoryIndex::build(paths.gazetteer, paths.population);
    SpecialtyConfig config = load_specialty_config(paths.specialties);
    auto addresses = territory.resolve_institutions(corpus);
    auto credits = credit_corpus(corpus, addresses, ExecMode::Serial);
    BaselineTable baselines = BaselineTable::compute(corpus);
    WeightTable weights(load_weight_entries(paths.weights));
    auto pub_scores = score_corpus(corpus, baselines, weights, ExecMode::Serial);
    ProfessorScoreSet no_professors;

    TerritoryScoreSet scores = compute_territory_scores(corpus, pub_scores, credits,
                                                        no_professors, territory, config);

    bool any_degenerate = false;
    for (const auto& nat : scores.nationals) any_degenerate |= nat.degenerate;

    for (const auto& nat : scores.nationals) {
        if (nat.degenerate) continue;
        // the overall mean-of-normalized only averages to one when every
        // specialty's own weighted mean does
        if (nat.specialty == std::string(kOverallSpecialty) && any_degenerate) continue;
        for (TerritoryLevel level : kTerritoryLevels) {
            double weighted = 0.0;
            double pop = 0.0;
            for (const auto& r : scores.rows) {
                if (r.specialty != nat.specialty || r.level != level) continue;
                const TerritoryNode* node = territory.find(level, r.territory_code);
                REQUIRE(node != nullptr);
                weighted += node->population * r.normalized_kc_pc;
                pop += node->population;
            }
            CHECK(std::abs(weighted / pop - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("the overall pseudo-specialty averages KC and keeps density linear") {
    synth::SynthConfig sc;
    sc.seed = 33;
    sc.publications = 200;
    sc.professors = 50;
    synth::SynthData data = synth::generate(sc);
    auto dir = temp_dir("synth_overall");
    synth::SynthPaths paths = synth::write_all(data, dir);

    Corpus corpus = load_corpus(paths.corpus, paths.journals, paths.institutions, data.country);
    TerritoryIndex territory = TerritoryIndex::build(paths.gazetteer, paths.population);
    SpecialtyConfig config = load_specialty_config(paths.specialties);
    Roster roster = load_roster(paths.roster, paths.costs, data.window_start, data.window_end);
    auto addresses = territory.resolve_institutions(corpus);
    auto credits = credit_corpus(corpus, addresses, ExecMode::Serial);
    BaselineTable baselines = BaselineTable::compute(corpus);
    WeightTable weights(load_weight_entries(paths.weights));
    auto pub_scores = score_corpus(corpus, baselines, weights, ExecMode::Serial);

    std::vector<Assignment> gold;
    for (const auto& [pub, pos, prof] : data.gold) gold.push_back({pub, pos, prof});
    ProfessorScoreSet professors =
        compute_professor_scores(corpus, pub_scores, credits, gold, roster, addresses);
    TerritoryScoreSet scores = compute_territory_scores(corpus, pub_scores, credits, professors,
                                                        territory, config);

    const std::size_t n = config.specialties.size();
    std::map<std::string, double> kc_sum;
    std::map<std::string, const TerritoryScore*> overall;
    for (const auto& r : scores.rows) {
        if (r.level != TerritoryLevel::Nuts2) continue;
        if (r.specialty == std::string(kOverallSpecialty)) {
            overall[r.territory_code] = &r;
        } else {
            kc_sum[r.territory_code] += r.kc;
        }
    }
    REQUIRE_FALSE(overall.empty());
    for (const auto& [code, row] : overall) {
        CHECK(std::abs(row->kc - kc_sum[code] / static_cast<double>(n)) < 1e-12);
        const TerritoryNode* node = territory.find(TerritoryLevel::Nuts2, code);
        CHECK(std::abs(row->kc_pc - row->kc / (node->population / 1e6)) < 1e-9);
    }

    // overall professor_count at the national ladder top counts each professor once
    long long overall_professors = 0;
    for (const auto& r : scores.rows) {
        if (r.level == TerritoryLevel::Nuts1 && r.specialty == std::string(kOverallSpecialty)) {
            overall_professors += r.professor_count;
        }
    }
    CHECK(overall_professors == static_cast<long long>(roster.professors.size()));
}

TEST_CASE("specialty publication selection intersects subject categories") {
    Fixture f = lecce_fixture("select");
    Specialty spec;
    spec.name = "S";
    spec.sc_codes = {"SC1"};
    auto picked = specialty_publications(f.corpus, spec);
    CHECK(picked == std::vector<std::size_t>{0, 1});

    Specialty other;
    other.name = "O";
    other.sc_codes = {"NOPE"};
    CHECK(specialty_publications(f.corpus, other).empty());
}

TEST_CASE("overlapping specialties count distinct publications once in the overall totals") {
    synth::SynthConfig sc;
    sc.seed = 5;
    sc.publications = 120;
    sc.overlapping_specialties = true;
    synth::SynthData data = synth::generate(sc);
    auto dir = temp_dir("synth_distinct");
    synth::SynthPaths paths = synth::write_all(data, dir);

    Corpus corpus = load_corpus(paths.corpus, paths.journals, paths.institutions, data.country);
    TerritoryIndex territory = TerritoryIndex::build(paths.gazetteer, paths.population);
    SpecialtyConfig config = load_specialty_config(paths.specialties);
    auto addresses = territory.resolve_institutions(corpus);
    auto credits = credit_corpus(corpus, addresses, ExecMode::Serial);
    auto pub_scores = impacts(corpus, std::vector<double>(corpus.publications().size(), 1.0));
    ProfessorScoreSet no_professors;

    TerritoryScoreSet scores = compute_territory_scores(corpus, pub_scores, credits,
                                                        no_professors, territory, config);
    long long column_sum = 0;
    long long overall_count = 0;
    for (const auto& nat : scores.nationals) {
        if (nat.specialty == std::string(kOverallSpecialty)) {
            overall_count = nat.publication_count;
        } else {
            column_sum += nat.publication_count;
        }
    }
    // every listed publication is in some specialty and overlaps exist
    std::set<std::size_t> distinct;
    for (const auto& spec : config.specialties) {
        for (std::size_t idx : specialty_publications(corpus, spec)) distinct.insert(idx);
    }
    CHECK(overall_count == static_cast<long long>(distinct.size()));
    CHECK(overall_count < column_sum);
}
