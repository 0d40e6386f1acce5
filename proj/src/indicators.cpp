#include "kcmap/indicators.hpp"

#include "kcmap/errors.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace kcmap {

GroupNormalization normalize_group(std::span<const double> raw, std::span<double> normalized) {
    if (raw.size() != normalized.size()) {
        throw ComputationError("normalize_group: size mismatch");
    }
    GroupNormalization info;
    double sum = 0.0;
    for (double v : raw) {
        if (v > 0.0) {
            sum += v;
            ++info.positive_count;
        }
    }
    if (info.positive_count == 0) {
        info.degenerate = true;
        std::fill(normalized.begin(), normalized.end(), 0.0);
        return info;
    }
    info.mean_positive = sum / static_cast<double>(info.positive_count);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        normalized[i] = raw[i] > 0.0 ? raw[i] / info.mean_positive : 0.0;
    }
    return info;
}

ProfessorScoreSet compute_professor_scores(const Corpus& corpus,
                                           const std::vector<PublicationScore>& pub_scores,
                                           const std::vector<PublicationCredit>& credits,
                                           const std::vector<Assignment>& assignments,
                                           const Roster& roster,
                                           const std::vector<ResolvedAddress>& addresses) {
    const auto& pubs = corpus.publications();
    if (pub_scores.size() != pubs.size() || credits.size() != pubs.size()) {
        throw ComputationError("professor scores: per-publication inputs out of step with corpus");
    }

    ProfessorScoreSet set;
    set.scores.reserve(roster.professors.size());
    std::unordered_map<std::string, std::size_t> by_professor;
    const InstitutionRecord* institutions_base = corpus.institutions().data();

    for (const ProfessorRecord& prof : roster.professors) {
        ProfessorScore score;
        score.professor_id = prof.professor_id;
        score.sds_code = prof.sds_code;
        score.university_id = prof.university_id;

        const InstitutionRecord* university = corpus.find_institution(prof.university_id);
        if (!university) {
            throw ValidationError("professor " + prof.professor_id +
                                  " lists unknown university '" + prof.university_id + "'");
        }
        const ResolvedAddress& addr =
            addresses.at(static_cast<std::size_t>(university - institutions_base));
        if (addr.kind != AddressKind::Lau) {
            throw ValidationError("university " + prof.university_id + " of professor " +
                                  prof.professor_id + " does not resolve to a LAU");
        }
        score.lau_code = addr.lau_code;
        by_professor.emplace(score.professor_id, set.scores.size());
        set.scores.push_back(std::move(score));
    }

    // deterministic accumulation: assignments in (pub_id, position) order
    std::vector<const Assignment*> ordered;
    ordered.reserve(assignments.size());
    for (const Assignment& a : assignments) ordered.push_back(&a);
    std::sort(ordered.begin(), ordered.end(), [](const Assignment* a, const Assignment* b) {
        return std::tie(a->pub_id, a->position) < std::tie(b->pub_id, b->position);
    });

    const PublicationRecord* pubs_base = pubs.data();
    for (const Assignment* a : ordered) {
        auto prof_it = by_professor.find(a->professor_id);
        if (prof_it == by_professor.end()) {
            throw ComputationError("assignment names unknown professor '" + a->professor_id + "'");
        }
        const PublicationRecord* pub = corpus.find_publication(a->pub_id);
        if (!pub) {
            throw ComputationError("assignment names unknown pub '" + a->pub_id + "'");
        }
        const std::size_t ordinal = static_cast<std::size_t>(pub - pubs_base);
        if (a->position < 1 || a->position > static_cast<int>(pub->byline.size())) {
            throw ComputationError("assignment for pub " + a->pub_id + " names position " +
                                   std::to_string(a->position) + " outside the byline");
        }
        const double impact = pub_scores[ordinal].impact;
        const double weight = credits[ordinal].authors[static_cast<std::size_t>(a->position - 1)].weight;
        ProfessorScore& score = set.scores[prof_it->second];
        score.productivity_core += impact * weight;
        score.matched_publication_count += 1;
    }

    for (ProfessorScore& score : set.scores) {
        const ProfessorRecord* prof = roster.find(score.professor_id);
        const int t = prof->years_active();
        if (t < 1) {
            throw ComputationError("professor " + score.professor_id + " has no active years");
        }
        score.productivity_core /= static_cast<double>(t);
        score.raw_fss = score.productivity_core / roster.costs_for(score.sds_code).cost_divisor();
    }

    // group normalization on the cost-free core, per SDS
    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < set.scores.size(); ++i) {
        members[set.scores[i].sds_code].push_back(i);
    }
    for (const auto& [sds, indices] : members) {
        std::vector<double> raw(indices.size());
        std::vector<double> normalized(indices.size());
        for (std::size_t i = 0; i < indices.size(); ++i) {
            raw[i] = set.scores[indices[i]].productivity_core;
        }
        GroupNormalization info = normalize_group(raw, normalized);
        for (std::size_t i = 0; i < indices.size(); ++i) {
            set.scores[indices[i]].normalized_fss = normalized[i];
        }
        SdsGroup group;
        group.sds_code = sds;
        group.member_count = static_cast<long long>(indices.size());
        group.positive_count = info.positive_count;
        group.mean_positive_core = info.mean_positive;
        group.degenerate = info.degenerate;
        set.groups.push_back(std::move(group));
    }
    return set;
}

std::vector<std::size_t> specialty_publications(const Corpus& corpus, const Specialty& specialty) {
    std::vector<std::size_t> out;
    const auto& pubs = corpus.publications();
    for (std::size_t i = 0; i < pubs.size(); ++i) {
        // both sides sorted
        const auto& scs = pubs[i].subject_categories;
        bool member = false;
        std::size_t a = 0, b = 0;
        while (a < scs.size() && b < specialty.sc_codes.size()) {
            if (scs[a] == specialty.sc_codes[b]) {
                member = true;
                break;
            }
            if (scs[a] < specialty.sc_codes[b]) {
                ++a;
            } else {
                ++b;
            }
        }
        if (member) out.push_back(i);
    }
    return out;
}

namespace {

struct LevelSlots {
    std::vector<double> kc;
    std::vector<double> fss_sum;
    std::vector<long long> professor_count;
};

struct SpecialtyAccumulation {
    std::array<LevelSlots, 4> levels;
    double foreign_kc = 0.0;
    double unresolved_kc = 0.0;
    long long publication_count = 0;
};

std::size_t ordinal(TerritoryLevel level) { return static_cast<std::size_t>(level); }

} // namespace

TerritoryScoreSet compute_territory_scores(const Corpus& corpus,
                                           const std::vector<PublicationScore>& pub_scores,
                                           const std::vector<PublicationCredit>& credits,
                                           const ProfessorScoreSet& professors,
                                           const TerritoryIndex& territory,
                                           const SpecialtyConfig& config) {
    const auto& pubs = corpus.publications();
    if (pub_scores.size() != pubs.size() || credits.size() != pubs.size()) {
        throw ComputationError("territory scores: per-publication inputs out of step with corpus");
    }

    // node index per level, and per-LAU precomputed ancestor slots
    std::array<std::unordered_map<std::string, std::size_t>, 4> node_index;
    for (TerritoryLevel level : kTerritoryLevels) {
        const auto& nodes = territory.nodes(level);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            node_index[ordinal(level)].emplace(nodes[i].code, i);
        }
    }
    const auto& laus = territory.nodes(TerritoryLevel::Lau);
    std::vector<std::array<std::size_t, 4>> lau_ancestors(laus.size());
    for (std::size_t i = 0; i < laus.size(); ++i) {
        lau_ancestors[i][ordinal(TerritoryLevel::Lau)] = i;
        for (TerritoryLevel level :
             {TerritoryLevel::Nuts3, TerritoryLevel::Nuts2, TerritoryLevel::Nuts1}) {
            const std::string& code = territory.ancestor_code(laus[i].code, level);
            lau_ancestors[i][ordinal(level)] = node_index[ordinal(level)].at(code);
        }
    }

    const std::size_t n_specialties = config.specialties.size();
    std::vector<SpecialtyAccumulation> acc(n_specialties);
    for (auto& sa : acc) {
        for (TerritoryLevel level : kTerritoryLevels) {
            const std::size_t n = territory.nodes(level).size();
            sa.levels[ordinal(level)].kc.assign(n, 0.0);
            sa.levels[ordinal(level)].fss_sum.assign(n, 0.0);
            sa.levels[ordinal(level)].professor_count.assign(n, 0);
        }
    }

    // KC at the LAU level, publication by publication in corpus order
    std::vector<std::vector<std::size_t>> specialty_members(n_specialties);
    for (std::size_t s = 0; s < n_specialties; ++s) {
        specialty_members[s] = specialty_publications(corpus, config.specialties[s]);
    }
    for (std::size_t s = 0; s < n_specialties; ++s) {
        const std::vector<std::size_t>& members = specialty_members[s];
        SpecialtyAccumulation& sa = acc[s];
        sa.publication_count = static_cast<long long>(members.size());
        auto& lau_kc = sa.levels[ordinal(TerritoryLevel::Lau)].kc;
        for (std::size_t pub_ordinal : members) {
            const double impact = pub_scores[pub_ordinal].impact;
            const PublicationShares& shares = credits[pub_ordinal].shares;
            for (const auto& [lau_code, share] : shares.lau_share) {
                auto it = node_index[ordinal(TerritoryLevel::Lau)].find(lau_code);
                if (it == node_index[ordinal(TerritoryLevel::Lau)].end()) {
                    throw ComputationError("credit references LAU " + lau_code +
                                           " missing from the gazetteer");
                }
                lau_kc[it->second] += impact * share;
            }
            sa.foreign_kc += impact * shares.foreign_share;
            sa.unresolved_kc += impact * shares.unresolved_share;
        }

        // ladder the KC upward, children in sorted code order
        auto ladder = [&](TerritoryLevel child_level, TerritoryLevel parent_level) {
            const auto& child_nodes = territory.nodes(child_level);
            const auto& child_kc = sa.levels[ordinal(child_level)].kc;
            auto& parent_kc = sa.levels[ordinal(parent_level)].kc;
            for (std::size_t i = 0; i < child_nodes.size(); ++i) {
                parent_kc[node_index[ordinal(parent_level)].at(child_nodes[i].parent_code)] +=
                    child_kc[i];
            }
        };
        ladder(TerritoryLevel::Lau, TerritoryLevel::Nuts3);
        ladder(TerritoryLevel::Nuts3, TerritoryLevel::Nuts2);
        ladder(TerritoryLevel::Nuts2, TerritoryLevel::Nuts1);
    }

    // professor FSS sums per territory, professors in roster order
    for (const ProfessorScore& prof : professors.scores) {
        auto lau_it = node_index[ordinal(TerritoryLevel::Lau)].find(prof.lau_code);
        if (lau_it == node_index[ordinal(TerritoryLevel::Lau)].end()) {
            throw ComputationError("professor " + prof.professor_id + " maps to LAU " +
                                   prof.lau_code + " missing from the gazetteer");
        }
        for (std::size_t s = 0; s < n_specialties; ++s) {
            const auto& sds_codes = config.specialties[s].sds_codes;
            if (!std::binary_search(sds_codes.begin(), sds_codes.end(), prof.sds_code)) continue;
            for (TerritoryLevel level : kTerritoryLevels) {
                LevelSlots& slots = acc[s].levels[ordinal(level)];
                const std::size_t node = lau_ancestors[lau_it->second][ordinal(level)];
                slots.fss_sum[node] += prof.normalized_fss;
                slots.professor_count[node] += 1;
            }
        }
    }

    TerritoryScoreSet set;
    const double national_pop_millions = territory.national_population() / 1e6;

    std::vector<SpecialtyNationals> nationals(n_specialties);
    for (std::size_t s = 0; s < n_specialties; ++s) {
        SpecialtyNationals& nat = nationals[s];
        nat.specialty = config.specialties[s].name;
        nat.foreign_kc = acc[s].foreign_kc;
        nat.unresolved_kc = acc[s].unresolved_kc;
        nat.publication_count = acc[s].publication_count;
        const auto& nuts1_kc = acc[s].levels[ordinal(TerritoryLevel::Nuts1)].kc;
        for (double v : nuts1_kc) nat.national_kc += v;
        nat.degenerate = !(nat.national_kc > 0.0);
        nat.national_kc_pc = nat.degenerate ? 0.0 : nat.national_kc / national_pop_millions;
    }

    for (std::size_t s = 0; s < n_specialties; ++s) {
        for (TerritoryLevel level : kTerritoryLevels) {
            const auto& nodes = territory.nodes(level);
            const LevelSlots& slots = acc[s].levels[ordinal(level)];
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                TerritoryScore row;
                row.territory_code = nodes[i].code;
                row.level = level;
                row.specialty = config.specialties[s].name;
                row.kc = slots.kc[i];
                row.kc_pc = row.kc / (nodes[i].population / 1e6);
                row.normalized_kc_pc =
                    nationals[s].degenerate ? 0.0 : row.kc_pc / nationals[s].national_kc_pc;
                row.professor_count = slots.professor_count[i];
                if (row.professor_count > 0) {
                    row.has_fss = true;
                    row.mean_normalized_fss =
                        slots.fss_sum[i] / static_cast<double>(row.professor_count);
                }
                set.rows.push_back(std::move(row));
            }
        }
    }

    // "overall": KC columns averaged over all specialties (absent KC counts as
    // 0), FSS averaged over covered specialties, headcount = distinct professors
    for (TerritoryLevel level : kTerritoryLevels) {
        const auto& nodes = territory.nodes(level);
        std::vector<long long> distinct_count(nodes.size(), 0);
        for (const ProfessorScore& prof : professors.scores) {
            bool in_any = false;
            for (std::size_t s = 0; s < n_specialties && !in_any; ++s) {
                const auto& sds_codes = config.specialties[s].sds_codes;
                in_any = std::binary_search(sds_codes.begin(), sds_codes.end(), prof.sds_code);
            }
            if (!in_any) continue;
            const std::size_t lau = node_index[ordinal(TerritoryLevel::Lau)].at(prof.lau_code);
            distinct_count[lau_ancestors[lau][ordinal(level)]] += 1;
        }
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            TerritoryScore row;
            row.territory_code = nodes[i].code;
            row.level = level;
            row.specialty = std::string(kOverallSpecialty);
            double kc_sum = 0.0, kc_pc_sum = 0.0, norm_sum = 0.0, fss_sum = 0.0;
            long long covered = 0;
            for (std::size_t s = 0; s < n_specialties; ++s) {
                const LevelSlots& slots = acc[s].levels[ordinal(level)];
                kc_sum += slots.kc[i];
                const double kc_pc = slots.kc[i] / (nodes[i].population / 1e6);
                kc_pc_sum += kc_pc;
                norm_sum += nationals[s].degenerate ? 0.0 : kc_pc / nationals[s].national_kc_pc;
                if (slots.professor_count[i] > 0) {
                    fss_sum +=
                        slots.fss_sum[i] / static_cast<double>(slots.professor_count[i]);
                    ++covered;
                }
            }
            const double n = static_cast<double>(n_specialties);
            row.kc = kc_sum / n;
            row.kc_pc = kc_pc_sum / n;
            row.normalized_kc_pc = norm_sum / n;
            if (covered > 0) {
                row.has_fss = true;
                row.mean_normalized_fss = fss_sum / static_cast<double>(covered);
            }
            row.professor_count = distinct_count[i];
            set.rows.push_back(std::move(row));
        }
    }

    SpecialtyNationals overall;
    overall.specialty = std::string(kOverallSpecialty);
    for (const SpecialtyNationals& nat : nationals) {
        overall.national_kc += nat.national_kc;
        overall.foreign_kc += nat.foreign_kc;
        overall.unresolved_kc += nat.unresolved_kc;
    }
    {
        std::vector<char> seen(pubs.size(), 0);
        for (const auto& members : specialty_members) {
            for (std::size_t ordinal_index : members) seen[ordinal_index] = 1;
        }
        for (char flag : seen) overall.publication_count += flag;
    }
    const double n = static_cast<double>(n_specialties);
    overall.national_kc /= n;
    overall.foreign_kc /= n;
    overall.unresolved_kc /= n;
    overall.degenerate = !(overall.national_kc > 0.0);
    overall.national_kc_pc = overall.degenerate ? 0.0 : overall.national_kc / national_pop_millions;

    set.nationals = std::move(nationals);
    set.nationals.push_back(std::move(overall));
    return set;
}

} // namespace kcmap
