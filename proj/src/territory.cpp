#include "kcmap/territory.hpp"

#include "kcmap/csv.hpp"
#include "kcmap/errors.hpp"
#include "kcmap/text.hpp"

#include <algorithm>
#include <unordered_set>

namespace kcmap {

namespace {

constexpr std::string_view kSyntheticNationCode = "NATION";

std::string_view gazetteer_level_name(TerritoryLevel level) {
    return level == TerritoryLevel::Nation ? "nation" : level_name(level);
}

std::optional<TerritoryLevel> parse_gazetteer_level(std::string_view name) {
    if (name == "nation") return TerritoryLevel::Nation;
    return parse_level(name);
}

std::optional<TerritoryLevel> parent_level_of(TerritoryLevel level) {
    switch (level) {
        case TerritoryLevel::Lau: return TerritoryLevel::Nuts3;
        case TerritoryLevel::Nuts3: return TerritoryLevel::Nuts2;
        case TerritoryLevel::Nuts2: return TerritoryLevel::Nuts1;
        case TerritoryLevel::Nuts1: return TerritoryLevel::Nation;
        case TerritoryLevel::Nation: return std::nullopt;
    }
    return std::nullopt;
}

double parse_positive_number(const std::string& value, const std::string& context) {
    double out = 0.0;
    try {
        std::size_t consumed = 0;
        out = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ValidationError(context + ": not a number: '" + value + "'");
    }
    if (!(out > 0.0)) {
        throw ValidationError(context + ": population must be positive, got '" + value + "'");
    }
    return out;
}

} // namespace

std::string_view level_name(TerritoryLevel level) {
    switch (level) {
        case TerritoryLevel::Lau: return "lau";
        case TerritoryLevel::Nuts3: return "nuts3";
        case TerritoryLevel::Nuts2: return "nuts2";
        case TerritoryLevel::Nuts1: return "nuts1";
        case TerritoryLevel::Nation: return "nation";
    }
    return "lau";
}

std::optional<TerritoryLevel> parse_level(std::string_view name) {
    for (TerritoryLevel level : kTerritoryLevels) {
        if (level_name(level) == name) return level;
    }
    return std::nullopt;
}

const std::vector<TerritoryNode>& TerritoryIndex::nodes(TerritoryLevel level) const {
    return levels_[ordinal(level)];
}

const TerritoryNode* TerritoryIndex::find(TerritoryLevel level, std::string_view code) const {
    const auto& map = index_[ordinal(level)];
    auto it = map.find(std::string(code));
    if (it == map.end()) return nullptr;
    return &levels_[ordinal(level)][it->second];
}

const TerritoryNode& TerritoryIndex::nation() const {
    return levels_[ordinal(TerritoryLevel::Nation)].front();
}

TerritoryIndex TerritoryIndex::build(const std::filesystem::path& gazetteer_path,
                                     const std::filesystem::path& population_path) {
    TerritoryIndex idx;

    {
        CsvReader csv(gazetteer_path);
        const std::size_t col_code = csv.require_column("code");
        const std::size_t col_level = csv.require_column("level");
        const std::size_t col_name = csv.require_column("name");
        const std::size_t col_parent = csv.require_column("parent_code");
        const std::size_t col_aliases = csv.require_column("aliases");

        std::unordered_set<std::string> all_codes;
        CsvReader::Row row;
        while (csv.next(row)) {
            const std::string context = csv.name() + " line " + std::to_string(row.line_no);
            TerritoryNode node;
            node.code = row.fields[col_code];
            if (node.code.empty()) throw ValidationError(context + ": empty code");
            auto level = parse_gazetteer_level(row.fields[col_level]);
            if (!level) {
                throw ValidationError(context + ": unknown level '" + row.fields[col_level] +
                                      "' (expected lau, nuts3, nuts2, nuts1 or nation)");
            }
            node.level = *level;
            node.name = row.fields[col_name];
            if (node.name.empty()) {
                throw ValidationError(context + ": territory " + node.code + " has no name");
            }
            node.parent_code = row.fields[col_parent];
            if (node.level == TerritoryLevel::Nation && !node.parent_code.empty()) {
                throw ValidationError(context + ": nation row " + node.code +
                                      " must not have a parent");
            }
            if (node.level != TerritoryLevel::Nation && node.level != TerritoryLevel::Nuts1 &&
                node.parent_code.empty()) {
                throw ValidationError(context + ": territory " + node.code + " has no parent");
            }
            node.aliases = split_list(row.fields[col_aliases], ';');
            if (!all_codes.insert(node.code).second) {
                throw ValidationError(context + ": duplicate territory code " + node.code);
            }
            idx.mutable_nodes(node.level).push_back(std::move(node));
        }

        if (idx.mutable_nodes(TerritoryLevel::Lau).empty()) {
            throw ValidationError(gazetteer_path.string() + ": gazetteer has no LAU rows");
        }
        auto& nations = idx.mutable_nodes(TerritoryLevel::Nation);
        if (nations.size() > 1) {
            throw ValidationError(gazetteer_path.string() + ": more than one nation row");
        }
        if (nations.empty()) {
            TerritoryNode apex;
            apex.code = std::string(kSyntheticNationCode);
            apex.name = std::string(kSyntheticNationCode);
            apex.level = TerritoryLevel::Nation;
            if (all_codes.count(apex.code)) {
                throw ValidationError(gazetteer_path.string() +
                                      ": no nation row, and the code NATION reserved for the "
                                      "synthetic apex is already taken");
            }
            nations.push_back(std::move(apex));
        }
    }

    for (TerritoryLevel level :
         {TerritoryLevel::Lau, TerritoryLevel::Nuts3, TerritoryLevel::Nuts2, TerritoryLevel::Nuts1,
          TerritoryLevel::Nation}) {
        auto& nodes = idx.mutable_nodes(level);
        std::sort(nodes.begin(), nodes.end(),
                  [](const auto& a, const auto& b) { return a.code < b.code; });
        auto& map = idx.index_[ordinal(level)];
        for (std::size_t i = 0; i < nodes.size(); ++i) map.emplace(nodes[i].code, i);
    }

    // parents must exist exactly one level up (which also rules out cycles)
    const std::string& nation_code = idx.nation().code;
    for (TerritoryLevel level : kTerritoryLevels) {
        auto& nodes = idx.mutable_nodes(level);
        const TerritoryLevel up = *parent_level_of(level);
        for (auto& node : nodes) {
            if (level == TerritoryLevel::Nuts1) {
                if (node.parent_code.empty()) {
                    node.parent_code = nation_code;
                } else if (node.parent_code != nation_code) {
                    throw ValidationError("NUTS1 " + node.code + " names parent " +
                                          node.parent_code + " but the nation row is " +
                                          nation_code);
                }
                continue;
            }
            if (!idx.index_[ordinal(up)].count(node.parent_code)) {
                throw ValidationError(std::string(gazetteer_level_name(level)) + " " + node.code +
                                      " names parent " + node.parent_code +
                                      " which has no gazetteer row at level " +
                                      std::string(gazetteer_level_name(up)));
            }
        }
    }

    // city lookup over folded LAU names and aliases; homonyms must be
    // disambiguated in the gazetteer
    for (const auto& lau : idx.nodes(TerritoryLevel::Lau)) {
        std::vector<std::string> keys;
        keys.push_back(fold_name(lau.name));
        for (const auto& alias : lau.aliases) keys.push_back(fold_name(alias));
        for (const auto& key : keys) {
            if (key.empty()) continue;
            auto [it, inserted] = idx.lau_by_folded_city_.emplace(key, lau.code);
            if (!inserted && it->second != lau.code) {
                throw ValidationError("city name '" + key + "' is shared by LAUs " + it->second +
                                      " and " + lau.code +
                                      "; disambiguate via gazetteer aliases");
            }
        }
    }

    {
        CsvReader csv(population_path);
        const std::size_t col_code = csv.require_column("code");
        const std::size_t col_pop = csv.require_column("population");
        const std::size_t col_year = csv.require_column("reference_year");

        std::unordered_set<std::string> seen;
        std::array<std::vector<char>, 5> loaded;
        for (TerritoryLevel level :
             {TerritoryLevel::Lau, TerritoryLevel::Nuts3, TerritoryLevel::Nuts2,
              TerritoryLevel::Nuts1, TerritoryLevel::Nation}) {
            loaded[ordinal(level)].assign(idx.nodes(level).size(), 0);
        }

        CsvReader::Row row;
        while (csv.next(row)) {
            const std::string context = csv.name() + " line " + std::to_string(row.line_no);
            const std::string& code = row.fields[col_code];
            if (!seen.insert(code).second) {
                throw ValidationError(context + ": duplicate population row for " + code);
            }
            try {
                std::size_t consumed = 0;
                (void)std::stoi(row.fields[col_year], &consumed);
                if (consumed != row.fields[col_year].size()) throw std::invalid_argument("t");
            } catch (const std::exception&) {
                throw ValidationError(context + ": reference_year is not an integer");
            }
            bool found = false;
            for (TerritoryLevel level :
                 {TerritoryLevel::Lau, TerritoryLevel::Nuts3, TerritoryLevel::Nuts2,
                  TerritoryLevel::Nuts1, TerritoryLevel::Nation}) {
                auto it = idx.index_[ordinal(level)].find(code);
                if (it == idx.index_[ordinal(level)].end()) continue;
                idx.mutable_nodes(level)[it->second].population =
                    parse_positive_number(row.fields[col_pop], context);
                loaded[ordinal(level)][it->second] = 1;
                found = true;
                break;
            }
            if (!found) {
                throw ValidationError(context + ": population row for unknown territory " + code);
            }
        }

        const auto& laus = idx.nodes(TerritoryLevel::Lau);
        for (std::size_t i = 0; i < laus.size(); ++i) {
            if (!loaded[ordinal(TerritoryLevel::Lau)][i]) {
                throw ValidationError(population_path.string() + ": no population row for LAU " +
                                      laus[i].code);
            }
        }

        // levels without an independent row take the sum of their children,
        // child-by-child in sorted code order
        auto ladder = [&idx, &loaded](TerritoryLevel child_level, TerritoryLevel parent_level) {
            const auto& children = idx.nodes(child_level);
            auto& parents = idx.mutable_nodes(parent_level);
            const auto& parent_map = idx.index_[ordinal(parent_level)];
            std::vector<double> sums(parents.size(), 0.0);
            for (const auto& child : children) {
                sums[parent_map.at(child.parent_code)] += child.population;
            }
            for (std::size_t i = 0; i < parents.size(); ++i) {
                if (!loaded[ordinal(parent_level)][i]) parents[i].population = sums[i];
            }
        };
        ladder(TerritoryLevel::Lau, TerritoryLevel::Nuts3);
        ladder(TerritoryLevel::Nuts3, TerritoryLevel::Nuts2);
        ladder(TerritoryLevel::Nuts2, TerritoryLevel::Nuts1);
        ladder(TerritoryLevel::Nuts1, TerritoryLevel::Nation);
    }

    return idx;
}

const std::string& TerritoryIndex::ancestor_code(std::string_view lau_code,
                                                 TerritoryLevel target) const {
    const TerritoryNode* node = find(TerritoryLevel::Lau, lau_code);
    if (!node) {
        throw ComputationError("unknown LAU code: " + std::string(lau_code));
    }
    TerritoryLevel level = TerritoryLevel::Lau;
    while (level != target) {
        auto up = parent_level_of(level);
        if (!up) break;
        const TerritoryNode* parent = find(*up, node->parent_code);
        if (!parent) {
            throw ComputationError(std::string(gazetteer_level_name(level)) + " " + node->code +
                                   " has no parent node");
        }
        node = parent;
        level = *up;
    }
    return node->code;
}

ResolvedAddress TerritoryIndex::reduce_address(std::string_view city, std::string_view country,
                                               std::string_view analysis_country) const {
    if (fold_name(country) != fold_name(analysis_country)) {
        return {AddressKind::Foreign, {}};
    }
    std::string folded = fold_name(city);
    if (folded.empty()) return {AddressKind::Unresolved, {}};
    auto it = lau_by_folded_city_.find(folded);
    if (it == lau_by_folded_city_.end()) return {AddressKind::Unresolved, {}};
    return {AddressKind::Lau, it->second};
}

ResolvedAddress TerritoryIndex::resolve(const InstitutionRecord& institution,
                                        bool domestic) const {
    if (!domestic) return {AddressKind::Foreign, {}};
    if (!institution.lau_code.empty()) {
        if (!find(TerritoryLevel::Lau, institution.lau_code)) {
            throw ValidationError("institution " + institution.institution_id +
                                  " carries LAU code " + institution.lau_code +
                                  " that is not in the gazetteer");
        }
        return {AddressKind::Lau, institution.lau_code};
    }
    if (institution.city.empty()) return {AddressKind::Unresolved, {}};
    std::string folded = fold_name(institution.city);
    if (folded.empty()) return {AddressKind::Unresolved, {}};
    auto it = lau_by_folded_city_.find(folded);
    if (it == lau_by_folded_city_.end()) return {AddressKind::Unresolved, {}};
    return {AddressKind::Lau, it->second};
}

std::vector<ResolvedAddress> TerritoryIndex::resolve_institutions(const Corpus& corpus) const {
    std::vector<ResolvedAddress> out;
    out.reserve(corpus.institutions().size());
    for (const auto& inst : corpus.institutions()) {
        out.push_back(resolve(inst, corpus.is_domestic(inst)));
    }
    return out;
}

std::map<std::string, double> TerritoryIndex::rollup(
    const std::map<std::string, double>& lau_values, TerritoryLevel target) const {
    for (const auto& [code, value] : lau_values) {
        (void)value;
        if (!find(TerritoryLevel::Lau, code)) {
            throw ComputationError("rollup input references unknown LAU " + code);
        }
    }
    if (target == TerritoryLevel::Lau) return lau_values;

    std::map<std::string, double> current = lau_values;
    TerritoryLevel level = TerritoryLevel::Lau;
    while (level != target) {
        const TerritoryLevel up = *parent_level_of(level);
        std::map<std::string, double> next;
        for (const auto& [code, value] : current) {
            const TerritoryNode* node = find(level, code);
            next[node->parent_code] += value;
        }
        current = std::move(next);
        level = up;
    }
    return current;
}

} // namespace kcmap
