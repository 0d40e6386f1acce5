#pragma once

#include "kcmap/corpus.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kcmap {

enum class TerritoryLevel { Lau, Nuts3, Nuts2, Nuts1, Nation };

// the four sub-national reporting levels, finest first
inline constexpr std::array<TerritoryLevel, 4> kTerritoryLevels = {
    TerritoryLevel::Lau, TerritoryLevel::Nuts3, TerritoryLevel::Nuts2, TerritoryLevel::Nuts1};

std::string_view level_name(TerritoryLevel level);
// accepts the reporting levels only (lau, nuts3, nuts2, nuts1)
std::optional<TerritoryLevel> parse_level(std::string_view name);

struct TerritoryNode {
    std::string code;
    std::string name;
    TerritoryLevel level = TerritoryLevel::Lau;
    std::string parent_code;  // empty only at the nation apex
    double population = 0.0;  // loaded row if present, else sum of children
    std::vector<std::string> aliases;
};

enum class AddressKind { Lau, Foreign, Unresolved };

struct ResolvedAddress {
    AddressKind kind = AddressKind::Unresolved;
    std::string lau_code;  // set only when kind == Lau
};

// Administrative hierarchy LAU -> NUTS3 -> NUTS2 -> NUTS1 -> nation, built from
// a long-format gazetteer (one row per node at any level). Parents must sit
// exactly one level up, which rules out cycles by construction. A nation row is
// optional; a synthetic apex is added when absent. City lookup folds names and
// aliases; a folded name shared by two LAUs is rejected at build time, so the
// gazetteer must disambiguate through aliases.
//
// Node lists are kept sorted by code and populations of upper levels without an
// independent row are summed child-by-child in that order, so additive rollups
// reproduce them exactly.
class TerritoryIndex {
public:
    static TerritoryIndex build(const std::filesystem::path& gazetteer_path,
                                const std::filesystem::path& population_path);

    const std::vector<TerritoryNode>& nodes(TerritoryLevel level) const;
    const TerritoryNode* find(TerritoryLevel level, std::string_view code) const;
    const TerritoryNode& nation() const;
    double national_population() const { return nation().population; }

    // Walks the parent chain; identity when target == Lau. Unknown LAU throws.
    const std::string& ancestor_code(std::string_view lau_code, TerritoryLevel target) const;

    // City + country to LAU / Foreign / Unresolved. Total: never throws on
    // unmatched input; Unresolved is a value.
    ResolvedAddress reduce_address(std::string_view city, std::string_view country,
                                   std::string_view analysis_country) const;

    // Institution address resolution: an explicit lau_code wins (unknown code
    // is a data error); otherwise the folded city is matched.
    ResolvedAddress resolve(const InstitutionRecord& institution, bool domestic) const;

    // One entry per corpus institution, in corpus order.
    std::vector<ResolvedAddress> resolve_institutions(const Corpus& corpus) const;

    // Sums LAU-keyed values up to the target level, children in sorted key
    // order; level-transitive exactly. Unknown LAU keys throw.
    std::map<std::string, double> rollup(const std::map<std::string, double>& lau_values,
                                         TerritoryLevel target) const;

private:
    static std::size_t ordinal(TerritoryLevel level) { return static_cast<std::size_t>(level); }
    std::vector<TerritoryNode>& mutable_nodes(TerritoryLevel level) {
        return levels_[ordinal(level)];
    }

    std::array<std::vector<TerritoryNode>, 5> levels_;
    std::array<std::unordered_map<std::string, std::size_t>, 5> index_;
    std::unordered_map<std::string, std::string> lau_by_folded_city_;
};

} // namespace kcmap
