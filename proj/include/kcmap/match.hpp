#pragma once

#include "kcmap/corpus.hpp"
#include "kcmap/exec.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kcmap {

enum class NamePolicy { ExactFolded, SurnameInitials };
enum class AmbiguityPolicy { RejectAmbiguous, Error };

std::string_view name_policy_label(NamePolicy p);
std::string_view ambiguity_policy_label(AmbiguityPolicy p);

// All three rule fields must be chosen explicitly; there is no default-constructed config.
struct MatchRuleConfig {
    MatchRuleConfig(bool require_university, NamePolicy names, AmbiguityPolicy ambiguity)
        : require_university_match(require_university),
          name_policy(names),
          ambiguity_policy(ambiguity) {}

    bool require_university_match;
    NamePolicy name_policy;
    AmbiguityPolicy ambiguity_policy;
};

struct BylineRef {
    std::string pub_id;
    int position = 0;
};

struct Assignment {
    std::string pub_id;
    int position = 0;
    std::string professor_id;
};

struct AmbiguousCase {
    std::string pub_id;
    int position = 0;
    std::vector<std::string> candidates;  // professor ids, sorted
};

struct MatchResult {
    std::vector<Assignment> assignments;
    std::vector<BylineRef> unmatched;
    std::vector<AmbiguousCase> ambiguous;
};

struct MatchQuality {
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
    double precision = 1.0;
    double recall = 1.0;
    double f_measure = 0.0;
};

// A byline name is split into a surname part and a given part (explicitly at a
// comma, otherwise every split is tried), commas and periods act as
// separators, and both sides are folded. A professor is compatible when the
// surname part is a suffix of their folded full name and the given tokens
// agree position by position: single letters as initials, longer tokens
// verbatim. Roster names are written given names first.
class RosterIndex {
public:
    RosterIndex(const Roster& roster, NamePolicy policy);

    // Distinct compatible professors, sorted by professor_id.
    std::vector<const ProfessorRecord*> candidates(std::string_view raw_name) const;

private:
    NamePolicy policy_;
    // ExactFolded: key is the whole folded name. SurnameInitials: key is the
    // last folded token.
    std::unordered_map<std::string, std::vector<const ProfessorRecord*>> by_key_;
    std::vector<std::vector<std::string>> folded_tokens_;  // parallel to roster order
    std::unordered_map<const ProfessorRecord*, std::size_t> token_index_;
};

MatchResult match_authorships(const Corpus& corpus, const Roster& roster,
                              const MatchRuleConfig& rules, ExecMode mode);

// Set comparison of (pub_id, position, professor_id) triples.
MatchQuality evaluate_matching(const MatchResult& result, const std::vector<Assignment>& gold,
                               const Corpus& corpus);

std::vector<Assignment> load_gold(const std::filesystem::path& gold_path);

} // namespace kcmap
