#include "kcmap/match.hpp"

#include "kcmap/csv.hpp"
#include "kcmap/errors.hpp"
#include "kcmap/text.hpp"

#include <algorithm>
#include <exception>
#include <set>
#include <tuple>

namespace kcmap {

namespace {

std::string separators_to_spaces(std::string_view raw) {
    std::string out(raw);
    for (char& c : out) {
        if (c == ',' || c == '.') c = ' ';
    }
    return out;
}

std::vector<std::string> folded_tokens(std::string_view raw) {
    return split(fold_name(separators_to_spaces(raw)), ' ');
}

// byline given token vs roster given token: single letters are initials
bool given_token_compatible(const std::string& byline_token, const std::string& roster_token) {
    if (byline_token.size() == 1) {
        return !roster_token.empty() && roster_token[0] == byline_token[0];
    }
    return byline_token == roster_token;
}

bool split_compatible(const std::vector<std::string>& roster_tokens,
                      const std::vector<std::string>& surname, const std::vector<std::string>& given) {
    if (surname.empty() || surname.size() > roster_tokens.size()) return false;
    const std::size_t given_count = roster_tokens.size() - surname.size();
    for (std::size_t i = 0; i < surname.size(); ++i) {
        if (roster_tokens[given_count + i] != surname[i]) return false;
    }
    if (given.size() > given_count) return false;
    for (std::size_t i = 0; i < given.size(); ++i) {
        if (!given_token_compatible(given[i], roster_tokens[i])) return false;
    }
    return true;
}

} // namespace

std::string_view name_policy_label(NamePolicy p) {
    return p == NamePolicy::ExactFolded ? "exact-folded" : "surname+initials";
}

std::string_view ambiguity_policy_label(AmbiguityPolicy p) {
    return p == AmbiguityPolicy::RejectAmbiguous ? "reject-ambiguous" : "error";
}

RosterIndex::RosterIndex(const Roster& roster, NamePolicy policy) : policy_(policy) {
    folded_tokens_.reserve(roster.professors.size());
    for (const ProfessorRecord& prof : roster.professors) {
        std::vector<std::string> tokens = folded_tokens(prof.full_name);
        if (tokens.empty()) {
            throw ValidationError("professor " + prof.professor_id +
                                  " has a name that folds to nothing: '" + prof.full_name + "'");
        }
        std::string key;
        if (policy_ == NamePolicy::ExactFolded) {
            key = join(tokens, " ");
        } else {
            key = tokens.back();
        }
        token_index_.emplace(&prof, folded_tokens_.size());
        folded_tokens_.push_back(std::move(tokens));
        by_key_[key].push_back(&prof);
    }
}

std::vector<const ProfessorRecord*> RosterIndex::candidates(std::string_view raw_name) const {
    std::vector<const ProfessorRecord*> out;
    std::string preprocessed = separators_to_spaces(raw_name);

    if (policy_ == NamePolicy::ExactFolded) {
        std::string folded = join(split(fold_name(preprocessed), ' '), " ");
        auto it = by_key_.find(folded);
        if (it != by_key_.end()) out = it->second;
    } else {
        std::vector<std::string> surname, given;
        bool explicit_split = false;
        if (auto comma = raw_name.find(','); comma != std::string_view::npos) {
            surname = folded_tokens(raw_name.substr(0, comma));
            given = folded_tokens(raw_name.substr(comma + 1));
            explicit_split = true;
        }
        std::vector<std::string> tokens = folded_tokens(raw_name);
        if (tokens.empty()) return out;
        const std::string& key = explicit_split ? (surname.empty() ? tokens.back() : surname.back())
                                                : tokens.back();
        auto it = by_key_.find(key);
        if (it == by_key_.end()) return out;
        for (const ProfessorRecord* prof : it->second) {
            const std::vector<std::string>& roster_tokens =
                folded_tokens_[token_index_.at(prof)];
            bool ok = false;
            if (explicit_split) {
                ok = split_compatible(roster_tokens, surname, given);
            } else {
                // given-first byline: try every suffix as the surname
                for (std::size_t cut = 0; cut < tokens.size() && !ok; ++cut) {
                    std::vector<std::string> g(tokens.begin(), tokens.begin() + cut);
                    std::vector<std::string> s(tokens.begin() + cut, tokens.end());
                    ok = split_compatible(roster_tokens, s, g);
                }
            }
            if (ok) out.push_back(prof);
        }
    }
    std::sort(out.begin(), out.end(), [](const ProfessorRecord* a, const ProfessorRecord* b) {
        return a->professor_id < b->professor_id;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

struct PubMatches {
    std::vector<Assignment> assignments;
    std::vector<BylineRef> unmatched;
    std::vector<AmbiguousCase> ambiguous;
};

PubMatches match_publication(const PublicationRecord& pub, const RosterIndex& index,
                             const MatchRuleConfig& rules) {
    PubMatches out;
    for (const AuthorshipEntry& author : pub.byline) {
        std::vector<const ProfessorRecord*> candidates = index.candidates(author.raw_name);
        if (rules.require_university_match) {
            std::erase_if(candidates, [&author](const ProfessorRecord* prof) {
                return std::find(author.affiliations.begin(), author.affiliations.end(),
                                 prof->university_id) == author.affiliations.end();
            });
        }
        if (candidates.empty()) {
            out.unmatched.push_back({pub.pub_id, author.position});
        } else if (candidates.size() == 1) {
            out.assignments.push_back({pub.pub_id, author.position, candidates[0]->professor_id});
        } else {
            AmbiguousCase c;
            c.pub_id = pub.pub_id;
            c.position = author.position;
            for (const ProfessorRecord* prof : candidates) {
                c.candidates.push_back(prof->professor_id);
            }
            if (rules.ambiguity_policy == AmbiguityPolicy::Error) {
                throw ComputationError("ambiguous authorship: pub " + pub.pub_id + " position " +
                                       std::to_string(author.position) + " matches professors " +
                                       join(c.candidates, ", "));
            }
            out.ambiguous.push_back(std::move(c));
        }
    }
    return out;
}

} // namespace

MatchResult match_authorships(const Corpus& corpus, const Roster& roster,
                              const MatchRuleConfig& rules, ExecMode mode) {
    RosterIndex index(roster, rules.name_policy);
    const auto& pubs = corpus.publications();
    std::vector<PubMatches> per_pub(pubs.size());

    if (mode == ExecMode::Parallel) {
#ifdef _OPENMP
        std::exception_ptr failure;
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(pubs.size()); ++i) {
            try {
                per_pub[static_cast<std::size_t>(i)] =
                    match_publication(pubs[static_cast<std::size_t>(i)], index, rules);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
#else
        for (std::size_t i = 0; i < pubs.size(); ++i) {
            per_pub[i] = match_publication(pubs[i], index, rules);
        }
#endif
    } else {
        for (std::size_t i = 0; i < pubs.size(); ++i) {
            per_pub[i] = match_publication(pubs[i], index, rules);
        }
    }

    MatchResult result;
    for (PubMatches& pm : per_pub) {
        std::move(pm.assignments.begin(), pm.assignments.end(),
                  std::back_inserter(result.assignments));
        std::move(pm.unmatched.begin(), pm.unmatched.end(), std::back_inserter(result.unmatched));
        std::move(pm.ambiguous.begin(), pm.ambiguous.end(), std::back_inserter(result.ambiguous));
    }
    return result;
}

MatchQuality evaluate_matching(const MatchResult& result, const std::vector<Assignment>& gold,
                               const Corpus& corpus) {
    using Triple = std::tuple<std::string, int, std::string>;
    std::set<Triple> gold_set;
    for (const Assignment& a : gold) {
        const PublicationRecord* pub = corpus.find_publication(a.pub_id);
        if (!pub) {
            throw ValidationError("gold assignment references unknown pub_id '" + a.pub_id + "'");
        }
        if (a.position < 1 || a.position > static_cast<int>(pub->byline.size())) {
            throw ValidationError("gold assignment for pub " + a.pub_id +
                                  " names position " + std::to_string(a.position) +
                                  " outside the byline");
        }
        gold_set.emplace(a.pub_id, a.position, a.professor_id);
    }
    std::set<Triple> result_set;
    for (const Assignment& a : result.assignments) {
        result_set.emplace(a.pub_id, a.position, a.professor_id);
    }

    MatchQuality q;
    for (const Triple& t : result_set) {
        if (gold_set.count(t)) {
            ++q.tp;
        } else {
            ++q.fp;
        }
    }
    for (const Triple& t : gold_set) {
        if (!result_set.count(t)) ++q.fn;
    }
    q.precision = (q.tp + q.fp == 0) ? 1.0
                                     : static_cast<double>(q.tp) / static_cast<double>(q.tp + q.fp);
    q.recall = (q.tp + q.fn == 0) ? 1.0
                                  : static_cast<double>(q.tp) / static_cast<double>(q.tp + q.fn);
    // harmonic mean in count form: one division, so 16/20 really is 0.8
    const long long f_denom = 2 * q.tp + q.fp + q.fn;
    q.f_measure = (f_denom == 0) ? 1.0
                                 : 2.0 * static_cast<double>(q.tp) / static_cast<double>(f_denom);
    return q;
}

std::vector<Assignment> load_gold(const std::filesystem::path& gold_path) {
    CsvReader csv(gold_path);
    const std::size_t col_pub = csv.require_column("pub_id");
    const std::size_t col_pos = csv.require_column("position");
    const std::size_t col_prof = csv.require_column("professor_id");

    std::vector<Assignment> out;
    CsvReader::Row row;
    while (csv.next(row)) {
        const std::string context = csv.name() + " line " + std::to_string(row.line_no);
        Assignment a;
        a.pub_id = row.fields[col_pub];
        if (a.pub_id.empty()) throw ValidationError(context + ": empty pub_id");
        try {
            a.position = std::stoi(row.fields[col_pos]);
        } catch (const std::exception&) {
            throw ValidationError(context + ": position is not an integer");
        }
        if (a.position < 1) throw ValidationError(context + ": position must be >= 1");
        a.professor_id = row.fields[col_prof];
        if (a.professor_id.empty()) throw ValidationError(context + ": empty professor_id");
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace kcmap
