#pragma once

#include "kcmap/corpus.hpp"
#include "kcmap/exec.hpp"
#include "kcmap/territory.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace kcmap {

enum class CollaborationClass { Intramural, Extramural };

std::string_view collaboration_name(CollaborationClass c);

// Intramural when every affiliation on the byline is the same single institution.
CollaborationClass classify_collaboration(const PublicationRecord& pub);

// Positional weights for an n-author byline, summing to 1.
//
// Intramural: 0.40 first, 0.40 last, middles share 0.20.
// Extramural: 0.30 first and last, 0.15 second and second-to-last,
//             remaining middles share 0.10.
// Short bylines collapse roles onto the same position; each position takes the
// sum of its roles' weights, then the vector is rescaled to unit sum.
std::vector<double> author_weights(std::size_t n, CollaborationClass collaboration);

struct AuthorCredit {
    int position = 0;
    double weight = 0.0;
    // (institution_id, share); shares over all authors sum to 1
    std::vector<std::pair<std::string, double>> shares;
};

struct PublicationShares {
    std::map<std::string, double> lau_share;
    double foreign_share = 0.0;
    double unresolved_share = 0.0;
};

struct PublicationCredit {
    std::string pub_id;
    CollaborationClass collaboration = CollaborationClass::Extramural;
    std::vector<AuthorCredit> authors;
    PublicationShares shares;
};

// addresses must come from TerritoryIndex::resolve_institutions on the same corpus.
PublicationCredit credit_publication(const PublicationRecord& pub, const Corpus& corpus,
                                     const std::vector<ResolvedAddress>& addresses);

// One PublicationCredit per corpus publication, in corpus order.
std::vector<PublicationCredit> credit_corpus(const Corpus& corpus,
                                             const std::vector<ResolvedAddress>& addresses,
                                             ExecMode mode);

} // namespace kcmap
