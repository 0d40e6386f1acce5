#include "kcmap/credit.hpp"

#include "kcmap/errors.hpp"

#include <algorithm>
#include <exception>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kcmap {

std::string_view collaboration_name(CollaborationClass c) {
    return c == CollaborationClass::Intramural ? "intramural" : "extramural";
}

CollaborationClass classify_collaboration(const PublicationRecord& pub) {
    std::set<std::string> institutions;
    for (const auto& author : pub.byline) {
        for (const auto& aff : author.affiliations) institutions.insert(aff);
    }
    return institutions.size() == 1 ? CollaborationClass::Intramural
                                    : CollaborationClass::Extramural;
}

std::vector<double> author_weights(std::size_t n, CollaborationClass collaboration) {
    if (n == 0) throw ComputationError("author weights requested for an empty byline");
    std::vector<double> w(n, 0.0);
    if (collaboration == CollaborationClass::Intramural) {
        w[0] += 0.40;
        w[n - 1] += 0.40;
        if (n > 2) {
            const double each = 0.20 / static_cast<double>(n - 2);
            for (std::size_t i = 1; i + 1 < n; ++i) w[i] += each;
        }
    } else {
        w[0] += 0.30;
        w[n - 1] += 0.30;
        if (n >= 2) {
            w[1] += 0.15;
            w[n - 2] += 0.15;
        }
        if (n > 4) {
            const double each = 0.10 / static_cast<double>(n - 4);
            for (std::size_t i = 2; i + 2 < n; ++i) w[i] += each;
        }
    }
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;
    return w;
}

PublicationCredit credit_publication(const PublicationRecord& pub, const Corpus& corpus,
                                     const std::vector<ResolvedAddress>& addresses) {
    PublicationCredit credit;
    credit.pub_id = pub.pub_id;
    credit.collaboration = classify_collaboration(pub);

    const std::vector<double> weights = author_weights(pub.byline.size(), credit.collaboration);
    credit.authors.reserve(pub.byline.size());
    const InstitutionRecord* institutions_base = corpus.institutions().data();

    for (std::size_t i = 0; i < pub.byline.size(); ++i) {
        const AuthorshipEntry& author = pub.byline[i];
        AuthorCredit ac;
        ac.position = author.position;
        ac.weight = weights[i];
        const double share = ac.weight / static_cast<double>(author.affiliations.size());
        for (const std::string& aff : author.affiliations) {
            ac.shares.emplace_back(aff, share);
            const InstitutionRecord* inst = corpus.find_institution(aff);
            const std::size_t ordinal = static_cast<std::size_t>(inst - institutions_base);
            const ResolvedAddress& addr = addresses.at(ordinal);
            switch (addr.kind) {
                case AddressKind::Lau:
                    credit.shares.lau_share[addr.lau_code] += share;
                    break;
                case AddressKind::Foreign:
                    credit.shares.foreign_share += share;
                    break;
                case AddressKind::Unresolved:
                    credit.shares.unresolved_share += share;
                    break;
            }
        }
        credit.authors.push_back(std::move(ac));
    }
    return credit;
}

std::vector<PublicationCredit> credit_corpus(const Corpus& corpus,
                                             const std::vector<ResolvedAddress>& addresses,
                                             ExecMode mode) {
    const auto& pubs = corpus.publications();
    std::vector<PublicationCredit> out(pubs.size());
    if (mode == ExecMode::Parallel) {
#ifdef _OPENMP
        std::exception_ptr failure;
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(pubs.size()); ++i) {
            try {
                out[static_cast<std::size_t>(i)] =
                    credit_publication(pubs[static_cast<std::size_t>(i)], corpus, addresses);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        return out;
#endif
    }
    for (std::size_t i = 0; i < pubs.size(); ++i) {
        out[i] = credit_publication(pubs[i], corpus, addresses);
    }
    return out;
}

} // namespace kcmap
