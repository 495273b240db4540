#include "sftid/identification.hpp"

#include "sftid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sftid {

Scorer::Scorer(const Potential& phi, std::vector<Grammar> candidates) : phi_(phi) {
    if (candidates.empty())
        throw InvalidArgument("identification needs at least one candidate grammar");
    chains_.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].lexicon() != phi.lexicon())
            throw InvalidArgument("candidate " + std::to_string(i) + " has lexicon size " +
                                  std::to_string(candidates[i].theta()) + ", potential has " +
                                  std::to_string(phi.theta()));
        chains_.push_back(gibbs_chain(candidates[i], phi));
    }
}

IdentificationOutcome Scorer::identify(std::span<const Symbol> w, double tie_tol) const {
    if (!(tie_tol >= 0.0))
        throw InvalidArgument("tie tolerance must be nonnegative");
    check_word(w, phi_.lexicon());

    IdentificationOutcome out;
    out.n = w.size();
    out.tie_tolerance = tie_tol;
    out.scores.reserve(chains_.size());

    double best_ll = kMinusInfinity;
    double least_h = std::numeric_limits<double>::infinity();
    for (const auto& chain : chains_) {
        CandidateScore s{chain.grammar(), kMinusInfinity, std::nullopt, false};
        s.admissible = admits(chain.grammar(), w);
        if (s.admissible) {
            s.log_likelihood = cylinder_log_measure(chain, w);
            s.entropy = ks_entropy(chain);
            best_ll = std::max(best_ll, s.log_likelihood);
            least_h = std::min(least_h, *s.entropy);
        }
        out.scores.push_back(std::move(s));
    }

    out.no_admissible_candidate = best_ll == kMinusInfinity;
    if (out.no_admissible_candidate)
        return out;
    for (std::size_t i = 0; i < out.scores.size(); ++i) {
        const auto& s = out.scores[i];
        if (!s.admissible)
            continue;
        if (s.log_likelihood >= best_ll - tie_tol)
            out.ml_set.push_back(i);
        if (*s.entropy <= least_h + tie_tol)
            out.min_entropy_set.push_back(i);
    }
    return out;
}

IdentificationOutcome ml_set(std::span<const Symbol> w, const Potential& phi,
                             const std::vector<Grammar>& candidates, double tie_tol) {
    return Scorer(phi, candidates).identify(w, tie_tol);
}

IdentificationOutcome min_entropy_set(std::span<const Symbol> w, const Potential& phi,
                                      const std::vector<Grammar>& candidates, double tie_tol) {
    return Scorer(phi, candidates).identify(w, tie_tol);
}

std::vector<IdentificationOutcome> identify_curve(const GibbsChain& truth, const Scorer& scorer,
                                                  std::span<const std::size_t> checkpoints,
                                                  std::uint64_t seed, double tie_tol) {
    if (checkpoints.empty())
        throw InvalidArgument("identification curve needs at least one checkpoint");
    const auto minimum = std::max<std::size_t>(1, static_cast<std::size_t>(truth.order()));
    if (checkpoints.front() < minimum)
        throw InvalidArgument("checkpoint " + std::to_string(checkpoints.front()) +
                              " is below the shortest scorable prefix " + std::to_string(minimum));
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw InvalidArgument("checkpoints must be strictly ascending");

    const Sample path = sample(truth, checkpoints.back(), seed);
    std::vector<IdentificationOutcome> curve;
    curve.reserve(checkpoints.size());
    for (auto n : checkpoints)
        curve.push_back(scorer.identify(std::span<const Symbol>(path.word).first(n), tie_tol));
    return curve;
}

std::vector<IdentificationOutcome> identify_curve(const GibbsChain& truth, const Potential& phi,
                                                  const std::vector<Grammar>& candidates,
                                                  std::span<const std::size_t> checkpoints,
                                                  std::uint64_t seed, double tie_tol) {
    return identify_curve(truth, Scorer(phi, candidates), checkpoints, seed, tie_tol);
}

} // namespace sftid
