#ifndef SFTID_IDENTIFICATION_HPP
#define SFTID_IDENTIFICATION_HPP

// Maximum-likelihood and minimum-entropy identification of a grammar from a
// finite sample, over a finite candidate class.

#include "sftid/gibbs.hpp"
#include "sftid/symbolic.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sftid {

inline constexpr double kDefaultTieTolerance = 1e-9;

struct CandidateScore {
    Grammar grammar;
    double log_likelihood = kMinusInfinity; // -inf when inadmissible
    std::optional<double> entropy;          // set only when admissible
    bool admissible = false;
};

struct IdentificationOutcome {
    std::size_t n = 0;
    std::vector<CandidateScore> scores;
    /// Indices into `scores`, ascending.
    std::vector<std::size_t> ml_set;
    std::vector<std::size_t> min_entropy_set;
    double tie_tolerance = kDefaultTieTolerance;
    bool no_admissible_candidate = false;
};

/// Gibbs chains of one potential on every candidate, built once and reused
/// across samples. Scoring is a pure function of the word.
class Scorer {
public:
    /// Throws InvalidArgument for an empty candidate list or a lexicon
    /// mismatch between candidates and potential.
    Scorer(const Potential& phi, std::vector<Grammar> candidates);

    const Potential& potential() const noexcept { return phi_; }
    std::span<const GibbsChain> chains() const noexcept { return chains_; }
    std::size_t size() const noexcept { return chains_.size(); }

    /// Both identification sets for `w`. tie_tol >= 0: the ML set is every
    /// candidate within tie_tol of the best log-likelihood, the minimum-entropy
    /// set every admissible candidate within tie_tol of the least entropy.
    IdentificationOutcome identify(std::span<const Symbol> w, double tie_tol = kDefaultTieTolerance) const;

private:
    Potential phi_;
    std::vector<GibbsChain> chains_;
};

/// Maximum-likelihood set of `w` among `candidates`. The returned outcome
/// carries every candidate's scores; an empty ml_set with
/// no_admissible_candidate set means no candidate admits `w`.
IdentificationOutcome ml_set(std::span<const Symbol> w, const Potential& phi,
                             const std::vector<Grammar>& candidates,
                             double tie_tol = kDefaultTieTolerance);

/// Minimum-entropy set: least Gibbs entropy among candidates admitting `w`.
IdentificationOutcome min_entropy_set(std::span<const Symbol> w, const Potential& phi,
                                      const std::vector<Grammar>& candidates,
                                      double tie_tol = kDefaultTieTolerance);

/// Scores the prefixes of one sampled path at each checkpoint. Checkpoints
/// must be strictly ascending and at least max(1, range-1).
std::vector<IdentificationOutcome> identify_curve(const GibbsChain& truth, const Scorer& scorer,
                                                  std::span<const std::size_t> checkpoints,
                                                  std::uint64_t seed,
                                                  double tie_tol = kDefaultTieTolerance);

std::vector<IdentificationOutcome> identify_curve(const GibbsChain& truth, const Potential& phi,
                                                  const std::vector<Grammar>& candidates,
                                                  std::span<const std::size_t> checkpoints,
                                                  std::uint64_t seed,
                                                  double tie_tol = kDefaultTieTolerance);

} // namespace sftid

#endif
