#ifndef SFTID_GIBBS_HPP
#define SFTID_GIBBS_HPP

// Finite-range potentials, transfer matrices, Perron eigendata and the exact
// Markov realization of the Gibbs state of a potential on a grammar's shift.

#include "sftid/random.hpp"
#include "sftid/symbolic.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace sftid {

inline constexpr double kMinusInfinity = -std::numeric_limits<double>::infinity();

/// Real function of `range` consecutive symbols, tabulated densely over all
/// theta^range words (inadmissible ones included, so the same potential is
/// usable with every grammar on the lexicon). Index of a window is its
/// base-theta value, first symbol most significant.
class Potential {
public:
    /// Identically zero.
    Potential(Lexicon lex, int range);

    /// Throws InvalidArgument if the table size is not theta^range or a
    /// value is not finite.
    Potential(Lexicon lex, int range, std::vector<double> table);

    static Potential zero(Lexicon lex, int range = 2) { return Potential(lex, range); }
    static Potential constant(Lexicon lex, int range, double c);

    /// Values drawn uniformly from [-bound, bound].
    static Potential random(Lexicon lex, int range, double bound, Rng& rng);

    const Lexicon& lexicon() const noexcept { return lex_; }
    int theta() const noexcept { return lex_.theta(); }
    int range() const noexcept { return range_; }
    std::size_t size() const noexcept { return table_.size(); }
    std::span<const double> table() const noexcept { return table_; }

    double at_code(std::size_t code) const { return table_.at(code); }
    /// `window` must have exactly range() letters.
    double operator()(std::span<const Symbol> window) const;
    void set(std::span<const Symbol> window, double value);

    /// Sum of the potential over every full window of `w`.
    double birkhoff_sum(std::span<const Symbol> w) const;

    double sup_norm() const noexcept;
    bool is_zero() const noexcept { return sup_norm() == 0.0; }

    Potential scaled(double beta) const;
    Potential shifted(double c) const;
    /// Same function read through a permutation of the lexicon:
    /// result(perm[x_0], ..., perm[x_{r-1}]) = (*this)(x_0, ..., x_{r-1}).
    Potential relabeled(std::span<const Symbol> perm) const;

    /// Stable 64-bit identifier of the table contents.
    std::uint64_t fingerprint() const noexcept;

    friend bool operator==(const Potential&, const Potential&) = default;

private:
    Lexicon lex_;
    int range_;
    std::vector<double> table_;
};

/// Transfer operator restricted to functions of the first range-1 symbols.
///
/// States are the grammar-admissible (range-1)-words in lexicographic order.
/// entry(u, v) with u = (x_0..x_{r-2}) and v = (a, x_0..x_{r-3}) equals
/// exp(phi(a, x_0, ..., x_{r-2})) when the transition a -> x_0 is allowed,
/// and 0 otherwise. This is the operator that prepends a symbol.
struct TransferMatrix {
    Grammar grammar;
    Potential potential;
    std::vector<Word> states;
    /// base-theta code of a (range-1)-word -> state index, or -1
    std::vector<int> state_of_code;
    std::vector<double> entries; // row-major, dim x dim

    std::size_t dim() const noexcept { return states.size(); }
    double operator()(std::size_t u, std::size_t v) const noexcept { return entries[u * dim() + v]; }

    /// 0/1 support as an incidence matrix over the states.
    IncidenceMatrix support() const;
};

TransferMatrix build_transfer(const Grammar& g, const Potential& phi);

struct PerronData {
    double lambda = 0.0;
    std::vector<double> right; // sum(right) = 1
    std::vector<double> left;  // left . right = 1
    int iterations = 0;
};

/// Leading eigendata of a nonnegative matrix with primitive support.
/// Repeated squaring of (M/s + I) drives it to the rank-one Perron
/// projector, then a Rayleigh-quotient power iteration polishes lambda to
/// relative 1e-13. Throws NumericalError with diagnostics on failure.
PerronData perron(const TransferMatrix& m);
PerronData perron(std::span<const double> entries, std::size_t dim);

/// Stationary Markov chain equal to the Gibbs state of phi on L(g).
///
/// With M the transfer matrix, h its right and nu its left Perron vector,
/// the chain moves forward in reading order: from state u to the state v
/// obtained by dropping u's first letter and appending b, with probability
/// M(v, u) * nu[v] / (lambda * nu[u]). The stationary law is pi = nu * h.
class GibbsChain {
public:
    GibbsChain(const TransferMatrix& m, const PerronData& eig);

    const Grammar& grammar() const noexcept { return grammar_; }
    const Potential& potential() const noexcept { return potential_; }
    int theta() const noexcept { return grammar_.theta(); }
    int range() const noexcept { return potential_.range(); }
    /// Length of a state word, range() - 1.
    int order() const noexcept { return potential_.range() - 1; }

    double lambda() const noexcept { return lambda_; }
    double pressure() const noexcept { return pressure_; }
    double entropy() const noexcept { return entropy_; }

    std::size_t dim() const noexcept { return states_.size(); }
    const std::vector<Word>& states() const noexcept { return states_; }
    /// State index of a (range-1)-word, or -1 if inadmissible.
    int state_index(std::span<const Symbol> w) const;

    std::span<const double> right_vector() const noexcept { return h_; }
    std::span<const double> left_vector() const noexcept { return nu_; }
    std::span<const double> stationary() const noexcept { return pi_; }

    /// Forward transition probability between two states.
    double transition(std::size_t u, std::size_t v) const noexcept { return transition_[u * dim() + v]; }

    /// Successor state after appending `b` to state u, or -1.
    int successor(std::size_t u, Symbol b) const noexcept {
        return succ_[u * static_cast<std::size_t>(theta()) + static_cast<std::size_t>(b)];
    }
    double log_step(std::size_t u, Symbol b) const noexcept {
        return log_step_[u * static_cast<std::size_t>(theta()) + static_cast<std::size_t>(b)];
    }
    double step_probability(std::size_t u, Symbol b) const noexcept {
        return step_[u * static_cast<std::size_t>(theta()) + static_cast<std::size_t>(b)];
    }

private:
    Grammar grammar_;
    Potential potential_;
    double lambda_;
    double pressure_;
    double entropy_ = 0.0;
    std::vector<Word> states_;
    std::vector<int> state_of_code_;
    std::vector<double> h_, nu_, pi_;
    std::vector<double> transition_;
    std::vector<int> succ_;
    std::vector<double> step_, log_step_;
};

GibbsChain gibbs_chain(const Grammar& g, const Potential& phi);

/// log of the Perron eigenvalue of build_transfer(g, phi).
double pressure(const Grammar& g, const Potential& phi);

/// log lambda of the 0/1 matrix itself.
double topological_entropy(const Grammar& g);

/// log mu([w]) under the chain, -infinity for inadmissible words. Words
/// shorter than range-1 are summed over their admissible extensions.
double cylinder_log_measure(const GibbsChain& chain, std::span<const Symbol> w);

/// Kolmogorov-Sinai entropy rate of the chain,
/// -sum_u pi[u] sum_v P[u,v] log P[u,v].
double ks_entropy(const GibbsChain& chain);

/// Integral of phi against the chain's measure. phi must share the chain's
/// lexicon and range.
double expected_potential(const GibbsChain& chain, const Potential& phi);

/// P(phi) - dP(beta phi)/dbeta at beta = 1 by central difference with step
/// 1e-5. Equals the Gibbs state's entropy.
double entropy_via_pressure_derivative(const Grammar& g, const Potential& phi);

struct Sample {
    Word word;
    std::uint64_t seed = 0;
    std::uint64_t source_grammar = 0; // row-major code
    std::uint64_t potential = 0;      // fingerprint
};

/// Length-n path of the chain: initial state from pi, then n-(range-1) steps.
/// Deterministic given the seed. Requires n >= range-1.
Sample sample(const GibbsChain& chain, std::size_t n, std::uint64_t seed);

struct OrbitPotential {
    Potential potential;
    Word orbit; // least rotation of the chosen periodic word
    int period = 0;
};

/// Potential of range q+1 worth E on every window that traverses one full
/// period of a minimal-period-q orbit of g_prime not admissible for g, and 0
/// elsewhere. The potential vanishes on every g-admissible word. Requires
/// compare(g, g_prime) == Less.
OrbitPotential periodic_orbit_potential(const Grammar& g, const Grammar& g_prime, double energy);

} // namespace sftid

#endif
