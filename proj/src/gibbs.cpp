#include "sftid/gibbs.hpp"

#include "sftid/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace sftid {

namespace {

constexpr std::size_t kMaxTableSize = std::size_t{1} << 22;

std::size_t checked_power(int theta, int exponent) {
    std::size_t p = 1;
    for (int i = 0; i < exponent; ++i) {
        p *= static_cast<std::size_t>(theta);
        if (p > kMaxTableSize)
            throw InvalidArgument("potential table theta^range exceeds " + std::to_string(kMaxTableSize) +
                                  " entries");
    }
    return p;
}

std::size_t encode(std::span<const Symbol> w, int theta) {
    std::size_t c = 0;
    for (auto x : w)
        c = c * static_cast<std::size_t>(theta) + static_cast<std::size_t>(x);
    return c;
}

Word decode(std::size_t code, int theta, int length) {
    Word w(static_cast<std::size_t>(length));
    for (int i = length - 1; i >= 0; --i) {
        w[static_cast<std::size_t>(i)] = static_cast<Symbol>(code % static_cast<std::size_t>(theta));
        code /= static_cast<std::size_t>(theta);
    }
    return w;
}

double log_sum_exp(std::span<const double> xs) {
    double peak = kMinusInfinity;
    for (double x : xs)
        peak = std::max(peak, x);
    if (peak == kMinusInfinity)
        return kMinusInfinity;
    double s = 0.0;
    for (double x : xs)
        s += std::exp(x - peak);
    return peak + std::log(s);
}

} // namespace

// ---------------------------------------------------------------------------
// Potential

Potential::Potential(Lexicon lex, int range)
    : lex_(lex), range_(range) {
    if (range < 2)
        throw InvalidArgument("potential range must be at least 2, got " + std::to_string(range));
    table_.assign(checked_power(lex.theta(), range), 0.0);
}

Potential::Potential(Lexicon lex, int range, std::vector<double> table)
    : Potential(lex, range) {
    if (table.size() != table_.size())
        throw InvalidArgument("potential table has " + std::to_string(table.size()) +
                              " values, expected theta^range = " + std::to_string(table_.size()));
    for (std::size_t i = 0; i < table.size(); ++i)
        if (!std::isfinite(table[i]))
            throw InvalidArgument("potential value for word index " + std::to_string(i) +
                                  " is not finite");
    table_ = std::move(table);
}

Potential Potential::constant(Lexicon lex, int range, double c) {
    Potential p(lex, range);
    std::fill(p.table_.begin(), p.table_.end(), c);
    return Potential(lex, range, std::move(p.table_));
}

Potential Potential::random(Lexicon lex, int range, double bound, Rng& rng) {
    Potential p(lex, range);
    for (auto& v : p.table_)
        v = rng.uniform(-bound, bound);
    return p;
}

double Potential::operator()(std::span<const Symbol> window) const {
    if (static_cast<int>(window.size()) != range_)
        throw InvalidArgument("potential of range " + std::to_string(range_) +
                              " evaluated on a window of length " + std::to_string(window.size()));
    check_word(window, lex_);
    return table_[encode(window, theta())];
}

void Potential::set(std::span<const Symbol> window, double value) {
    if (static_cast<int>(window.size()) != range_)
        throw InvalidArgument("potential word '" + std::to_string(window.size()) +
                              "' letters long, expected " + std::to_string(range_));
    check_word(window, lex_);
    if (!std::isfinite(value))
        throw InvalidArgument("potential values must be finite");
    table_[encode(window, theta())] = value;
}

double Potential::birkhoff_sum(std::span<const Symbol> w) const {
    double s = 0.0;
    for (std::size_t j = 0; j + static_cast<std::size_t>(range_) <= w.size(); ++j)
        s += (*this)(w.subspan(j, static_cast<std::size_t>(range_)));
    return s;
}

double Potential::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : table_)
        m = std::max(m, std::abs(v));
    return m;
}

Potential Potential::scaled(double beta) const {
    auto t = table_;
    for (auto& v : t)
        v *= beta;
    return Potential(lex_, range_, std::move(t));
}

Potential Potential::shifted(double c) const {
    auto t = table_;
    for (auto& v : t)
        v += c;
    return Potential(lex_, range_, std::move(t));
}

Potential Potential::relabeled(std::span<const Symbol> perm) const {
    if (static_cast<int>(perm.size()) != theta())
        throw InvalidArgument("relabeling must list one image per symbol");
    Potential out(lex_, range_);
    for (std::size_t code = 0; code < table_.size(); ++code) {
        Word w = decode(code, theta(), range_);
        for (auto& x : w)
            x = perm[static_cast<std::size_t>(x)];
        out.table_[encode(w, theta())] = table_[code];
    }
    return out;
}

std::uint64_t Potential::fingerprint() const noexcept {
    // FNV-1a over (theta, range, value bits)
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    mix(static_cast<std::uint64_t>(theta()));
    mix(static_cast<std::uint64_t>(range_));
    for (double v : table_)
        mix(std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v));
    return h;
}

// ---------------------------------------------------------------------------
// Transfer matrix

IncidenceMatrix TransferMatrix::support() const {
    const auto n = dim();
    if (n < 2) {
        // A single state with a self-loop is trivially primitive; pad to a
        // 2x2 all-ones pattern so the incidence type's theta >= 2 holds.
        IncidenceMatrix m(Lexicon(2));
        for (Symbol a = 0; a < 2; ++a)
            for (Symbol b = 0; b < 2; ++b)
                m.set(a, b, n == 1 && entries[0] > 0.0);
        return m;
    }
    IncidenceMatrix m(Lexicon(static_cast<int>(n)));
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            m.set(static_cast<Symbol>(u), static_cast<Symbol>(v), (*this)(u, v) > 0.0);
    return m;
}

TransferMatrix build_transfer(const Grammar& g, const Potential& phi) {
    if (g.lexicon() != phi.lexicon())
        throw InvalidArgument("grammar lexicon size " + std::to_string(g.theta()) +
                              " does not match potential lexicon size " + std::to_string(phi.theta()));
    const int theta = g.theta();
    const int order = phi.range() - 1;
    const std::size_t codes = checked_power(theta, order);
    const std::size_t lead = codes / static_cast<std::size_t>(theta); // theta^(order-1)

    TransferMatrix m{g, phi, {}, std::vector<int>(codes, -1), {}};
    for (std::size_t c = 0; c < codes; ++c) {
        Word w = decode(c, theta, order);
        if (admits(g, w)) {
            m.state_of_code[c] = static_cast<int>(m.states.size());
            m.states.push_back(std::move(w));
        }
    }
    if (m.states.empty())
        throw InternalError("grammar admits no word of length " + std::to_string(order));

    const std::size_t n = m.states.size();
    m.entries.assign(n * n, 0.0);
    for (std::size_t u = 0; u < n; ++u) {
        const Word& x = m.states[u];
        const std::size_t cu = encode(x, theta);
        for (Symbol a = 0; a < theta; ++a) {
            if (!g.allows(a, x.front()))
                continue;
            const std::size_t cv = static_cast<std::size_t>(a) * lead + cu / static_cast<std::size_t>(theta);
            const int v = m.state_of_code[cv];
            if (v < 0)
                throw InternalError("prepended state is not admissible");
            const std::size_t window = static_cast<std::size_t>(a) * codes + cu;
            m.entries[u * n + static_cast<std::size_t>(v)] = std::exp(phi.at_code(window));
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Gibbs chain

GibbsChain::GibbsChain(const TransferMatrix& m, const PerronData& eig)
    : grammar_(m.grammar),
      potential_(m.potential),
      lambda_(eig.lambda),
      pressure_(std::log(eig.lambda)),
      states_(m.states),
      state_of_code_(m.state_of_code),
      h_(eig.right),
      nu_(eig.left) {
    const std::size_t n = states_.size();
    const auto theta = static_cast<std::size_t>(grammar_.theta());
    const std::size_t codes = state_of_code_.size();

    pi_.resize(n);
    for (std::size_t u = 0; u < n; ++u)
        pi_[u] = nu_[u] * h_[u];

    transition_.assign(n * n, 0.0);
    succ_.assign(n * theta, -1);
    step_.assign(n * theta, 0.0);
    log_step_.assign(n * theta, kMinusInfinity);
    for (std::size_t u = 0; u < n; ++u) {
        const std::size_t cu = encode(states_[u], grammar_.theta());
        const Symbol last = states_[u].back();
        for (Symbol b = 0; b < grammar_.theta(); ++b) {
            if (!grammar_.allows(last, b))
                continue;
            const std::size_t cv = (cu * theta + static_cast<std::size_t>(b)) % codes;
            const int v = state_of_code_[cv];
            if (v < 0)
                throw InternalError("appended state is not admissible");
            const auto vs = static_cast<std::size_t>(v);
            const double p = m(vs, u) * nu_[vs] / (lambda_ * nu_[u]);
            transition_[u * n + vs] = p;
            succ_[u * theta + static_cast<std::size_t>(b)] = v;
            step_[u * theta + static_cast<std::size_t>(b)] = p;
            log_step_[u * theta + static_cast<std::size_t>(b)] = std::log(p);
        }
    }

    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t k = 0; k < theta; ++k) {
            const double p = step_[u * theta + k];
            if (p > 0.0)
                entropy_ -= pi_[u] * p * std::log(p);
        }
}

int GibbsChain::state_index(std::span<const Symbol> w) const {
    if (static_cast<int>(w.size()) != order())
        return -1;
    for (auto x : w)
        if (x < 0 || x >= theta())
            return -1;
    return state_of_code_[encode(w, theta())];
}

GibbsChain gibbs_chain(const Grammar& g, const Potential& phi) {
    const TransferMatrix m = build_transfer(g, phi);
    return GibbsChain(m, perron(m));
}

double pressure(const Grammar& g, const Potential& phi) {
    return std::log(perron(build_transfer(g, phi)).lambda);
}

double topological_entropy(const Grammar& g) {
    return pressure(g, Potential::zero(g.lexicon()));
}

double cylinder_log_measure(const GibbsChain& chain, std::span<const Symbol> w) {
    check_word(w, chain.grammar().lexicon());
    const auto order = static_cast<std::size_t>(chain.order());
    const auto pi = chain.stationary();
    if (w.empty())
        return 0.0;

    if (w.size() < order) {
        // marginal of the shorter word: sum pi over states that extend it
        std::vector<double> terms;
        for (std::size_t u = 0; u < chain.dim(); ++u)
            if (std::equal(w.begin(), w.end(), chain.states()[u].begin()))
                terms.push_back(std::log(pi[u]));
        return log_sum_exp(terms);
    }

    int u = chain.state_index(w.first(order));
    if (u < 0)
        return kMinusInfinity;
    double logp = std::log(pi[static_cast<std::size_t>(u)]);
    for (std::size_t j = order; j < w.size(); ++j) {
        const int v = chain.successor(static_cast<std::size_t>(u), w[j]);
        if (v < 0)
            return kMinusInfinity;
        logp += chain.log_step(static_cast<std::size_t>(u), w[j]);
        u = v;
    }
    return logp;
}

double ks_entropy(const GibbsChain& chain) {
    return chain.entropy();
}

double expected_potential(const GibbsChain& chain, const Potential& phi) {
    if (phi.lexicon() != chain.grammar().lexicon() || phi.range() != chain.range())
        throw InvalidArgument("potential does not match the chain's lexicon and range");
    const auto theta = static_cast<std::size_t>(chain.theta());
    const auto pi = chain.stationary();
    double total = 0.0;
    for (std::size_t u = 0; u < chain.dim(); ++u) {
        const std::size_t cu = encode(chain.states()[u], chain.theta());
        for (Symbol b = 0; b < chain.theta(); ++b) {
            const double p = chain.step_probability(u, b);
            if (p > 0.0)
                total += pi[u] * p * phi.at_code(cu * theta + static_cast<std::size_t>(b));
        }
    }
    return total;
}

double entropy_via_pressure_derivative(const Grammar& g, const Potential& phi) {
    constexpr double step = 1e-5;
    const double p = pressure(g, phi);
    if (phi.is_zero())
        return p;
    const double up = pressure(g, phi.scaled(1.0 + step));
    const double down = pressure(g, phi.scaled(1.0 - step));
    return p - (up - down) / (2.0 * step);
}

Sample sample(const GibbsChain& chain, std::size_t n, std::uint64_t seed) {
    const auto order = static_cast<std::size_t>(chain.order());
    if (n < order)
        throw InvalidArgument("sample length " + std::to_string(n) + " is shorter than the state length " +
                              std::to_string(order));
    Rng rng(seed);
    Sample s;
    s.seed = seed;
    s.source_grammar = chain.grammar().matrix().code();
    s.potential = chain.potential().fingerprint();
    s.word.reserve(n);
    if (n == 0)
        return s;

    const auto pi = chain.stationary();
    std::size_t u = chain.dim() - 1;
    {
        const double r = rng.uniform();
        double acc = 0.0;
        for (std::size_t k = 0; k < chain.dim(); ++k) {
            acc += pi[k];
            if (r < acc) {
                u = k;
                break;
            }
        }
    }
    const Word& start = chain.states()[u];
    s.word.insert(s.word.end(), start.begin(), start.end());

    for (std::size_t i = order; i < n; ++i) {
        const double r = rng.uniform();
        double acc = 0.0;
        Symbol pick = -1;
        for (Symbol b = 0; b < chain.theta(); ++b) {
            const double p = chain.step_probability(u, b);
            if (p <= 0.0)
                continue;
            pick = b; // the last allowed symbol absorbs rounding in the row sum
            acc += p;
            if (r < acc)
                break;
        }
        s.word.push_back(pick);
        u = static_cast<std::size_t>(chain.successor(u, pick));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Periodic-orbit potential

namespace {

bool has_minimal_period(const Word& y) {
    const std::size_t q = y.size();
    for (std::size_t p = 1; p < q; ++p) {
        if (q % p != 0)
            continue;
        bool periodic = true;
        for (std::size_t j = 0; j + p < q && periodic; ++j)
            periodic = y[j] == y[j + p];
        if (periodic)
            return false;
    }
    return true;
}

Word rotate(const Word& y, std::size_t l) {
    Word r(y.size());
    for (std::size_t j = 0; j < y.size(); ++j)
        r[j] = y[(j + l) % y.size()];
    return r;
}

bool is_least_rotation(const Word& y) {
    for (std::size_t l = 1; l < y.size(); ++l)
        if (rotate(y, l) < y)
            return false;
    return true;
}

} // namespace

OrbitPotential periodic_orbit_potential(const Grammar& g, const Grammar& g_prime, double energy) {
    if (compare(g, g_prime) != OrderRelation::Less)
        throw InvalidArgument("periodic-orbit potential needs g < g_prime, got " +
                              std::string(to_string(compare(g, g_prime))));
    if (!std::isfinite(energy))
        throw InvalidArgument("orbit energy must be finite");
    const int theta = g.theta();
    // A simple cycle through an extra edge has length at most theta.
    for (int q = 1; q <= theta; ++q) {
        const std::size_t words = checked_power(theta, q);
        for (std::size_t code = 0; code < words; ++code) {
            Word y = decode(code, theta, q);
            if (!has_minimal_period(y) || !is_least_rotation(y))
                continue;
            bool cyclic_in_prime = true, leaves_g = false;
            for (std::size_t j = 0; j < y.size(); ++j) {
                const Symbol a = y[j], b = y[(j + 1) % y.size()];
                cyclic_in_prime &= g_prime.allows(a, b);
                leaves_g |= !g.allows(a, b);
            }
            if (!cyclic_in_prime || !leaves_g)
                continue;

            Potential phi(g.lexicon(), q + 1);
            for (std::size_t l = 0; l < y.size(); ++l) {
                Word window = rotate(y, l);
                window.push_back(window.front());
                phi.set(window, energy);
            }
            return OrbitPotential{std::move(phi), std::move(y), q};
        }
    }
    throw InternalError("no periodic orbit of g_prime leaves g; are both grammars primitive?");
}

} // namespace sftid
