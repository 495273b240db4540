#include "sftid/symbolic.hpp"

#include "sftid/errors.hpp"

#include <algorithm>

namespace sftid {

Lexicon::Lexicon(int theta) : theta_(theta) {
    if (theta < 2)
        throw InvalidArgument("lexicon size must be at least 2, got " + std::to_string(theta));
}

IncidenceMatrix::IncidenceMatrix(Lexicon lex)
    : lex_(lex), cells_(static_cast<std::size_t>(lex.theta() * lex.theta()), 0) {}

IncidenceMatrix IncidenceMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
    const auto n = rows.size();
    if (n < 2)
        throw InvalidArgument("incidence matrix needs at least 2 rows, got " + std::to_string(n));
    IncidenceMatrix m(Lexicon(static_cast<int>(n)));
    for (std::size_t a = 0; a < n; ++a) {
        if (rows[a].size() != n)
            throw InvalidArgument("incidence matrix is not square: row " + std::to_string(a) +
                                  " has " + std::to_string(rows[a].size()) + " entries, expected " +
                                  std::to_string(n));
        for (std::size_t b = 0; b < n; ++b) {
            const int v = rows[a][b];
            if (v != 0 && v != 1)
                throw InvalidArgument("incidence matrix entry (" + std::to_string(a) + "," +
                                      std::to_string(b) + ") is " + std::to_string(v) +
                                      ", expected 0 or 1");
            m.cells_[a * n + b] = static_cast<std::uint8_t>(v);
        }
    }
    return m;
}

IncidenceMatrix IncidenceMatrix::from_code(Lexicon lex, std::uint64_t code) {
    IncidenceMatrix m(lex);
    const auto cells = m.cells_.size();
    if (cells > 64)
        throw InvalidArgument("code form needs theta <= 8");
    for (std::size_t i = 0; i < cells; ++i)
        m.cells_[i] = static_cast<std::uint8_t>((code >> (cells - 1 - i)) & 1U);
    return m;
}

void IncidenceMatrix::set(Symbol a, Symbol b, bool value) {
    if (!lex_.contains(a) || !lex_.contains(b))
        throw InvalidArgument("incidence index out of range");
    cells_[static_cast<std::size_t>(a * theta() + b)] = value ? 1 : 0;
}

std::uint64_t IncidenceMatrix::code() const noexcept {
    std::uint64_t c = 0;
    for (auto v : cells_)
        c = (c << 1) | v;
    return c;
}

int IncidenceMatrix::count_ones() const noexcept {
    return static_cast<int>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

std::vector<std::vector<int>> IncidenceMatrix::rows() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(theta()));
    for (Symbol a = 0; a < theta(); ++a)
        for (Symbol b = 0; b < theta(); ++b)
            out[static_cast<std::size_t>(a)].push_back((*this)(a, b) ? 1 : 0);
    return out;
}

bool is_primitive(const IncidenceMatrix& m) {
    const int t = m.theta();
    const auto n = static_cast<std::size_t>(t);
    // power holds the boolean pattern of m^k
    std::vector<std::uint8_t> power(n * n), next(n * n);
    for (int a = 0; a < t; ++a)
        for (int b = 0; b < t; ++b)
            power[static_cast<std::size_t>(a * t + b)] = m(a, b);

    const int wielandt = (t - 1) * (t - 1) + 1;
    for (int k = 1;; ++k) {
        if (std::all_of(power.begin(), power.end(), [](auto v) { return v != 0; }))
            return true;
        if (k == wielandt)
            return false;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                std::uint8_t v = 0;
                for (std::size_t c = 0; c < n && !v; ++c)
                    v = power[a * n + c] & static_cast<std::uint8_t>(m(static_cast<Symbol>(c),
                                                                       static_cast<Symbol>(b)));
                next[a * n + b] = v;
            }
        power.swap(next);
    }
}

Grammar::Grammar(IncidenceMatrix m) : m_(std::move(m)) {
    if (!is_primitive(m_)) {
        std::string rows;
        for (Symbol a = 0; a < m_.theta(); ++a) {
            rows += a == 0 ? "[[" : "],[";
            for (Symbol b = 0; b < m_.theta(); ++b)
                rows += std::string(b == 0 ? "" : ",") + (m_(a, b) ? "1" : "0");
        }
        throw InvalidArgument("grammar matrix " + rows + "]] is not primitive (irreducible and aperiodic)");
    }
}

std::string_view to_string(OrderRelation r) noexcept {
    switch (r) {
    case OrderRelation::Less: return "less";
    case OrderRelation::Greater: return "greater";
    case OrderRelation::Equal: return "equal";
    case OrderRelation::Incomparable: return "incomparable";
    }
    return "?";
}

OrderRelation compare(const Grammar& g, const Grammar& h) {
    if (g.lexicon() != h.lexicon())
        throw InvalidArgument("cannot compare grammars over lexicons of size " +
                              std::to_string(g.theta()) + " and " + std::to_string(h.theta()));
    bool some_less = false, some_greater = false;
    for (Symbol a = 0; a < g.theta(); ++a)
        for (Symbol b = 0; b < g.theta(); ++b) {
            const bool x = g.allows(a, b), y = h.allows(a, b);
            some_less |= (!x && y);
            some_greater |= (x && !y);
        }
    if (some_less && some_greater)
        return OrderRelation::Incomparable;
    if (some_less)
        return OrderRelation::Less;
    if (some_greater)
        return OrderRelation::Greater;
    return OrderRelation::Equal;
}

void check_word(std::span<const Symbol> w, const Lexicon& lex) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!lex.contains(w[i]))
            throw InvalidArgument("word letter " + std::to_string(w[i]) + " at position " +
                                  std::to_string(i) + " is outside the lexicon of size " +
                                  std::to_string(lex.theta()));
}

bool admits(const Grammar& g, std::span<const Symbol> w) {
    check_word(w, g.lexicon());
    for (std::size_t j = 0; j + 1 < w.size(); ++j)
        if (!g.allows(w[j], w[j + 1]))
            return false;
    return true;
}

std::vector<Grammar> enumerate_grammars(const Lexicon& lex) {
    const int t = lex.theta();
    if (t > kMaxEnumerableTheta)
        throw InvalidArgument("grammar class too large to enumerate: theta = " + std::to_string(t) +
                              " exceeds the cap of " + std::to_string(kMaxEnumerableTheta));
    const std::uint64_t total = std::uint64_t{1} << (t * t);
    std::vector<Grammar> out;
    for (std::uint64_t code = 0; code < total; ++code) {
        auto m = IncidenceMatrix::from_code(lex, code);
        if (is_primitive(m))
            out.emplace_back(std::move(m));
    }
    return out;
}

IncidenceMatrix transition_closure(std::span<const Symbol> w, const Lexicon& lex) {
    if (w.empty())
        throw InvalidArgument("transition closure of an empty word is undefined");
    check_word(w, lex);
    IncidenceMatrix m(lex);
    for (std::size_t j = 0; j + 1 < w.size(); ++j)
        m.set(w[j], w[j + 1], true);
    return m;
}

Word parse_word(std::string_view digits) {
    Word w;
    w.reserve(digits.size());
    for (std::size_t i = 0; i < digits.size(); ++i) {
        const char c = digits[i];
        if (c < '0' || c > '9')
            throw InvalidArgument("word character '" + std::string(1, c) + "' at position " +
                                  std::to_string(i) + " is not a digit");
        w.push_back(c - '0');
    }
    return w;
}

std::string format_word(std::span<const Symbol> w) {
    std::string s;
    s.reserve(w.size());
    for (auto x : w) {
        if (x < 0 || x > 9)
            throw InvalidArgument("symbol " + std::to_string(x) + " has no digit encoding");
        s.push_back(static_cast<char>('0' + x));
    }
    return s;
}

Grammar relabel(const Grammar& g, std::span<const Symbol> perm) {
    const int t = g.theta();
    if (static_cast<int>(perm.size()) != t)
        throw InvalidArgument("relabeling must list one image per symbol");
    std::vector<bool> seen(static_cast<std::size_t>(t), false);
    for (auto p : perm) {
        if (p < 0 || p >= t || seen[static_cast<std::size_t>(p)])
            throw InvalidArgument("relabeling is not a permutation");
        seen[static_cast<std::size_t>(p)] = true;
    }
    IncidenceMatrix m(g.lexicon());
    for (Symbol a = 0; a < t; ++a)
        for (Symbol b = 0; b < t; ++b)
            if (g.allows(a, b))
                m.set(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)], true);
    return Grammar(std::move(m));
}

} // namespace sftid
