#ifndef SFTID_SYMBOLIC_HPP
#define SFTID_SYMBOLIC_HPP

// Lexicons, words and grammars (primitive 0/1 incidence matrices) of a
// one-sided subshift of finite type.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sftid {

using Symbol = int;
using Word = std::vector<Symbol>;

/// Finite alphabet {0, ..., theta-1}, theta >= 2.
class Lexicon {
public:
    explicit Lexicon(int theta);

    int theta() const noexcept { return theta_; }
    bool contains(Symbol s) const noexcept { return s >= 0 && s < theta_; }

    friend bool operator==(const Lexicon&, const Lexicon&) = default;

private:
    int theta_;
};

/// Largest lexicon enumerate_grammars() will scan exhaustively.
inline constexpr int kMaxEnumerableTheta = 4;

/// Square 0/1 matrix over a lexicon, stored row-major. No primitivity
/// requirement; see Grammar for the checked type.
class IncidenceMatrix {
public:
    /// All-zero matrix.
    explicit IncidenceMatrix(Lexicon lex);

    /// Throws InvalidArgument when the rows are ragged, not square, have
    /// fewer than two rows, or contain values other than 0 and 1.
    static IncidenceMatrix from_rows(const std::vector<std::vector<int>>& rows);

    /// Bit (a*theta + b) of the row-major code, with entry (0,0) as the most
    /// significant bit.
    static IncidenceMatrix from_code(Lexicon lex, std::uint64_t code);

    const Lexicon& lexicon() const noexcept { return lex_; }
    int theta() const noexcept { return lex_.theta(); }

    bool operator()(Symbol a, Symbol b) const noexcept {
        return cells_[static_cast<std::size_t>(a * theta() + b)] != 0;
    }
    void set(Symbol a, Symbol b, bool value);

    std::uint64_t code() const noexcept;
    int count_ones() const noexcept;
    std::vector<std::vector<int>> rows() const;

    friend bool operator==(const IncidenceMatrix&, const IncidenceMatrix&) = default;

private:
    Lexicon lex_;
    std::vector<std::uint8_t> cells_;
};

/// True iff some boolean power of `m` up to the Wielandt exponent
/// (theta-1)^2 + 1 is entrywise positive.
bool is_primitive(const IncidenceMatrix& m);

/// Primitive incidence matrix. The invariant is checked on construction.
class Grammar {
public:
    explicit Grammar(IncidenceMatrix m);

    static Grammar from_rows(const std::vector<std::vector<int>>& rows) {
        return Grammar(IncidenceMatrix::from_rows(rows));
    }

    const IncidenceMatrix& matrix() const noexcept { return m_; }
    const Lexicon& lexicon() const noexcept { return m_.lexicon(); }
    int theta() const noexcept { return m_.theta(); }
    bool allows(Symbol a, Symbol b) const noexcept { return m_(a, b); }

    friend bool operator==(const Grammar&, const Grammar&) = default;

private:
    IncidenceMatrix m_;
};

enum class OrderRelation { Less, Greater, Equal, Incomparable };

std::string_view to_string(OrderRelation r) noexcept;

/// Entrywise partial order. Throws InvalidArgument on lexicon mismatch.
OrderRelation compare(const Grammar& g, const Grammar& h);

/// Every adjacent pair of `w` is an allowed transition. Words of length 0 or
/// 1 are admitted by every grammar.
bool admits(const Grammar& g, std::span<const Symbol> w);

/// All primitive theta x theta grammars in ascending row-major code order.
/// Throws InvalidArgument for theta > kMaxEnumerableTheta.
std::vector<Grammar> enumerate_grammars(const Lexicon& lex);

/// Minimal incidence matrix admitting `w`: entry (a,b) is 1 iff `ab` occurs
/// in `w`. Not necessarily primitive. Throws on an empty word.
IncidenceMatrix transition_closure(std::span<const Symbol> w, const Lexicon& lex);

/// Throws InvalidArgument unless every letter of `w` is in `lex`.
void check_word(std::span<const Symbol> w, const Lexicon& lex);

/// Digit encoding used on command lines: "0110" <-> {0,1,1,0}. theta <= 10.
Word parse_word(std::string_view digits);
std::string format_word(std::span<const Symbol> w);

/// Relabel a grammar through a permutation of the lexicon: the result has an
/// entry at (perm[a], perm[b]) iff `g` has one at (a, b).
Grammar relabel(const Grammar& g, std::span<const Symbol> perm);

} // namespace sftid

#endif
