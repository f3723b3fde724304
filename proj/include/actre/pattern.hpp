// ============================================================================
// actre/pattern.hpp: temporal action patterns over a vocabulary of primitives
// ============================================================================
//
// A pattern is a regular expression whose alphabet letters are *sets* of
// primitive actions (events that may co-occur in one frame).  The grammar:
//
//     alt    := concat ('|' concat)*
//     concat := rep+
//     rep    := atom ('*' | '+')*
//     atom   := symbol | '.' | '(' alt ')'
//     symbol := '{' (name (',' name)*)? '}'
//
// Names match [A-Za-z0-9_-]+ and must exist in the vocabulary.  Whitespace
// between tokens is ignored; juxtaposition is concatenation.  `{}` is the
// null symbol (no action active).  A bare name outside braces is rejected.
//
// Concat/Alt nodes are n-ary with children in source order.  desugar()
// rewrites every Plus into Concat[child, Star(child)] bottom-up.
//
// ============================================================================

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace actre {

// ── Vocabulary ──────────────────────────────────────────────────────────────
// Ordered registry of primitive-action names; index space is 0..size()-1.
// Immutable after construction and safe to share across threads.

class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> names);  // throws std::invalid_argument

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(std::uint32_t index) const { return names_.at(index); }
    std::optional<std::uint32_t> index_of(std::string_view name) const;
    const std::vector<std::string>& names() const noexcept { return names_; }

    bool operator==(const Vocabulary& o) const { return names_ == o.names_; }

private:
    std::vector<std::string> names_;
    std::map<std::string, std::uint32_t, std::less<>> index_;
};

// ── SymbolSet ───────────────────────────────────────────────────────────────
// One alphabet letter: a subset of primitive indices.  Canonical form is
// sorted and duplicate-free; the empty set is a valid letter.

class SymbolSet {
public:
    SymbolSet() = default;
    explicit SymbolSet(std::vector<std::uint32_t> members);

    static SymbolSet empty_set() { return SymbolSet{}; }

    bool contains(std::uint32_t index) const;
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    const std::vector<std::uint32_t>& members() const noexcept { return members_; }
    std::uint32_t max_index() const;  // throws on empty set

    bool operator==(const SymbolSet& o) const { return members_ == o.members_; }
    bool operator<(const SymbolSet& o) const { return members_ < o.members_; }

private:
    std::vector<std::uint32_t> members_;  // sorted, unique
};

// ── Pattern AST ─────────────────────────────────────────────────────────────

enum class PatternKind : std::uint8_t { Symbol, Wildcard, Concat, Alt, Star, Plus };

struct Pattern {
    PatternKind kind = PatternKind::Wildcard;
    SymbolSet symbol;                // Symbol nodes only
    std::vector<Pattern> children;   // Concat/Alt: >= 2, Star/Plus: exactly 1

    static Pattern make_symbol(SymbolSet s);
    static Pattern wildcard();
    static Pattern concat(std::vector<Pattern> children);  // throws if < 2 children
    static Pattern alt(std::vector<Pattern> children);     // throws if < 2 children
    static Pattern star(Pattern child);
    static Pattern plus(Pattern child);

    bool operator==(const Pattern& o) const;
};

// ── ParseError ──────────────────────────────────────────────────────────────
// Raised on syntax errors and unknown action names; `position` is the byte
// offset of the offending token in the input text.

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position);
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// ── Operations ──────────────────────────────────────────────────────────────

// Parse pattern text over a vocabulary.  Precedence, tightest first:
// postfix * / +, concatenation, alternation; parentheses override.
Pattern parse(std::string_view text, const Vocabulary& vocab);

// Rewrite every Plus(c) into Concat[c, Star(c)], bottom-up.  The result
// accepts exactly the same symbol sequences as the input.
Pattern desugar(const Pattern& p);

// re -> .* re .*  : allow the pattern to match anywhere inside a longer
// sequence.  Always produces a fresh three-child Concat.
Pattern wrap_untrimmed(const Pattern& p);

// Canonical text, parseable back to a structurally equal AST.
std::string format(const Pattern& p, const Vocabulary& vocab);

// "{a,b}" rendering of one letter (members in index order).
std::string format_symbol(const SymbolSet& w, const Vocabulary& vocab);

// Distinct symbol literals of the pattern in first-occurrence (pre-order)
// order.  Wildcards contribute nothing.
std::vector<SymbolSet> pattern_literals(const Pattern& p);

}  // namespace actre
