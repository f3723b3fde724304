// ============================================================================
// pattern.cpp: vocabulary, symbol sets, parsing, and formatting
// ============================================================================

#include "actre/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace actre {

// ── Vocabulary ──────────────────────────────────────────────────────────────

Vocabulary::Vocabulary(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) {
        throw std::invalid_argument("vocabulary must contain at least one action name");
    }
    for (std::uint32_t i = 0; i < names_.size(); ++i) {
        if (names_[i].empty()) {
            throw std::invalid_argument("vocabulary names must be non-empty");
        }
        auto [it, inserted] = index_.emplace(names_[i], i);
        if (!inserted) {
            throw std::invalid_argument("duplicate vocabulary name: " + names_[i]);
        }
    }
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

// ── SymbolSet ───────────────────────────────────────────────────────────────

SymbolSet::SymbolSet(std::vector<std::uint32_t> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool SymbolSet::contains(std::uint32_t index) const {
    return std::binary_search(members_.begin(), members_.end(), index);
}

std::uint32_t SymbolSet::max_index() const {
    if (members_.empty()) throw std::logic_error("max_index on empty symbol set");
    return members_.back();
}

// ── Pattern factories ───────────────────────────────────────────────────────

Pattern Pattern::make_symbol(SymbolSet s) {
    Pattern p;
    p.kind = PatternKind::Symbol;
    p.symbol = std::move(s);
    return p;
}

Pattern Pattern::wildcard() {
    Pattern p;
    p.kind = PatternKind::Wildcard;
    return p;
}

Pattern Pattern::concat(std::vector<Pattern> children) {
    if (children.size() < 2) {
        throw std::invalid_argument("concat requires at least two children");
    }
    Pattern p;
    p.kind = PatternKind::Concat;
    p.children = std::move(children);
    return p;
}

Pattern Pattern::alt(std::vector<Pattern> children) {
    if (children.size() < 2) {
        throw std::invalid_argument("alt requires at least two children");
    }
    Pattern p;
    p.kind = PatternKind::Alt;
    p.children = std::move(children);
    return p;
}

Pattern Pattern::star(Pattern child) {
    Pattern p;
    p.kind = PatternKind::Star;
    p.children.push_back(std::move(child));
    return p;
}

Pattern Pattern::plus(Pattern child) {
    Pattern p;
    p.kind = PatternKind::Plus;
    p.children.push_back(std::move(child));
    return p;
}

bool Pattern::operator==(const Pattern& o) const {
    return kind == o.kind && symbol == o.symbol && children == o.children;
}

// ── ParseError ──────────────────────────────────────────────────────────────

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " (at offset " + std::to_string(position) + ")"),
      position_(position) {}

// ── Parser ──────────────────────────────────────────────────────────────────

namespace {

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class Parser {
public:
    Parser(std::string_view text, const Vocabulary& vocab) : text_(text), vocab_(vocab) {}

    Pattern run() {
        Pattern p = parse_alt();
        skip_ws();
        if (pos_ != text_.size()) {
            throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        }
        return p;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool starts_atom(char c) const { return c == '{' || c == '.' || c == '('; }

    Pattern parse_alt() {
        std::vector<Pattern> branches;
        branches.push_back(parse_concat());
        while (peek() == '|') {
            ++pos_;
            branches.push_back(parse_concat());
        }
        if (branches.size() == 1) return std::move(branches.front());
        return Pattern::alt(std::move(branches));
    }

    Pattern parse_concat() {
        std::vector<Pattern> items;
        while (starts_atom(peek())) {
            items.push_back(parse_rep());
        }
        if (items.empty()) {
            if (pos_ < text_.size() && is_name_char(text_[pos_])) {
                throw ParseError("bare action name; write it inside braces, e.g. {name}", pos_);
            }
            throw ParseError("expected a symbol '{...}', '.', or '('", pos_);
        }
        if (items.size() == 1) return std::move(items.front());
        return Pattern::concat(std::move(items));
    }

    Pattern parse_rep() {
        Pattern p = parse_atom();
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                p = Pattern::star(std::move(p));
            } else if (c == '+') {
                ++pos_;
                p = Pattern::plus(std::move(p));
            } else {
                break;
            }
        }
        return p;
    }

    Pattern parse_atom() {
        char c = peek();
        if (c == '{') return parse_symbol();
        if (c == '.') {
            ++pos_;
            return Pattern::wildcard();
        }
        if (c == '(') {
            ++pos_;
            Pattern inner = parse_alt();
            if (peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
            return inner;
        }
        if (pos_ < text_.size() && is_name_char(c)) {
            throw ParseError("bare action name; write it inside braces, e.g. {name}", pos_);
        }
        throw ParseError("expected a symbol '{...}', '.', or '('", pos_);
    }

    Pattern parse_symbol() {
        ++pos_;  // consume '{'
        std::vector<std::uint32_t> members;
        if (peek() == '}') {
            ++pos_;
            return Pattern::make_symbol(SymbolSet{});  // null symbol
        }
        for (;;) {
            members.push_back(parse_name());
            char c = peek();
            if (c == ',') {
                ++pos_;
                continue;
            }
            if (c == '}') {
                ++pos_;
                break;
            }
            throw ParseError("expected ',' or '}' in symbol", pos_);
        }
        return Pattern::make_symbol(SymbolSet{std::move(members)});
    }

    std::uint32_t parse_name() {
        skip_ws();
        std::size_t begin = pos_;
        while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
        if (pos_ == begin) throw ParseError("expected an action name", pos_);
        std::string_view name = text_.substr(begin, pos_ - begin);
        auto idx = vocab_.index_of(name);
        if (!idx) {
            throw ParseError("unknown action name '" + std::string(name) + "'", begin);
        }
        return *idx;
    }

    std::string_view text_;
    const Vocabulary& vocab_;
    std::size_t pos_ = 0;
};

}  // namespace

Pattern parse(std::string_view text, const Vocabulary& vocab) {
    return Parser(text, vocab).run();
}

// ── desugar ─────────────────────────────────────────────────────────────────

Pattern desugar(const Pattern& p) {
    Pattern out;
    out.kind = p.kind;
    out.symbol = p.symbol;
    out.children.reserve(p.children.size());
    for (const Pattern& c : p.children) out.children.push_back(desugar(c));
    if (out.kind == PatternKind::Plus) {
        Pattern child = std::move(out.children.front());
        Pattern repeat = Pattern::star(child);
        std::vector<Pattern> pair;
        pair.push_back(std::move(child));
        pair.push_back(std::move(repeat));
        return Pattern::concat(std::move(pair));
    }
    return out;
}

// ── wrap_untrimmed ──────────────────────────────────────────────────────────

Pattern wrap_untrimmed(const Pattern& p) {
    std::vector<Pattern> items;
    items.push_back(Pattern::star(Pattern::wildcard()));
    items.push_back(p);
    items.push_back(Pattern::star(Pattern::wildcard()));
    return Pattern::concat(std::move(items));
}

// ── format ──────────────────────────────────────────────────────────────────

std::string format_symbol(const SymbolSet& w, const Vocabulary& vocab) {
    std::string out = "{";
    bool first = true;
    for (std::uint32_t idx : w.members()) {
        if (!first) out += ',';
        out += vocab.name(idx);
        first = false;
    }
    out += '}';
    return out;
}

namespace {

// Printing levels: Alt=0, Concat=1, postfix Star/Plus=2, atoms=3.  A node is
// parenthesised when its level is below what the context requires, which also
// preserves nesting of same-kind n-ary nodes (e.g. Concat inside Concat).
int print_level(const Pattern& p) {
    switch (p.kind) {
        case PatternKind::Alt: return 0;
        case PatternKind::Concat: return 1;
        case PatternKind::Star:
        case PatternKind::Plus: return 2;
        case PatternKind::Symbol:
        case PatternKind::Wildcard: return 3;
    }
    return 3;
}

void format_node(const Pattern& p, const Vocabulary& vocab, int min_level, std::string& out) {
    const bool parens = print_level(p) < min_level;
    if (parens) out += '(';
    switch (p.kind) {
        case PatternKind::Symbol:
            out += format_symbol(p.symbol, vocab);
            break;
        case PatternKind::Wildcard:
            out += '.';
            break;
        case PatternKind::Concat:
            for (std::size_t i = 0; i < p.children.size(); ++i) {
                if (i > 0) out += ' ';
                format_node(p.children[i], vocab, 2, out);
            }
            break;
        case PatternKind::Alt:
            for (std::size_t i = 0; i < p.children.size(); ++i) {
                if (i > 0) out += '|';
                format_node(p.children[i], vocab, 1, out);
            }
            break;
        case PatternKind::Star:
            format_node(p.children.front(), vocab, 2, out);
            out += '*';
            break;
        case PatternKind::Plus:
            format_node(p.children.front(), vocab, 2, out);
            out += '+';
            break;
    }
    if (parens) out += ')';
}

}  // namespace

std::string format(const Pattern& p, const Vocabulary& vocab) {
    std::string out;
    format_node(p, vocab, 0, out);
    return out;
}

// ── pattern_literals ────────────────────────────────────────────────────────

namespace {

void collect_literals(const Pattern& p, std::vector<SymbolSet>& out) {
    if (p.kind == PatternKind::Symbol) {
        if (std::find(out.begin(), out.end(), p.symbol) == out.end()) {
            out.push_back(p.symbol);
        }
        return;
    }
    for (const Pattern& c : p.children) collect_literals(c, out);
}

}  // namespace

std::vector<SymbolSet> pattern_literals(const Pattern& p) {
    std::vector<SymbolSet> out;
    collect_literals(p, out);
    return out;
}

}  // namespace actre
