// ============================================================================
// automata.cpp: NFA construction, subset construction, Hopcroft minimization
// ============================================================================

#include "actre/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <stdexcept>
#include <utility>

namespace actre {

// ── Dfa basics ──────────────────────────────────────────────────────────────

std::int32_t Dfa::support_index(const SymbolSet& w) const {
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i] == w) return static_cast<std::int32_t>(i);
    }
    return kNoState;
}

std::int32_t Dfa::step(std::uint32_t from, std::int32_t support_idx) const {
    if (support_idx == kNoState) return defaults[from];
    return trans[from][static_cast<std::size_t>(support_idx)];
}

std::int32_t Dfa::step_symbol(std::uint32_t from, const SymbolSet& w) const {
    return step(from, support_index(w));
}

bool Dfa::is_total() const {
    for (std::uint32_t q = 0; q < state_count; ++q) {
        if (defaults[q] == kNoState) return false;
        for (std::int32_t t : trans[q]) {
            if (t == kNoState) return false;
        }
    }
    return true;
}

bool Dfa::accepts(std::span<const SymbolSet> sequence) const {
    std::uint32_t q = start;
    for (const SymbolSet& w : sequence) {
        std::int32_t t = step_symbol(q, w);
        if (t == kNoState) return false;
        q = static_cast<std::uint32_t>(t);
    }
    return is_final(q);
}

bool Dfa::operator==(const Dfa& o) const {
    return state_count == o.state_count && start == o.start && finals == o.finals &&
           support == o.support && trans == o.trans && defaults == o.defaults &&
           reject == o.reject;
}

// ── to_nfa (Thompson construction) ──────────────────────────────────────────

namespace {

struct NfaBuilder {
    Nfa nfa;
    std::map<SymbolSet, std::int32_t> support_index;

    std::uint32_t new_state() {
        nfa.eps.emplace_back();
        nfa.edges.emplace_back();
        return nfa.state_count++;
    }

    std::int32_t label_for(const SymbolSet& w) {
        auto it = support_index.find(w);
        if (it != support_index.end()) return it->second;
        std::int32_t idx = static_cast<std::int32_t>(nfa.support.size());
        nfa.support.push_back(w);
        support_index.emplace(w, idx);
        return idx;
    }

    struct Frag {
        std::uint32_t start;
        std::uint32_t accept;
    };

    Frag build(const Pattern& p) {
        switch (p.kind) {
            case PatternKind::Symbol: {
                std::uint32_t s = new_state();
                std::uint32_t a = new_state();
                nfa.edges[s].push_back({label_for(p.symbol), a});
                return {s, a};
            }
            case PatternKind::Wildcard: {
                std::uint32_t s = new_state();
                std::uint32_t a = new_state();
                nfa.edges[s].push_back({Nfa::kAnyLabel, a});
                return {s, a};
            }
            case PatternKind::Concat: {
                Frag whole = build(p.children.front());
                for (std::size_t i = 1; i < p.children.size(); ++i) {
                    Frag next = build(p.children[i]);
                    nfa.eps[whole.accept].push_back(next.start);
                    whole.accept = next.accept;
                }
                return whole;
            }
            case PatternKind::Alt: {
                std::uint32_t s = new_state();
                std::uint32_t a = new_state();
                for (const Pattern& c : p.children) {
                    Frag f = build(c);
                    nfa.eps[s].push_back(f.start);
                    nfa.eps[f.accept].push_back(a);
                }
                return {s, a};
            }
            case PatternKind::Star: {
                std::uint32_t s = new_state();
                std::uint32_t a = new_state();
                Frag f = build(p.children.front());
                nfa.eps[s].push_back(a);
                nfa.eps[s].push_back(f.start);
                nfa.eps[f.accept].push_back(f.start);
                nfa.eps[f.accept].push_back(a);
                return {s, a};
            }
            case PatternKind::Plus:
                throw std::invalid_argument("to_nfa requires a desugared pattern (no Plus nodes)");
        }
        throw std::logic_error("unreachable pattern kind");
    }
};

}  // namespace

Nfa to_nfa(const Pattern& p) {
    // Fix the support ordering from the pattern itself so it is independent
    // of construction order details.
    NfaBuilder b;
    for (const SymbolSet& w : pattern_literals(p)) b.label_for(w);
    NfaBuilder::Frag f = b.build(p);
    b.nfa.start = f.start;
    b.nfa.finals.push_back(f.accept);
    return b.nfa;
}

// ── determinize (subset construction) ───────────────────────────────────────

namespace {

void eps_close(const Nfa& n, std::vector<std::uint32_t>& states) {
    std::vector<char> seen(n.state_count, 0);
    std::vector<std::uint32_t> stack = states;
    for (std::uint32_t q : states) seen[q] = 1;
    while (!stack.empty()) {
        std::uint32_t q = stack.back();
        stack.pop_back();
        for (std::uint32_t t : n.eps[q]) {
            if (!seen[t]) {
                seen[t] = 1;
                stack.push_back(t);
            }
        }
    }
    states.clear();
    for (std::uint32_t q = 0; q < n.state_count; ++q) {
        if (seen[q]) states.push_back(q);
    }
}

}  // namespace

Dfa determinize(const Nfa& n) {
    const std::size_t k = n.support.size();
    std::vector<char> nfa_final(n.state_count, 0);
    for (std::uint32_t q : n.finals) nfa_final[q] = 1;

    Dfa d;
    d.support = n.support;

    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    std::vector<std::vector<std::uint32_t>> subsets;
    std::deque<std::uint32_t> work;

    auto intern = [&](std::vector<std::uint32_t> subset) -> std::uint32_t {
        auto it = ids.find(subset);
        if (it != ids.end()) return it->second;
        std::uint32_t id = static_cast<std::uint32_t>(subsets.size());
        ids.emplace(subset, id);
        subsets.push_back(std::move(subset));
        d.finals.push_back(0);
        d.trans.emplace_back(k, Dfa::kNoState);
        d.defaults.push_back(Dfa::kNoState);
        for (std::uint32_t q : subsets[id]) {
            if (nfa_final[q]) d.finals[id] = 1;
        }
        work.push_back(id);
        return id;
    };

    std::vector<std::uint32_t> initial{n.start};
    eps_close(n, initial);
    d.start = intern(std::move(initial));

    // One pass per letter: support indices 0..k-1, then k meaning OTHER.
    while (!work.empty()) {
        std::uint32_t id = work.front();
        work.pop_front();
        for (std::size_t letter = 0; letter <= k; ++letter) {
            std::vector<std::uint32_t> moved;
            for (std::uint32_t q : subsets[id]) {
                for (const Nfa::Edge& e : n.edges[q]) {
                    const bool fires = e.label == Nfa::kAnyLabel ||
                                       (letter < k && e.label == static_cast<std::int32_t>(letter));
                    if (fires) moved.push_back(e.to);
                }
            }
            if (moved.empty()) continue;
            std::sort(moved.begin(), moved.end());
            moved.erase(std::unique(moved.begin(), moved.end()), moved.end());
            eps_close(n, moved);
            std::uint32_t target = intern(std::move(moved));
            if (letter < k) {
                d.trans[id][letter] = static_cast<std::int32_t>(target);
            } else {
                d.defaults[id] = static_cast<std::int32_t>(target);
            }
        }
    }

    d.state_count = static_cast<std::uint32_t>(subsets.size());
    return d;
}

// ── minimize (Hopcroft) ─────────────────────────────────────────────────────

Dfa minimize(const Dfa& d) {
    const std::size_t k = d.support.size();
    const std::size_t letters = k + 1;  // support letters plus OTHER
    const std::uint32_t n = d.state_count;
    const std::uint32_t dead = n;  // implicit dead state absorbing undefined moves
    const std::uint32_t total = n + 1;

    auto target = [&](std::uint32_t q, std::size_t letter) -> std::uint32_t {
        if (q == dead) return dead;
        std::int32_t t = letter < k ? d.trans[q][letter] : d.defaults[q];
        return t == Dfa::kNoState ? dead : static_cast<std::uint32_t>(t);
    };

    // Inverse transition lists per letter.
    std::vector<std::vector<std::vector<std::uint32_t>>> inv(
        letters, std::vector<std::vector<std::uint32_t>>(total));
    for (std::size_t c = 0; c < letters; ++c) {
        for (std::uint32_t q = 0; q < total; ++q) {
            inv[c][target(q, c)].push_back(q);
        }
    }

    // Initial partition: finals vs non-finals (dead is non-final).
    std::vector<std::vector<std::uint32_t>> blocks;
    std::vector<std::uint32_t> block_of(total, 0);
    {
        std::vector<std::uint32_t> fin, nonfin;
        for (std::uint32_t q = 0; q < n; ++q) {
            (d.finals[q] ? fin : nonfin).push_back(q);
        }
        nonfin.push_back(dead);
        blocks.push_back(std::move(nonfin));
        if (!fin.empty()) blocks.push_back(std::move(fin));
        for (std::uint32_t b = 0; b < blocks.size(); ++b) {
            for (std::uint32_t q : blocks[b]) block_of[q] = b;
        }
    }

    // Worklist of (block, letter) splitters.  Seeding with every initial
    // block keeps the classic invariant without the smaller-half bookkeeping
    // at the root; splits below use the standard rule.
    std::deque<std::pair<std::uint32_t, std::uint32_t>> work;
    std::vector<std::vector<char>> in_work(letters);
    auto push_work = [&](std::uint32_t block, std::uint32_t letter) {
        if (in_work[letter].size() <= block) in_work[letter].resize(block + 1, 0);
        if (!in_work[letter][block]) {
            in_work[letter][block] = 1;
            work.emplace_back(block, letter);
        }
    };
    for (std::uint32_t b = 0; b < blocks.size(); ++b) {
        for (std::uint32_t c = 0; c < letters; ++c) push_work(b, c);
    }

    std::vector<char> in_x(total, 0);
    std::vector<std::uint32_t> touched;      // blocks intersecting X
    std::vector<std::uint32_t> hits(total, 0);

    while (!work.empty()) {
        auto [splitter, c] = work.front();
        work.pop_front();
        in_work[c][splitter] = 0;

        // X = preimage of the splitter block under letter c.
        std::vector<std::uint32_t> x;
        for (std::uint32_t q : blocks[splitter]) {
            for (std::uint32_t p : inv[c][q]) {
                if (!in_x[p]) {
                    in_x[p] = 1;
                    x.push_back(p);
                }
            }
        }
        touched.clear();
        for (std::uint32_t p : x) {
            std::uint32_t b = block_of[p];
            if (hits[b] == 0) touched.push_back(b);
            ++hits[b];
        }

        for (std::uint32_t b : touched) {
            const std::size_t inside = hits[b];
            hits[b] = 0;
            if (inside == blocks[b].size()) continue;  // no split

            std::vector<std::uint32_t> yes, no;
            for (std::uint32_t q : blocks[b]) {
                (in_x[q] ? yes : no).push_back(q);
            }
            const std::uint32_t fresh = static_cast<std::uint32_t>(blocks.size());
            blocks[b] = std::move(yes);
            blocks.push_back(std::move(no));
            for (std::uint32_t q : blocks[fresh]) block_of[q] = fresh;

            for (std::uint32_t letter = 0; letter < letters; ++letter) {
                if (in_work[letter].size() > b && in_work[letter][b]) {
                    push_work(fresh, letter);  // pending splitter covers both halves
                } else {
                    const bool fresh_smaller = blocks[fresh].size() < blocks[b].size();
                    push_work(fresh_smaller ? fresh : b, letter);
                }
            }
        }
        for (std::uint32_t p : x) in_x[p] = 0;
    }

    // Rebuild, dropping the dead block and renumbering by BFS from the start
    // block for a deterministic layout.
    const std::uint32_t dead_block = block_of[dead];
    const std::uint32_t start_block = block_of[d.start];

    Dfa out;
    out.support = d.support;
    if (start_block == dead_block) {  // empty language: single non-final state
        out.state_count = 1;
        out.start = 0;
        out.finals = {0};
        out.trans = {std::vector<std::int32_t>(k, Dfa::kNoState)};
        out.defaults = {Dfa::kNoState};
        return out;
    }

    std::vector<std::int32_t> new_id(blocks.size(), -1);
    std::vector<std::uint32_t> order;
    new_id[start_block] = 0;
    order.push_back(start_block);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const std::uint32_t rep = blocks[order[i]].front();
        for (std::size_t c = 0; c < letters; ++c) {
            std::uint32_t t = target(rep, c);
            if (t == dead) continue;
            std::uint32_t tb = block_of[t];
            if (tb == dead_block || new_id[tb] >= 0) continue;
            new_id[tb] = static_cast<std::int32_t>(order.size());
            order.push_back(tb);
        }
    }

    out.state_count = static_cast<std::uint32_t>(order.size());
    out.start = 0;
    out.finals.assign(out.state_count, 0);
    out.trans.assign(out.state_count, std::vector<std::int32_t>(k, Dfa::kNoState));
    out.defaults.assign(out.state_count, Dfa::kNoState);
    for (std::uint32_t id = 0; id < out.state_count; ++id) {
        const std::uint32_t rep = blocks[order[id]].front();
        out.finals[id] = d.finals[rep];
        for (std::size_t c = 0; c < letters; ++c) {
            std::uint32_t t = target(rep, c);
            std::int32_t mapped = Dfa::kNoState;
            if (t != dead && block_of[t] != dead_block) {
                mapped = new_id[block_of[t]];
            }
            if (c < k) {
                out.trans[id][c] = mapped;
            } else {
                out.defaults[id] = mapped;
            }
        }
    }
    return out;
}

// ── complete ────────────────────────────────────────────────────────────────

Dfa complete(const Dfa& d) {
    Dfa out = d;
    if (out.is_total()) return out;

    const std::uint32_t reject = out.state_count;
    out.state_count += 1;
    out.finals.push_back(0);
    out.trans.emplace_back(out.support.size(), static_cast<std::int32_t>(reject));
    out.defaults.push_back(static_cast<std::int32_t>(reject));
    for (std::uint32_t q = 0; q < reject; ++q) {
        for (std::int32_t& t : out.trans[q]) {
            if (t == Dfa::kNoState) t = static_cast<std::int32_t>(reject);
        }
        if (out.defaults[q] == Dfa::kNoState) {
            out.defaults[q] = static_cast<std::int32_t>(reject);
        }
    }
    out.reject = reject;
    return out;
}

// ── distances ───────────────────────────────────────────────────────────────

DistanceMaps distances(const Dfa& d) {
    const std::uint32_t n = d.state_count;
    std::vector<std::vector<std::uint32_t>> adj(n), radj(n);
    for (std::uint32_t q = 0; q < n; ++q) {
        std::vector<std::uint32_t> targets;
        for (std::int32_t t : d.trans[q]) {
            if (t != Dfa::kNoState) targets.push_back(static_cast<std::uint32_t>(t));
        }
        if (d.defaults[q] != Dfa::kNoState) {
            targets.push_back(static_cast<std::uint32_t>(d.defaults[q]));
        }
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        for (std::uint32_t t : targets) {
            adj[q].push_back(t);
            radj[t].push_back(q);
        }
    }

    auto bfs = [n](const std::vector<std::vector<std::uint32_t>>& graph,
                   std::vector<std::uint32_t> sources) {
        std::vector<std::uint32_t> dist(n, DistanceMaps::kInfinity);
        std::queue<std::uint32_t> q;
        for (std::uint32_t s : sources) {
            if (dist[s] == DistanceMaps::kInfinity) {
                dist[s] = 0;
                q.push(s);
            }
        }
        while (!q.empty()) {
            std::uint32_t u = q.front();
            q.pop();
            for (std::uint32_t v : graph[u]) {
                if (dist[v] == DistanceMaps::kInfinity) {
                    dist[v] = dist[u] + 1;
                    q.push(v);
                }
            }
        }
        return dist;
    };

    DistanceMaps maps;
    maps.from_start = bfs(adj, {d.start});
    std::vector<std::uint32_t> finals;
    for (std::uint32_t q = 0; q < n; ++q) {
        if (d.finals[q]) finals.push_back(q);
    }
    maps.to_final = bfs(radj, std::move(finals));
    return maps;
}

// ── export_dot ──────────────────────────────────────────────────────────────

std::string export_dot(const Dfa& d, const Vocabulary& vocab) {
    std::string out = "digraph pattern_dfa {\n  rankdir=LR;\n  __start [shape=point];\n";
    for (std::uint32_t q = 0; q < d.state_count; ++q) {
        out += "  q" + std::to_string(q);
        if (d.reject && *d.reject == q) {
            out += " [shape=box,label=\"reject\"]";
        } else if (d.finals[q]) {
            out += " [shape=doublecircle]";
        } else {
            out += " [shape=circle]";
        }
        out += ";\n";
    }
    out += "  __start -> q" + std::to_string(d.start) + ";\n";
    for (std::uint32_t q = 0; q < d.state_count; ++q) {
        for (std::size_t c = 0; c < d.support.size(); ++c) {
            if (d.trans[q][c] == Dfa::kNoState) continue;
            out += "  q" + std::to_string(q) + " -> q" + std::to_string(d.trans[q][c]) +
                   " [label=\"" + format_symbol(d.support[c], vocab) + "\"];\n";
        }
        if (d.defaults[q] != Dfa::kNoState) {
            out += "  q" + std::to_string(q) + " -> q" + std::to_string(d.defaults[q]) +
                   " [label=\"OTHER\",style=dashed];\n";
        }
    }
    out += "}\n";
    return out;
}

// ── dump_json ───────────────────────────────────────────────────────────────

nlohmann::json dump_json(const Dfa& d, const Vocabulary& vocab) {
    nlohmann::json j;
    j["states"] = d.state_count;
    j["start"] = d.start;
    nlohmann::json finals = nlohmann::json::array();
    for (std::uint32_t q = 0; q < d.state_count; ++q) {
        if (d.finals[q]) finals.push_back(q);
    }
    j["finals"] = std::move(finals);
    j["reject"] = d.reject ? nlohmann::json(*d.reject) : nlohmann::json(nullptr);
    nlohmann::json support = nlohmann::json::array();
    for (const SymbolSet& w : d.support) {
        nlohmann::json names = nlohmann::json::array();
        for (std::uint32_t idx : w.members()) names.push_back(vocab.name(idx));
        support.push_back(std::move(names));
    }
    j["support"] = std::move(support);
    nlohmann::json table = nlohmann::json::array();
    for (std::uint32_t q = 0; q < d.state_count; ++q) {
        nlohmann::json row = nlohmann::json::array();
        for (std::int32_t t : d.trans[q]) {
            row.push_back(t == Dfa::kNoState ? nlohmann::json(nullptr) : nlohmann::json(t));
        }
        table.push_back(std::move(row));
    }
    j["explicit"] = std::move(table);
    nlohmann::json defaults = nlohmann::json::array();
    for (std::int32_t t : d.defaults) {
        defaults.push_back(t == Dfa::kNoState ? nlohmann::json(nullptr) : nlohmann::json(t));
    }
    j["default"] = std::move(defaults);
    return j;
}

// ── compile_pattern ─────────────────────────────────────────────────────────

Compiled compile_pattern(const Pattern& p) {
    Compiled c;
    c.partial = minimize(determinize(to_nfa(desugar(p))));
    c.completed = complete(c.partial);
    c.dist = distances(c.completed);
    return c;
}

}  // namespace actre
