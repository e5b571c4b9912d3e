#include "quasiperc/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace quasiperc {

int Configuration::ones() const {
    return static_cast<int>(std::count(state.begin(), state.end(), std::uint8_t{1}));
}

Configuration make_configuration(const AdjacencyGraph& graph, BoundaryPolicy boundary) {
    Configuration c;
    c.graph = &graph;
    c.state.assign(static_cast<std::size_t>(graph.size()), 0);
    c.boundary = boundary;
    return c;
}

bool RuleSpec::allows(int family, int sign) const {
    if (!allowed) return true;
    for (const auto& [f, s] : *allowed) {
        if (f == family && s == sign) return true;
    }
    return false;
}

RuleSpec band_f3_rule() {
    RuleSpec rule;
    rule.threshold = 2;
    rule.allowed = std::vector<std::pair<int, int>>{
        {0, +1}, {1, -1}, {2, +1}, {3, +1}, {3, -1}, {4, +1}, {4, -1}};
    return rule;
}

namespace {

void check_rule(const Configuration& config, const RuleSpec& rule) {
    if (rule.threshold < 1) {
        throw error(errc::unsupported_rule, "contamination threshold must be at least 1");
    }
    if (rule.directed()) {
        if (rule.allowed->empty()) {
            throw error(errc::unsupported_rule, "directed rule with empty direction set");
        }
        if (!config.graph->rhombus()) {
            throw error(errc::unsupported_rule, "directed rule on an unlabeled graph");
        }
        if (config.boundary == BoundaryPolicy::infected) {
            throw error(errc::unsupported_rule,
                        "infected boundary has no direction labels for a directed rule");
        }
    }
}

// Compact allow table; family count is small.
struct AllowTable {
    bool all = true;
    std::vector<std::uint8_t> table;  // [family*2 + (sign>0)]

    explicit AllowTable(const RuleSpec& rule, int families) {
        if (!rule.allowed) return;
        all = false;
        table.assign(static_cast<std::size_t>(families) * 2, 0);
        for (const auto& [f, s] : *rule.allowed) {
            if (f < 0 || f >= families) continue;
            table[static_cast<std::size_t>(f) * 2 + (s > 0 ? 1 : 0)] = 1;
        }
    }
    bool operator()(int family, int sign) const {
        if (all) return true;
        if (family < 0) return false;
        return table[static_cast<std::size_t>(family) * 2 + (sign > 0 ? 1 : 0)] != 0;
    }
};

int family_count(const AdjacencyGraph& g) { return g.rhombus() ? g.patch->basis.n : 0; }

} // namespace

Configuration step(const Configuration& config, const RuleSpec& rule) {
    check_rule(config, rule);
    const AdjacencyGraph& g = *config.graph;
    const AllowTable allow(rule, family_count(g));
    Configuration next = config;
    for (int v = 0; v < g.size(); ++v) {
        if (config.state[static_cast<std::size_t>(v)]) continue;
        int count = config.boundary == BoundaryPolicy::infected
                        ? g.virtual_boundary[static_cast<std::size_t>(v)]
                        : 0;
        for (const Arc& a : g.arcs[static_cast<std::size_t>(v)]) {
            if (config.state[static_cast<std::size_t>(a.to)] && allow(a.family, a.sign)) ++count;
        }
        if (count >= rule.threshold) next.state[static_cast<std::size_t>(v)] = 1;
    }
    return next;
}

FixpointResult fixpoint(const Configuration& config, const RuleSpec& rule) {
    check_rule(config, rule);
    const AdjacencyGraph& g = *config.graph;
    const AllowTable allow(rule, family_count(g));

    FixpointResult result{config, 0};
    std::vector<std::uint8_t>& state = result.config.state;
    std::vector<int> count(state.size(), 0);

    std::vector<int> frontier;
    std::vector<int> next_frontier;
    // Seed counts from the initial 1s, then grow round by round; a tile
    // joins the next frontier the moment its count crosses the
    // threshold, which reproduces the synchronous rounds exactly.
    for (int v = 0; v < g.size(); ++v) {
        if (state[static_cast<std::size_t>(v)]) continue;
        int c = config.boundary == BoundaryPolicy::infected
                    ? g.virtual_boundary[static_cast<std::size_t>(v)]
                    : 0;
        for (const Arc& a : g.arcs[static_cast<std::size_t>(v)]) {
            if (state[static_cast<std::size_t>(a.to)] && allow(a.family, a.sign)) ++c;
        }
        count[static_cast<std::size_t>(v)] = c;
        if (c >= rule.threshold) frontier.push_back(v);
    }
    int rounds = 0;
    while (!frontier.empty()) {
        ++rounds;
        next_frontier.clear();
        for (int v : frontier) state[static_cast<std::size_t>(v)] = 1;
        for (int v : frontier) {
            for (const Arc& a : g.arcs[static_cast<std::size_t>(v)]) {
                if (state[static_cast<std::size_t>(a.to)]) continue;
                // Direction of v as seen from a.to is the reverse arc.
                if (!allow(a.family, -a.sign)) continue;
                if (++count[static_cast<std::size_t>(a.to)] == rule.threshold) {
                    next_frontier.push_back(a.to);
                }
            }
        }
        frontier.swap(next_frontier);
    }
    result.rounds = rounds;
    return result;
}

FixpointResult fixpoint_oracle(const Configuration& config, const RuleSpec& rule) {
    FixpointResult result{config, 0};
    for (;;) {
        Configuration next = step(result.config, rule);
        if (next.state == result.config.state) break;
        result.config = std::move(next);
        ++result.rounds;
    }
    return result;
}

bool is_stable(const Configuration& config, const RuleSpec& rule) {
    return step(config, rule).state == config.state;
}

std::string encode_state(const Configuration& config) {
    std::ostringstream out;
    const auto& s = config.state;
    for (std::size_t i = 0; i < s.size();) {
        std::size_t j = i;
        while (j < s.size() && s[j] == s[i]) ++j;
        if (i) out << ',';
        out << static_cast<int>(s[i]) << 'x' << (j - i);
        i = j;
    }
    return out.str();
}

std::vector<std::uint8_t> decode_state(const std::string& rle) {
    std::vector<std::uint8_t> out;
    std::istringstream in(rle);
    std::string token;
    while (std::getline(in, token, ',')) {
        const auto x = token.find('x');
        if (x == std::string::npos) throw error(errc::bad_file, "malformed run-length state");
        const int value = std::stoi(token.substr(0, x));
        const long run = std::stol(token.substr(x + 1));
        out.insert(out.end(), static_cast<std::size_t>(run), static_cast<std::uint8_t>(value));
    }
    return out;
}

} // namespace quasiperc
