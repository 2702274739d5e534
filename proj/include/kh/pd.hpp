#pragma once

#include <array>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace kh {

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
    explicit ParseError(const std::string& msg) : std::runtime_error(msg), pos_(0) {}
    std::size_t position() const { return pos_; }

  private:
    std::size_t pos_;
};

/// One crossing of a planar diagram. `edges` lists the four incident edge
/// labels counterclockwise starting from the incoming under-strand, as in
/// the usual PD code X[a,b,c,d]. The sign is derived from the global
/// orientation: -1 when the over-strand enters at the second slot, +1 when
/// it enters at the fourth.
struct Crossing {
    std::array<int, 4> edges{};
    int sign = 0;
};

/// A validated knot/link diagram. Every edge label occurs exactly twice
/// over all crossings; `unknots` counts crossingless circle components
/// declared with the U marker.
struct Diagram {
    std::vector<Crossing> crossings;
    int unknots = 0;
    int edge_count = 0;
    int components = 0;

    int n_plus() const {
        int k = 0;
        for (const auto& c : crossings) k += c.sign > 0;
        return k;
    }
    int n_minus() const {
        int k = 0;
        for (const auto& c : crossings) k += c.sign < 0;
        return k;
    }
    int writhe() const { return n_plus() - n_minus(); }
    int size() const { return static_cast<int>(crossings.size()); }
};

namespace detail {

// Orientation propagation. Each leg (crossing, position) is either an
// entry point of its strand or an exit point. Under-strand legs are fixed
// by the PD convention; over legs are forced by following strands through
// the diagram. Components that never pass under anything are oriented by
// a deterministic default.
inline void orient_and_sign(std::vector<Crossing>& crossings, int& components) {
    const int n = static_cast<int>(crossings.size());
    // occurrences[edge] = list of legs carrying that edge
    std::map<int, std::vector<std::pair<int, int>>> occurrences;
    for (int c = 0; c < n; ++c)
        for (int p = 0; p < 4; ++p) occurrences[crossings[c].edges[p]].push_back({c, p});
    for (const auto& [e, occ] : occurrences)
        if (occ.size() != 2)
            throw ParseError("edge " + std::to_string(e) + " appears " +
                             std::to_string(occ.size()) + " times, expected 2");

    // status: 0 unknown, 1 = strand enters the crossing here, 2 = exits
    std::vector<std::array<int, 4>> status(n, {0, 0, 0, 0});
    std::vector<std::pair<int, int>> work;
    auto assign = [&](int c, int p, int st) {
        if (status[c][p] == st) return;
        if (status[c][p] != 0) throw ParseError("inconsistent orientation");
        status[c][p] = st;
        work.push_back({c, p});
    };
    for (int c = 0; c < n; ++c) {
        assign(c, 0, 1);
        assign(c, 2, 2);
    }
    auto propagate = [&]() {
        while (!work.empty()) {
            auto [c, p] = work.back();
            work.pop_back();
            const int st = status[c][p];
            // the two occurrences of an edge face opposite ways
            for (auto [c2, p2] : occurrences[crossings[c].edges[p]])
                if (c2 != c || p2 != p) assign(c2, p2, st == 1 ? 2 : 1);
            // the over-strand enters on one side and exits on the other
            if (p == 1 || p == 3) assign(c, p ^ 2, st == 1 ? 2 : 1);
        }
    };
    propagate();
    for (int c = 0; c < n; ++c)
        for (int p = 1; p < 4; p += 2)
            if (status[c][p] == 0) {
                assign(c, p, 1);  // free choice for all-over components
                propagate();
            }

    for (int c = 0; c < n; ++c) crossings[c].sign = status[c][1] == 1 ? -1 : +1;

    // count strand components: legs 0-2 and 1-3 belong to the same strand,
    // as do the two occurrences of each edge
    std::vector<int> parent(4 * n);
    for (int i = 0; i < 4 * n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (int c = 0; c < n; ++c) {
        unite(4 * c + 0, 4 * c + 2);
        unite(4 * c + 1, 4 * c + 3);
    }
    for (const auto& [e, occ] : occurrences)
        unite(4 * occ[0].first + occ[0].second, 4 * occ[1].first + occ[1].second);
    std::set<int> roots;
    for (int i = 0; i < 4 * n; ++i) roots.insert(find(i));
    components = static_cast<int>(roots.size());
}

inline void skip_ws(const std::string& s, std::size_t& i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

inline int parse_int(const std::string& s, std::size_t& i) {
    skip_ws(s, i);
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) throw ParseError("expected an edge label", start);
    return std::stoi(s.substr(start, i - start));
}

inline void expect(const std::string& s, std::size_t& i, char ch) {
    skip_ws(s, i);
    if (i >= s.size() || s[i] != ch)
        throw ParseError(std::string("expected '") + ch + "'", i);
    ++i;
}

}  // namespace detail

/// Finish building a diagram from raw crossings and unknot markers:
/// validates edge multiplicities, orients every strand and derives signs.
inline Diagram finalize_diagram(std::vector<Crossing> crossings, int unknots) {
    Diagram d;
    d.crossings = std::move(crossings);
    d.unknots = unknots;
    std::set<int> edges;
    for (const auto& c : d.crossings)
        for (int e : c.edges) {
            if (e <= 0) throw ParseError("edge labels must be positive");
            edges.insert(e);
        }
    d.edge_count = static_cast<int>(edges.size());
    detail::orient_and_sign(d.crossings, d.components);
    d.components += unknots;
    if (d.crossings.empty()) d.components = std::max(d.components, unknots);
    return d;
}

/// Parse the PD[X[a,b,c,d], ..., U, ...] grammar. Whitespace-insensitive;
/// U (or Unknot) adds a crossingless circle component.
inline Diagram parse_pd(const std::string& text) {
    std::size_t i = 0;
    detail::skip_ws(text, i);
    if (text.compare(i, 3, "PD[") != 0) throw ParseError("expected PD[", i);
    i += 3;
    std::vector<Crossing> crossings;
    int unknots = 0;
    detail::skip_ws(text, i);
    if (i < text.size() && text[i] == ']') {
        ++i;
    } else {
        for (;;) {
            detail::skip_ws(text, i);
            if (i >= text.size()) throw ParseError("unterminated PD expression", i);
            if (text[i] == 'X') {
                ++i;
                detail::expect(text, i, '[');
                Crossing c;
                for (int k = 0; k < 4; ++k) {
                    if (k) detail::expect(text, i, ',');
                    c.edges[k] = detail::parse_int(text, i);
                }
                detail::expect(text, i, ']');
                crossings.push_back(c);
            } else if (text.compare(i, 6, "Unknot") == 0) {
                i += 6;
                ++unknots;
            } else if (text[i] == 'U') {
                ++i;
                ++unknots;
            } else {
                throw ParseError("expected X[...] or U", i);
            }
            detail::skip_ws(text, i);
            if (i < text.size() && text[i] == ',') {
                ++i;
                continue;
            }
            detail::expect(text, i, ']');
            break;
        }
    }
    detail::skip_ws(text, i);
    if (i != text.size()) throw ParseError("trailing characters after PD expression", i);
    return finalize_diagram(std::move(crossings), unknots);
}

/// Canonical text form; parse_pd(serialize_pd(d)) reproduces d.
inline std::string serialize_pd(const Diagram& d) {
    std::string out = "PD[";
    bool first = true;
    for (const auto& c : d.crossings) {
        if (!first) out += ",";
        out += "X[" + std::to_string(c.edges[0]) + "," + std::to_string(c.edges[1]) + "," +
               std::to_string(c.edges[2]) + "," + std::to_string(c.edges[3]) + "]";
        first = false;
    }
    for (int k = 0; k < d.unknots; ++k) {
        if (!first) out += ",";
        out += "U";
        first = false;
    }
    out += "]";
    return out;
}

/// Mirror image: at every crossing the other strand goes on top. The PD
/// tuple is rotated so it again starts from the incoming under-strand.
inline Diagram mirror_diagram(const Diagram& d) {
    std::vector<Crossing> crossings;
    crossings.reserve(d.crossings.size());
    for (const auto& c : d.crossings) {
        Crossing m;
        // old over-strand becomes the under-strand; it entered at slot 1
        // when the sign was -1 and at slot 3 when it was +1
        int start = c.sign < 0 ? 1 : 3;
        for (int k = 0; k < 4; ++k) m.edges[k] = c.edges[(start + k) % 4];
        crossings.push_back(m);
    }
    return finalize_diagram(std::move(crossings), d.unknots);
}

}  // namespace kh
