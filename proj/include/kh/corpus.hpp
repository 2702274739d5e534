#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kh/pd.hpp"

namespace kh {

/// One braid letter: generator index i (0-based, acting on strand
/// positions i and i+1) and sign.
struct BraidLetter {
    int index = 0;
    int sign = +1;
};
using BraidWord = std::vector<BraidLetter>;

namespace braid_detail {

// Emit the PD tuple for one letter. Strands run upward; for a positive
// letter the strand entering at position i passes over. Returns the
// crossing and updates the per-position edge labels.
inline Crossing emit_letter(std::vector<int>& edges, int& next_edge, const BraidLetter& l) {
    const int a = edges[l.index];      // lower left
    const int b = edges[l.index + 1];  // lower right
    const int c = next_edge++;         // upper left
    const int d = next_edge++;         // upper right
    Crossing x;
    if (l.sign > 0)
        x.edges = {b, d, c, a};  // under b -> c, over a -> d
    else
        x.edges = {a, b, d, c};  // under a -> d, over b -> c
    x.sign = l.sign;
    edges[l.index] = c;
    edges[l.index + 1] = d;
    return x;
}

inline void rename_edge(std::vector<Crossing>& crossings, int from, int to) {
    for (auto& c : crossings)
        for (auto& e : c.edges)
            if (e == from) e = to;
}

// The emitters place the under-strand on the (0,2) diagonal assuming flow
// bottom-to-top. Caps reverse the flow on some strands, so the under-in leg
// may sit at slot 2. Orient every strand cycle (free components get a
// deterministic default) and rotate each tuple to start at the under-in.
inline void orient_rotations(std::vector<Crossing>& crossings) {
    const int n = static_cast<int>(crossings.size());
    std::map<int, std::vector<std::pair<int, int>>> occ;
    for (int c = 0; c < n; ++c)
        for (int p = 0; p < 4; ++p) occ[crossings[c].edges[p]].push_back({c, p});
    std::vector<std::array<int, 4>> status(n, {0, 0, 0, 0});  // 1 in, 2 out
    std::vector<std::pair<int, int>> work;
    auto assign = [&](int c, int p, int st) {
        if (status[c][p] == st) return;
        if (status[c][p] != 0) throw std::logic_error("plat: inconsistent strand orientation");
        status[c][p] = st;
        work.push_back({c, p});
    };
    auto propagate = [&]() {
        while (!work.empty()) {
            auto [c, p] = work.back();
            work.pop_back();
            const int st = status[c][p];
            for (auto [c2, p2] : occ[crossings[c].edges[p]])
                if (c2 != c || p2 != p) assign(c2, p2, st == 1 ? 2 : 1);
            assign(c, p ^ 2, st == 1 ? 2 : 1);  // through-strand
        }
    };
    for (int c = 0; c < n; ++c)
        for (int p = 0; p < 4; ++p)
            if (status[c][p] == 0) {
                assign(c, p, 1);
                propagate();
            }
    for (int c = 0; c < n; ++c)
        if (status[c][0] != 1) {
            auto e = crossings[c].edges;
            crossings[c].edges = {e[2], e[3], e[0], e[1]};
        }
}

}  // namespace braid_detail

/// Open braid tangle: crossings with signs assigned from the letters
/// (strands oriented upward). Boundary edges are the initial labels
/// 1..strands and the final per-position labels.
inline std::vector<Crossing> braid_tangle(int strands, const BraidWord& word,
                                          std::vector<int>* top_edges = nullptr) {
    std::vector<int> edges(strands);
    for (int i = 0; i < strands; ++i) edges[i] = i + 1;
    int next_edge = strands + 1;
    std::vector<Crossing> crossings;
    for (const auto& l : word) crossings.push_back(braid_detail::emit_letter(edges, next_edge, l));
    if (top_edges) *top_edges = edges;
    return crossings;
}

/// Braid closure: identify the top of each strand with its bottom.
/// Strands untouched by the word become crossingless circles.
inline Diagram braid_closure_pd(int strands, const BraidWord& word) {
    std::vector<int> edges(strands);
    for (int i = 0; i < strands; ++i) edges[i] = i + 1;
    int next_edge = strands + 1;
    std::vector<Crossing> crossings;
    for (const auto& l : word) crossings.push_back(braid_detail::emit_letter(edges, next_edge, l));
    int unknots = 0;
    for (int i = 0; i < strands; ++i) {
        if (edges[i] == i + 1)
            ++unknots;  // untouched strand closes to a circle
        else
            braid_detail::rename_edge(crossings, edges[i], i + 1);
    }
    return finalize_diagram(std::move(crossings), unknots);
}

/// Plat closure on an even number of strands: positions (0,1), (2,3), ...
/// are capped below and above. Rational (2-bridge) diagrams arise this way.
inline Diagram plat_closure_pd(int strands, const BraidWord& word) {
    if (strands % 2) throw std::invalid_argument("plat closure needs an even strand count");
    std::vector<int> edges(strands);
    int next_edge = 1;
    for (int i = 0; i < strands; i += 2) {
        edges[i] = edges[i + 1] = next_edge;
        ++next_edge;
    }
    std::vector<Crossing> crossings;
    for (const auto& l : word) crossings.push_back(braid_detail::emit_letter(edges, next_edge, l));
    int unknots = 0;
    for (int i = 0; i < strands; i += 2) {
        if (edges[i] == edges[i + 1])
            ++unknots;  // both ends of a bottom cap met: a free circle
        else
            braid_detail::rename_edge(crossings, edges[i + 1], edges[i]);
    }
    braid_detail::orient_rotations(crossings);
    return finalize_diagram(std::move(crossings), unknots);
}

inline BraidWord repeated_word(const BraidWord& w, int times) {
    BraidWord out;
    for (int t = 0; t < times; ++t) out.insert(out.end(), w.begin(), w.end());
    return out;
}

/// Torus knot/link T(p,q) as the closure of (s_1 ... s_{m-1})^n on
/// m = min(p,q) strands, all crossings positive.
inline Diagram torus_pd(int p, int q) {
    const int m = std::min(p, q), n = std::max(p, q);
    BraidWord round;
    for (int i = 0; i + 1 < m; ++i) round.push_back({i, +1});
    return braid_closure_pd(m, repeated_word(round, n));
}

/// Figure-eight knot in a clasp presentation: plat closure of
/// s2 s1^-1 s2 s2 on four strands. The diagram splits into two
/// two-crossing four-ended tangles, one with both crossings negative.
inline Diagram figure_eight_pd() {
    BraidWord w = {{1, +1}, {0, -1}, {1, +1}, {1, +1}};
    return plat_closure_pd(4, w);
}

/// The clasp cut of figure_eight_pd: the negative pair first, then the
/// positive pair.
inline std::pair<std::vector<int>, std::vector<int>> figure_eight_cut() {
    Diagram d = figure_eight_pd();
    std::vector<int> neg, pos;
    for (int c = 0; c < d.size(); ++c)
        (d.crossings[c].sign < 0 ? neg : pos).push_back(c);
    return {neg, pos};
}

/// The left-handed trefoil in its table presentation.
inline Diagram trefoil_pd() { return parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"); }

struct CorpusEntry {
    std::string name;
    std::string knot;  // diagrams with equal labels present the same knot
    Diagram diagram;
};

namespace corpus_detail {

inline std::string word_str(int strands, const BraidWord& w) {
    std::string s = "braid" + std::to_string(strands) + ":";
    for (const auto& l : w) {
        s += l.sign > 0 ? "+" : "-";
        s += std::to_string(l.index + 1);
    }
    return s;
}

}  // namespace corpus_detail

/// Deterministic diagram corpus: named small knots, assorted braid and
/// plat closures up to 8 crossings, Markov-move variants of the same knot,
/// and `random_count` seeded random braid closures.
inline std::vector<CorpusEntry> build_corpus(int random_count = 50,
                                             std::uint32_t seed = 20060613) {
    std::vector<CorpusEntry> out;
    auto add = [&](std::string name, std::string knot, Diagram d) {
        out.push_back({std::move(name), std::move(knot), std::move(d)});
    };

    add("unknot", "0_1", parse_pd("PD[U]"));
    add("unknot-kink+", "0_1", parse_pd("PD[X[1,1,2,2]]"));
    add("unknot-kink-", "0_1", mirror_diagram(parse_pd("PD[X[1,1,2,2]]")));
    add("two-unlink", "unlink2", parse_pd("PD[U,U]"));
    add("trefoil-left", "3_1m", trefoil_pd());
    add("trefoil-right", "3_1", torus_pd(2, 3));
    add("figure-eight", "4_1", figure_eight_pd());
    add("figure-eight-mirror", "4_1", mirror_diagram(figure_eight_pd()));
    add("torus-2-5", "5_1", torus_pd(2, 5));
    add("torus-2-7", "7_1", torus_pd(2, 7));
    add("torus-3-4", "8_19", torus_pd(3, 4));
    add("hopf-link", "L2a1", braid_closure_pd(2, {{0, +1}, {0, +1}}));

    // two-bridge family: plat closures of s2^a s1^{+-b}
    for (int a = 2; a <= 4; ++a)
        for (int b = 2; a + b <= 8; ++b) {
            BraidWord w;
            for (int k = 0; k < a; ++k) w.push_back({1, +1});
            for (int k = 0; k < b; ++k) w.push_back({0, -1});
            add("plat-" + std::to_string(a) + "-" + std::to_string(b),
                "plat(" + std::to_string(a) + "," + std::to_string(b) + ")",
                plat_closure_pd(4, w));
        }

    // assorted closed braids on three strands
    const std::vector<BraidWord> words = {
        {{0, +1}, {1, -1}, {0, +1}, {1, -1}, {0, +1}, {1, -1}},          // 6 crossings
        {{0, +1}, {0, +1}, {1, +1}, {1, +1}, {0, +1}, {1, +1}},          // 6
        {{0, +1}, {0, +1}, {0, +1}, {1, -1}, {0, +1}, {1, -1}},          // 6
        {{0, +1}, {1, +1}, {0, +1}, {1, +1}, {0, +1}, {1, +1}, {0, +1}, {1, +1}},  // 8
        {{0, -1}, {1, +1}, {0, -1}, {1, +1}, {0, -1}, {1, +1}, {0, -1}},           // 7
    };
    for (const auto& w : words)
        add(corpus_detail::word_str(3, w), corpus_detail::word_str(3, w),
            braid_closure_pd(3, w));

    // the same knot presented through Markov and Reidemeister moves
    {
        BraidWord tre = {{0, +1}, {0, +1}, {0, +1}};
        add("trefoil-braid", "3_1", braid_closure_pd(2, tre));
        BraidWord stab = tre;
        stab.push_back({1, +1});  // Markov stabilization
        add("trefoil-stabilized", "3_1", braid_closure_pd(3, stab));
        BraidWord r2 = {{0, +1}, {0, -1}, {0, +1}, {0, +1}, {0, +1}};  // s s^-1 inserted
        add("trefoil-r2", "3_1", braid_closure_pd(2, r2));

        BraidWord f8 = {{0, +1}, {1, -1}, {0, +1}, {1, -1}};
        add("figure-eight-braid", "4_1", braid_closure_pd(3, f8));
        BraidWord f8c;  // conjugate by s1
        f8c.push_back({0, +1});
        f8c.insert(f8c.end(), f8.begin(), f8.end());
        f8c.push_back({0, -1});
        add("figure-eight-conjugated", "4_1", braid_closure_pd(3, f8c));
        BraidWord f8s = f8;
        f8s.push_back({2, -1});
        add("figure-eight-stabilized", "4_1", braid_closure_pd(4, f8s));

        BraidWord t25 = repeated_word({{0, +1}}, 5);
        BraidWord t25r2 = t25;
        t25r2.push_back({0, -1});
        t25r2.push_back({0, +1});
        add("torus-2-5-r2", "5_1", braid_closure_pd(2, t25r2));
    }

    // seeded random braid closures with <= 8 crossings
    std::mt19937 rng(seed);
    std::set<std::string> seen;
    int made = 0;
    while (made < random_count) {
        const int strands = 2 + static_cast<int>(rng() % 3);
        const int len = 3 + static_cast<int>(rng() % 6);
        BraidWord w;
        for (int k = 0; k < len; ++k)
            w.push_back({static_cast<int>(rng() % (strands - 1)), (rng() & 1) ? +1 : -1});
        Diagram d = braid_closure_pd(strands, w);
        if (d.size() > 8) continue;
        std::string key = serialize_pd(d);
        if (!seen.insert(key).second) continue;
        add("random-" + std::to_string(made), corpus_detail::word_str(strands, w), std::move(d));
        ++made;
    }
    return out;
}

}  // namespace kh
