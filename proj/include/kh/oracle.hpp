#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "kh/homology.hpp"
#include "kh/laurent.hpp"
#include "kh/pd.hpp"

namespace kh {

// Brute-force ground truth over the full cube of resolutions. This module
// deliberately shares no smoothing or simplification code with the scan
// pipeline; only Diagram and the output types are common.

namespace oracle_detail {

// Resolve every crossing of d according to the state bitstring and return
// the loop id of each leg (legs are numbered 4*crossing + slot).
// 0-resolution joins legs (0,1) and (2,3); 1-resolution joins (0,3),(1,2).
struct Resolution {
    std::vector<int> loop_of_leg;
    int loops = 0;
};

inline Resolution resolve(const Diagram& d, std::uint64_t state) {
    const int n = d.size();
    std::vector<int> parent(4 * n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (int c = 0; c < n; ++c) {
        if (state >> c & 1) {
            unite(4 * c + 0, 4 * c + 3);
            unite(4 * c + 1, 4 * c + 2);
        } else {
            unite(4 * c + 0, 4 * c + 1);
            unite(4 * c + 2, 4 * c + 3);
        }
    }
    std::map<int, std::vector<int>> occ;
    for (int c = 0; c < n; ++c)
        for (int p = 0; p < 4; ++p) occ[d.crossings[c].edges[p]].push_back(4 * c + p);
    for (const auto& [e, legs] : occ) unite(legs[0], legs[1]);

    Resolution res;
    res.loop_of_leg.assign(4 * n, -1);
    for (int i = 0; i < 4 * n; ++i) {
        int r = find(i);
        if (res.loop_of_leg[r] < 0) res.loop_of_leg[r] = res.loops++;
    }
    for (int i = 0; i < 4 * n; ++i) res.loop_of_leg[i] = res.loop_of_leg[find(i)];
    return res;
}

}  // namespace oracle_detail

inline constexpr int kOracleDefaultLimit = 14;

/// The full 2^n Khovanov cube with the (v-, v+) tensor-basis product and
/// coproduct, assembled into integer chain complexes split by q-degree.
/// Heights are r - n_minus, q-degrees (#v+ - #v-) + r + n_plus - 2 n_minus;
/// edge signs follow the (-1)^(ones below the flipped bit) rule.
inline GradedIntegerComplex cube_complex(const Diagram& d, int limit = kOracleDefaultLimit) {
    const int n = d.size();
    if (n > limit)
        throw std::invalid_argument("cube_complex: diagram exceeds the crossing limit");
    if (n > 24) throw std::invalid_argument("cube_complex: too many crossings");
    const int n_plus = d.n_plus(), n_minus = d.n_minus();

    std::vector<oracle_detail::Resolution> res(std::size_t(1) << n);
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << n); ++s)
        res[s] = oracle_detail::resolve(d, s);

    // generator = (state, labels); label bit i set means loop i carries v+.
    // Crossingless unknot components add passive loops after the state's.
    std::map<std::pair<int, int>, long> block_size;       // (h, q) -> dim
    std::map<std::pair<std::uint64_t, std::uint64_t>, long> gen_index;
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << n); ++s) {
        const int r = static_cast<int>(__builtin_popcountll(s));
        const int loops = res[s].loops + d.unknots;
        for (std::uint64_t labels = 0; labels < (std::uint64_t(1) << loops); ++labels) {
            const int plus = static_cast<int>(__builtin_popcountll(labels));
            const int q = (2 * plus - loops) + r + n_plus - 2 * n_minus;
            gen_index[{s, labels}] = block_size[{r - n_minus, q}]++;
        }
    }

    GradedIntegerComplex g;
    for (const auto& [hq, size] : block_size) g.by_q[hq.second].dims[hq.first] =
        static_cast<int>(size);
    for (auto& [q, block] : g.by_q)
        for (auto& [h, dim] : block.dims) {
            auto next = block.dims.find(h + 1);
            if (next != block.dims.end()) block.diff.emplace(h, IntMat(next->second, dim));
        }

    for (std::uint64_t s = 0; s < (std::uint64_t(1) << n); ++s) {
        const int r = static_cast<int>(__builtin_popcountll(s));
        const int h = r - n_minus;
        const auto& ra = res[s];
        const int loops_s = ra.loops + d.unknots;
        for (int c = 0; c < n; ++c) {
            if (s >> c & 1) continue;
            const std::uint64_t s2 = s | (std::uint64_t(1) << c);
            const int sign = (__builtin_popcountll(s & ((std::uint64_t(1) << c) - 1)) % 2) ? -1 : 1;
            const auto& rb = res[s2];

            // loops through the legs of crossing c change; all others map
            // across by any shared leg
            std::vector<int> a_affected, b_affected;
            for (int p = 0; p < 4; ++p) {
                int la = ra.loop_of_leg[4 * c + p], lb = rb.loop_of_leg[4 * c + p];
                if (!std::count(a_affected.begin(), a_affected.end(), la))
                    a_affected.push_back(la);
                if (!std::count(b_affected.begin(), b_affected.end(), lb))
                    b_affected.push_back(lb);
            }
            const bool merge = a_affected.size() == 2;
            if ((merge && b_affected.size() != 1) ||
                (!merge && (a_affected.size() != 1 || b_affected.size() != 2)))
                throw std::logic_error("cube: resolution change is neither merge nor split");

            std::vector<int> loop_map(loops_s, -1);  // s-loop -> s2-loop, -1 if affected
            for (int leg = 0; leg < 4 * n; ++leg) {
                int la = ra.loop_of_leg[leg];
                if (!std::count(a_affected.begin(), a_affected.end(), la))
                    loop_map[la] = rb.loop_of_leg[leg];
            }
            for (int k = 0; k < d.unknots; ++k) loop_map[ra.loops + k] = rb.loops + k;

            for (std::uint64_t labels = 0; labels < (std::uint64_t(1) << loops_s); ++labels) {
                const int plus = static_cast<int>(__builtin_popcountll(labels));
                const int q = (2 * plus - loops_s) + r + n_plus - 2 * n_minus;
                const long col = gen_index.at({s, labels});
                std::uint64_t base = 0;
                for (int la = 0; la < loops_s; ++la)
                    if ((labels >> la & 1) && loop_map[la] >= 0)
                        base |= std::uint64_t(1) << loop_map[la];
                auto emit = [&](std::uint64_t lab) {
                    g.by_q.at(q).diff.at(h).at(gen_index.at({s2, lab}), col) += sign;
                };
                if (merge) {
                    const bool x = labels >> a_affected[0] & 1;
                    const bool y = labels >> a_affected[1] & 1;
                    // m(v-,v-) = 0; m(v-,v+) = m(v+,v-) = v-; m(v+,v+) = v+
                    if (!x && !y) continue;
                    emit(base | (x && y ? std::uint64_t(1) << b_affected[0] : 0));
                } else {
                    const bool x = labels >> a_affected[0] & 1;
                    if (!x) {
                        emit(base);  // Delta(v-) = v- v-
                    } else {         // Delta(v+) = v- v+ + v+ v-
                        emit(base | std::uint64_t(1) << b_affected[1]);
                        emit(base | std::uint64_t(1) << b_affected[0]);
                    }
                }
            }
        }
    }
    return g;
}

/// Kauffman-bracket state sum in the q-normalization: the graded Euler
/// characteristic of Khovanov homology (unnormalized Jones polynomial).
inline Laurent kauffman_bracket(const Diagram& d, int limit = kOracleDefaultLimit) {
    const int n = d.size();
    if (n > limit)
        throw std::invalid_argument("kauffman_bracket: diagram exceeds the crossing limit");
    const int n_plus = d.n_plus(), n_minus = d.n_minus();
    Laurent total;
    const Laurent circle = Laurent::loop_value();
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << n); ++s) {
        const int r = static_cast<int>(__builtin_popcountll(s));
        auto res = oracle_detail::resolve(d, s);
        total += Laurent::monomial(r, (r % 2) ? -1 : 1) * circle.pow(res.loops + d.unknots);
    }
    return total * Laurent::monomial(n_plus - 2 * n_minus, (n_minus % 2) ? -1 : 1);
}

}  // namespace kh
