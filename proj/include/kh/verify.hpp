#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kh/corpus.hpp"
#include "kh/homology.hpp"
#include "kh/scan.hpp"

namespace kh {

struct MoveReport {
    std::string name;
    bool pass = false;
    int objects_before = 0;
    int objects_after = 0;
    std::string detail;
};

namespace verify_detail {

// kink tangles: edge ids 1 (the kink loop), 2/3 the open strand ends
inline Crossing positive_kink() {
    Crossing c;
    c.edges = {1, 1, 2, 3};
    c.sign = +1;
    return c;
}
inline Crossing negative_kink() {
    Crossing c;
    c.edges = {1, 2, 2, 3};
    c.sign = -1;
    return c;
}

inline std::vector<std::vector<std::pair<int, int>>> planar_matchings(int n) {
    // non-crossing perfect matchings on points 0..n-1
    if (n == 0) return {{}};
    std::vector<std::vector<std::pair<int, int>>> out;
    for (int k = 1; k < n; k += 2) {
        auto inner = planar_matchings(k - 1);
        std::vector<int> right(n - k - 1);
        for (int i = 0; i < n - k - 1; ++i) right[i] = k + 1 + i;
        auto outer = planar_matchings(n - k - 1);
        for (const auto& in : inner)
            for (const auto& om : outer) {
                std::vector<std::pair<int, int>> m;
                m.push_back({0, k});
                for (auto [a, b] : in) m.push_back({a + 1, b + 1});
                for (auto [a, b] : om) m.push_back({right[a], right[b]});
                out.push_back(std::move(m));
            }
    }
    return out;
}

}  // namespace verify_detail

/// Simplify the one-crossing kink tangles; each must collapse to the
/// single-strand smoothing with no residual shift.
inline MoveReport check_r1() {
    MoveReport rep;
    rep.name = "R1";
    std::ostringstream detail;
    rep.pass = true;
    for (int sign : {+1, -1}) {
        std::vector<Crossing> tangle = {sign > 0 ? verify_detail::positive_kink()
                                                 : verify_detail::negative_kink()};
        rep.objects_before += 2;  // the raw one-crossing complex
        ScanStats stats;
        auto [c, circle] = scan_tangle<Int>(tangle, {0}, &stats);
        rep.objects_after += c.object_count();
        const Smoothing expected = Smoothing::from_pairs(2, {{0, 1}});
        bool ok = c.object_count() == 1 && c.columns.count(0) &&
                  c.columns.at(0).size() == 1 && c.columns.at(0).begin()->second == expected;
        detail << (sign > 0 ? "positive" : "negative") << " kink -> " << describe(c) << "; ";
        rep.pass = rep.pass && ok;
    }
    rep.detail = detail.str();
    return rep;
}

/// Build the hard side of R2 (over then under), simplify, and compare with
/// the two parallel strands, shifts included.
inline MoveReport check_r2() {
    MoveReport rep;
    rep.name = "R2";
    Crossing c1, c2;
    c1.edges = {1, 2, 3, 4};  // lower crossing, right strand over
    c1.sign = -1;
    c2.edges = {3, 5, 6, 4};  // upper crossing, left strand over
    c2.sign = +1;
    std::vector<Crossing> tangle = {c1, c2};
    rep.objects_before = 4;  // flattened double complex of two crossings
    ScanStats stats;
    auto [c, circle] = scan_tangle<Int>(tangle, {0, 1}, &stats);
    rep.objects_after = c.object_count();

    // the easy side: the strands run 1 -> 6 and 2 -> 5 in parallel
    bool ok = c.object_count() == 1 && c.columns.count(0) && c.columns.at(0).size() == 1;
    if (ok) {
        const Smoothing& s = c.columns.at(0).begin()->second;
        ok = s.loops == 0 && s.qshift == 0 && s.boundary_size() == 4;
        auto pos = [&](int e) {
            return static_cast<int>(std::find(circle.begin(), circle.end(), e) - circle.begin());
        };
        ok = ok && s.match[pos(1)] == pos(6) && s.match[pos(2)] == pos(5);
    }
    rep.pass = ok;
    std::ostringstream detail;
    detail << "hard side -> " << describe(c) << "; boundary:";
    for (int e : circle) detail << " " << e;
    rep.detail = detail.str();
    return rep;
}

/// Both sides of R3 as positive 3-braid tangles. Checks (a) equal object
/// multisets of the simplified sides, (b) equal homology for every planar
/// closure of the 6-point boundary.
inline MoveReport check_r3() {
    MoveReport rep;
    rep.name = "R3";
    BraidWord wa = {{0, +1}, {1, +1}, {0, +1}};
    BraidWord wb = {{1, +1}, {0, +1}, {1, +1}};
    std::vector<int> tops_a, tops_b;
    auto ta = braid_tangle(3, wa, &tops_a);
    auto tb = braid_tangle(3, wb, &tops_b);
    rep.objects_before = 16;  // two flattened 3-crossing cubes
    ScanStats sa, sb;
    auto [ca, circ_a] = scan_tangle<Int>(ta, {0, 1, 2}, &sa);
    auto [cb, circ_b] = scan_tangle<Int>(tb, {0, 1, 2}, &sb);
    rep.objects_after = ca.object_count() + cb.object_count();

    // align the two boundary circles by the roles of their edges:
    // bottoms are 1,2,3 on both sides, tops correspond positionally
    auto role = [](const std::vector<int>& tops, int e) -> int {
        if (e >= 1 && e <= 3) return e - 1;  // bottom i
        for (int i = 0; i < 3; ++i)
            if (tops[i] == e) return 3 + i;  // top i
        return -1;
    };
    std::vector<int> roles_a(circ_a.size()), roles_b(circ_b.size());
    for (std::size_t i = 0; i < circ_a.size(); ++i) roles_a[i] = role(tops_a, circ_a[i]);
    for (std::size_t i = 0; i < circ_b.size(); ++i) roles_b[i] = role(tops_b, circ_b[i]);
    int rot = -1;
    for (int r = 0; r < static_cast<int>(roles_b.size()) && rot < 0; ++r) {
        bool match = true;
        for (std::size_t i = 0; i < roles_a.size(); ++i)
            match = match && roles_a[i] == roles_b[(i + r) % roles_b.size()];
        if (match) rot = r;
    }
    bool ok = rot >= 0;

    if (ok) {
        // object multisets, side B re-indexed into side A coordinates:
        // B position j plays the role of A position (j - rot) mod 6
        auto objects = [](const FormalComplex<Int>& c, int rotate) {
            std::vector<std::tuple<int, std::vector<std::uint8_t>, int, int>> v;
            for (const auto& [h, col] : c.columns)
                for (const auto& [id, s] : col) {
                    const int b = s.boundary_size();
                    std::vector<std::uint8_t> m(b);
                    for (int i = 0; i < b; ++i)
                        m[(i - rotate + b) % b] =
                            static_cast<std::uint8_t>((s.match[i] - rotate + b) % b);
                    v.push_back({h, m, s.loops, s.qshift});
                }
            std::sort(v.begin(), v.end());
            return v;
        };
        ok = objects(ca, 0) == objects(cb, rot);
    }
    std::ostringstream detail;
    detail << "sides " << describe(ca) << " | " << describe(cb)
           << (ok ? "; multisets agree" : "; multiset mismatch");

    if (ok) {
        // close the 6 ends in every planar way and compare homology
        auto closures = verify_detail::planar_matchings(6);
        for (const auto& m : closures) {
            Smoothing cap = Smoothing::from_pairs(6, m);
            auto close = [&](const FormalComplex<Int>& c, int rotate) {
                // closure arcs attach from outside: joins reverse the cyclic
                // order, and side B is first aligned into side A positions
                std::vector<std::pair<int, int>> joins;
                for (int p = 0; p < 6; ++p) joins.push_back({p, (5 - p + rotate) % 6});
                GluingSpec spec = make_gluing_spec(6, 6, joins);
                FormalComplex<Int> whole = tensor(spec, c, FormalComplex<Int>::single(cap));
                simplify_inplace(whole);
                return scan_homology(whole, RingSpec::z());
            };
            auto ha = close(ca, 0);
            auto hb = close(cb, rot);
            if (!(ha == hb)) {
                ok = false;
                detail << "; closure mismatch";
                break;
            }
        }
        if (ok) detail << "; all " << closures.size() << " closures agree";
    }
    rep.pass = ok;
    rep.detail = detail.str();
    return rep;
}

inline std::vector<MoveReport> check_all_moves() {
    return {check_r1(), check_r2(), check_r3()};
}

}  // namespace kh
