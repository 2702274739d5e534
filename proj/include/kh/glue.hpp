#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kh {

class PlanarityError : public std::runtime_error {
  public:
    explicit PlanarityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A boundary token: (side, position) where side 0 is the accumulated
/// tangle and side 1 the piece being glued on.
struct GlueToken {
    int side = 0;
    int pos = 0;
    friend auto operator<=>(const GlueToken&, const GlueToken&) = default;
};

/// A planar arc diagram specialized to one binary gluing: place tangle A
/// (boundary size a_size, cyclic) and tangle B side by side, join the
/// listed point pairs, and expose the remaining points in `result` order.
struct GluingSpec {
    int a_size = 0;
    int b_size = 0;
    std::vector<std::pair<int, int>> joins;         // (a position, b position)
    std::vector<std::pair<int, int>> b_self_joins;  // (b position, b position)
    std::vector<GlueToken> result;                  // cyclic order of the glued boundary

    int joined_count() const {
        return static_cast<int>(joins.size()) * 2 + static_cast<int>(b_self_joins.size()) * 2;
    }
};

namespace detail {

// Splice a set of boundary circles along the given token pairs. Gluing two
// points on different circles merges them; on the same circle it splits
// it. The gluing is realizable for a disk tangle exactly when at most one
// nonempty circle remains (empty leftovers are internal faces).
inline std::optional<std::vector<GlueToken>> splice(std::vector<std::vector<GlueToken>> circles,
                                                    std::vector<std::pair<GlueToken, GlueToken>> pairs) {
    auto locate = [&](const GlueToken& t) -> std::pair<int, int> {
        for (int c = 0; c < static_cast<int>(circles.size()); ++c)
            for (int i = 0; i < static_cast<int>(circles[c].size()); ++i)
                if (circles[c][i] == t) return {c, i};
        throw std::logic_error("splice: token not found");
    };
    for (const auto& [t1, t2] : pairs) {
        auto [c1, i1] = locate(t1);
        auto [c2, i2] = locate(t2);
        if (c1 != c2) {
            // merge: walk c1 from after t1, then c2 from after t2
            std::vector<GlueToken> merged;
            const auto &A = circles[c1], &B = circles[c2];
            for (std::size_t k = 1; k < A.size(); ++k) merged.push_back(A[(i1 + k) % A.size()]);
            for (std::size_t k = 1; k < B.size(); ++k) merged.push_back(B[(i2 + k) % B.size()]);
            circles[c1] = std::move(merged);
            circles.erase(circles.begin() + c2);
        } else {
            // split into the arc after t1 up to t2 and the arc after t2 up to t1
            const auto A = circles[c1];
            std::vector<GlueToken> x, y;
            const int m = static_cast<int>(A.size());
            for (int k = (i1 + 1) % m; k != i2; k = (k + 1) % m) x.push_back(A[k]);
            for (int k = (i2 + 1) % m; k != i1; k = (k + 1) % m) y.push_back(A[k]);
            circles[c1] = std::move(x);
            circles.push_back(std::move(y));
        }
    }
    std::vector<GlueToken> out;
    bool found = false;
    for (auto& c : circles) {
        if (c.empty()) continue;
        if (found) return std::nullopt;  // two boundary circles: not a disk tangle
        out = std::move(c);
        found = true;
    }
    return out;
}

}  // namespace detail

/// Build a GluingSpec from the two boundary sizes and the join lists,
/// computing the resulting cyclic boundary order. Throws PlanarityError
/// if the gluing leaves more than one nonempty boundary circle.
inline GluingSpec make_gluing_spec(int a_size, int b_size,
                                   std::vector<std::pair<int, int>> joins,
                                   std::vector<std::pair<int, int>> b_self_joins = {}) {
    GluingSpec spec;
    spec.a_size = a_size;
    spec.b_size = b_size;
    spec.joins = std::move(joins);
    spec.b_self_joins = std::move(b_self_joins);

    std::vector<std::vector<GlueToken>> circles;
    std::vector<GlueToken> a_circle, b_circle;
    for (int i = 0; i < a_size; ++i) a_circle.push_back({0, i});
    for (int i = 0; i < b_size; ++i) b_circle.push_back({1, i});
    std::vector<std::pair<GlueToken, GlueToken>> pairs;
    for (auto [a, b] : spec.joins) pairs.push_back({{0, a}, {1, b}});
    for (auto [b1, b2] : spec.b_self_joins) pairs.push_back({{1, b1}, {1, b2}});

    if (!a_circle.empty()) circles.push_back(std::move(a_circle));
    if (!b_circle.empty()) circles.push_back(std::move(b_circle));
    if (pairs.empty() && circles.size() == 2) {
        // disjoint side-by-side placement: B's arc follows A's
        spec.result = circles[0];
        for (auto& t : circles[1]) spec.result.push_back(t);
        return spec;
    }
    auto res = detail::splice(std::move(circles), std::move(pairs));
    if (!res) throw PlanarityError("gluing does not yield a disk tangle");
    spec.result = std::move(*res);
    return spec;
}

/// Like make_gluing_spec but reports failure instead of throwing.
inline std::optional<GluingSpec> try_gluing_spec(int a_size, int b_size,
                                                 std::vector<std::pair<int, int>> joins,
                                                 std::vector<std::pair<int, int>> b_self_joins = {}) {
    try {
        return make_gluing_spec(a_size, b_size, std::move(joins), std::move(b_self_joins));
    } catch (const PlanarityError&) {
        return std::nullopt;
    }
}

}  // namespace kh
