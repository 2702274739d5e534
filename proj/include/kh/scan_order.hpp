#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "kh/glue.hpp"
#include "kh/pd.hpp"

namespace kh {

/// How one crossing attaches to the partial tangle: which islands it
/// touches, how those islands are arranged side by side (insertions), and
/// the final gluing spec. Island boundaries are circles of open edge ids.
struct CrossingGluePlan {
    std::vector<int> touched;                       // island indices, ascending
    std::vector<std::pair<int, int>> insertions;    // (gap, rotation) per touched[1..]
    GluingSpec spec;                                // merged boundary x crossing legs
    std::vector<int> merged_circle;                 // edge ids of the merged A boundary
    std::vector<int> new_circle;                    // edge ids of the glued boundary
};

namespace detail {

inline std::vector<int> insert_circle(const std::vector<int>& base, const std::vector<int>& add,
                                      int gap, int rot) {
    std::vector<int> out;
    out.reserve(base.size() + add.size());
    for (int i = 0; i <= gap; ++i) out.push_back(base[i]);
    for (std::size_t k = 0; k < add.size(); ++k) out.push_back(add[(rot + k) % add.size()]);
    for (std::size_t i = gap + 1; i < base.size(); ++i) out.push_back(base[i]);
    return out;
}

}  // namespace detail

/// Work out how to glue `legs` (a crossing's edge labels, counterclockwise)
/// onto the islands of a partial tangle. Returns nullopt when no planar
/// side-by-side arrangement exists.
inline std::optional<CrossingGluePlan> plan_crossing_glue(
    const std::vector<std::vector<int>>& islands, const std::array<int, 4>& legs) {
    CrossingGluePlan plan;
    std::vector<std::pair<int, int>> self_joins;
    std::vector<int> open_legs;
    for (int p = 0; p < 4; ++p) {
        bool paired = false;
        for (int q = 0; q < p; ++q)
            if (legs[q] == legs[p]) {
                self_joins.push_back({q, p});
                paired = true;
            }
        if (!paired) open_legs.push_back(p);
    }
    // a repeated edge label pairs exactly two legs of this crossing
    for (auto [q, p] : self_joins)
        open_legs.erase(std::remove(open_legs.begin(), open_legs.end(), q), open_legs.end());

    struct Match {
        int island, pos, leg;
    };
    std::vector<Match> matches;
    for (int leg : open_legs)
        for (int k = 0; k < static_cast<int>(islands.size()); ++k)
            for (int i = 0; i < static_cast<int>(islands[k].size()); ++i)
                if (islands[k][i] == legs[leg]) matches.push_back({k, i, leg});
    std::set<int> touched_set;
    for (const auto& m : matches) touched_set.insert(m.island);
    plan.touched.assign(touched_set.begin(), touched_set.end());

    if (plan.touched.empty()) {
        auto spec = try_gluing_spec(0, 4, {}, self_joins);
        if (!spec) return std::nullopt;
        plan.spec = std::move(*spec);
        for (const auto& t : plan.spec.result) plan.new_circle.push_back(legs[t.pos]);
        return plan;
    }

    // islands after the first may be inserted at any gap and rotation;
    // search the small space of placements for one that glues planarly
    std::vector<int> merged = islands[plan.touched[0]];

    std::function<bool(std::size_t)> search = [&](std::size_t k) -> bool {
        if (k == plan.touched.size()) {
            // locate every match directly in the merged circle: edge ids
            // are unique across open boundaries
            std::vector<std::pair<int, int>> joins;
            for (const auto& m : matches) {
                int pos = -1;
                for (int i = 0; i < static_cast<int>(merged.size()); ++i)
                    if (merged[i] == legs[m.leg]) {
                        pos = i;
                        break;
                    }
                if (pos < 0) return false;
                joins.push_back({pos, m.leg});
            }
            auto spec = try_gluing_spec(static_cast<int>(merged.size()), 4, joins, self_joins);
            if (!spec) return false;
            plan.spec = std::move(*spec);
            plan.merged_circle = merged;
            plan.new_circle.clear();
            for (const auto& t : plan.spec.result)
                plan.new_circle.push_back(t.side == 0 ? merged[t.pos] : legs[t.pos]);
            return true;
        }
        const auto& isl = islands[plan.touched[k]];
        std::vector<int> saved = merged;
        for (int gap = 0; gap < static_cast<int>(merged.size()); ++gap)
            for (int rot = 0; rot < static_cast<int>(isl.size()); ++rot) {
                merged = detail::insert_circle(saved, isl, gap, rot);
                plan.insertions.push_back({gap, rot});
                if (search(k + 1)) return true;
                plan.insertions.pop_back();
                merged = saved;
            }
        return false;
    };
    if (!search(1)) return std::nullopt;
    return plan;
}

/// A scan order: a permutation of the crossing indices plus the open
/// boundary size after each prefix.
struct ScanOrder {
    std::vector<int> perm;
    std::vector<int> width_profile;
    int max_width() const {
        int w = 0;
        for (int x : width_profile) w = std::max(w, x);
        return w;
    }
};

enum class OrderStrategy { Given, Greedy };

namespace detail {

inline std::vector<int> width_profile_for(const Diagram& d, const std::vector<int>& perm) {
    // an edge is open while exactly one of its two endpoint crossings has
    // been processed
    std::map<int, std::vector<int>> edge_crossings;
    for (int c = 0; c < d.size(); ++c)
        for (int e : d.crossings[c].edges) edge_crossings[e].push_back(c);
    std::vector<bool> done(d.size(), false);
    std::vector<int> profile;
    for (int c : perm) {
        done[c] = true;
        int open = 0;
        for (const auto& [e, cs] : edge_crossings) {
            int k = 0;
            for (int x : cs) k += done[x];
            if (k == 1) ++open;
        }
        profile.push_back(open);
    }
    return profile;
}

}  // namespace detail

/// Choose the crossing processing order. `Given` keeps the input order;
/// `Greedy` repeatedly picks the crossing minimizing the resulting
/// boundary size, among planar-attachable candidates, ties broken by
/// lowest index.
inline ScanOrder order_crossings(const Diagram& d, OrderStrategy strategy) {
    ScanOrder order;
    const int n = d.size();
    if (strategy == OrderStrategy::Given) {
        order.perm.resize(n);
        for (int i = 0; i < n; ++i) order.perm[i] = i;
        order.width_profile = detail::width_profile_for(d, order.perm);
        return order;
    }

    std::map<int, std::vector<int>> edge_crossings;
    for (int c = 0; c < n; ++c)
        for (int e : d.crossings[c].edges) edge_crossings[e].push_back(c);
    std::vector<bool> done(n, false);
    std::vector<std::vector<int>> islands;
    int open_now = 0;
    bool sim_alive = true;

    for (int step = 0; step < n; ++step) {
        int best = -1, best_width = -1;
        std::optional<CrossingGluePlan> best_plan;
        for (int c = 0; c < n; ++c) {
            if (done[c]) continue;
            // resulting open count if c is added
            int delta = 0;
            for (int e : d.crossings[c].edges) {
                const auto& cs = edge_crossings[e];
                if (cs.size() == 2 && cs[0] == cs[1]) continue;  // kink edge, never open
                int k = 0;
                for (int x : cs) k += done[x] || x == c;
                delta += k == 1 ? 1 : -1;
            }
            const int width = open_now + delta;
            std::optional<CrossingGluePlan> plan;
            if (sim_alive) {
                plan = plan_crossing_glue(islands, d.crossings[c].edges);
                if (!plan) continue;  // prefer planar-attachable candidates
            }
            if (best < 0 || width < best_width) {
                best = c;
                best_width = width;
                best_plan = std::move(plan);
            }
        }
        if (best < 0) {
            // nothing attaches planarly; fall back to pure width counting
            sim_alive = false;
            for (int c = 0; c < n; ++c) {
                if (done[c]) continue;
                int delta = 0;
                for (int e : d.crossings[c].edges) {
                    const auto& cs = edge_crossings[e];
                    if (cs.size() == 2 && cs[0] == cs[1]) continue;
                    int k = 0;
                    for (int x : cs) k += done[x] || x == c;
                    delta += k == 1 ? 1 : -1;
                }
                if (best < 0 || open_now + delta < best_width) {
                    best = c;
                    best_width = open_now + delta;
                }
            }
        }
        done[best] = true;
        order.perm.push_back(best);
        order.width_profile.push_back(best_width);
        open_now = best_width;
        if (sim_alive && best_plan) {
            std::vector<std::vector<int>> next;
            for (int k = 0; k < static_cast<int>(islands.size()); ++k)
                if (!std::count(best_plan->touched.begin(), best_plan->touched.end(), k))
                    next.push_back(std::move(islands[k]));
            if (!best_plan->new_circle.empty()) next.push_back(best_plan->new_circle);
            islands = std::move(next);
        }
    }
    return order;
}

}  // namespace kh
