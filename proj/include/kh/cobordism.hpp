#pragma once

#include <algorithm>
#include <cassert>
#include <compare>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kh/glue.hpp"
#include "kh/rings.hpp"
#include "kh/smoothing.hpp"

namespace kh {

/// The boundary curves shared by a pair of smoothings: gluing the two
/// matchings along the boundary points yields closed curves (one per
/// connected component of the union graph), and every closed loop of
/// either smoothing contributes one degenerate curve of its own.
///
/// Cycle ids are laid out as [boundary orbits][source loops][target loops],
/// orbits ordered by their smallest point.
struct CycleSpace {
    int n_orbits = 0;
    int src_loops = 0;
    int tgt_loops = 0;
    std::vector<int> orbit_of;  // boundary point -> orbit id

    CycleSpace() = default;
    CycleSpace(const Smoothing& s, const Smoothing& t) {
        if (s.boundary_size() != t.boundary_size())
            throw std::invalid_argument("CycleSpace: boundary size mismatch");
        const int b = s.boundary_size();
        std::vector<int> parent(b);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (int i = 0; i < b; ++i) {
            parent[find(i)] = find(s.match[i]);
            parent[find(i)] = find(t.match[i]);
        }
        orbit_of.assign(b, -1);
        for (int i = 0; i < b; ++i) {
            int r = find(i);
            if (orbit_of[r] < 0) orbit_of[r] = n_orbits++;
        }
        for (int i = 0; i < b; ++i) orbit_of[i] = orbit_of[find(i)];
        src_loops = s.loops;
        tgt_loops = t.loops;
    }

    int total() const { return n_orbits + src_loops + tgt_loops; }
    int src_loop_id(int i) const { return n_orbits + i; }
    int tgt_loop_id(int i) const { return n_orbits + src_loops + i; }
};

/// One connected piece of a normal-form cobordism: a genus-0 surface
/// bounding the listed cycles, carrying at most one dot.
struct CobComponent {
    std::vector<std::uint8_t> cycles;  // sorted ascending
    bool dot = false;
    friend auto operator<=>(const CobComponent&, const CobComponent&) = default;
};

/// Normal-form dotted cobordism between two fixed smoothings, identified
/// by its partition of the cycle space into components. Closed components
/// never appear (they are evaluated away during reduction).
struct CobKey {
    std::vector<CobComponent> comps;  // sorted by smallest cycle
    friend auto operator<=>(const CobKey&, const CobKey&) = default;

    std::string str() const {
        std::ostringstream os;
        for (const auto& c : comps) {
            os << "[";
            for (std::size_t i = 0; i < c.cycles.size(); ++i)
                os << (i ? " " : "") << int(c.cycles[i]);
            if (c.dot) os << " *";
            os << "]";
        }
        if (comps.empty()) os << "[]";
        return os.str();
    }
};

namespace detail {

inline void normalize_key(CobKey& key) {
    for (auto& c : key.comps) std::sort(c.cycles.begin(), c.cycles.end());
    std::sort(key.comps.begin(), key.comps.end());
}

// Loop cycles are labeled by construction order (source loops first, then
// target loops), so the canonical form only sorts cycles and components.
// Identifying keys up to loop permutations would wrongly cancel morphisms
// like "dot on tube 1 minus dot on tube 2".
inline CobKey canonicalize_key(CobKey key, const CycleSpace& space) {
    (void)space;
    normalize_key(key);
    return key;
}

// Union-find assembler for gluing components of two cobordisms. Tracks
// Euler characteristic and dot counts; arc gluings lower chi by one,
// circle gluings leave it unchanged.
class ComponentAssembler {
  public:
    void add_node(int chi, int dots) {
        parent_.push_back(static_cast<int>(parent_.size()));
        chi_.push_back(chi);
        dots_.push_back(dots);
    }
    int find(int x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void glue(int a, int b, bool arc) {
        int ra = find(a), rb = find(b);
        if (ra != rb) {
            parent_[rb] = ra;
            chi_[ra] += chi_[rb];
            dots_[ra] += dots_[rb];
        }
        if (arc) chi_[find(a)] -= 1;
    }

    struct Result {
        bool zero = false;
        int log2_scalar = 0;
        std::vector<CobComponent> comps;
    };

    // anchors[i] = node whose merged component carries new cycle i
    Result finish(const std::vector<int>& anchors) {
        Result out;
        std::map<int, std::vector<std::uint8_t>> cycles_of_root;
        for (int i = 0; i < static_cast<int>(anchors.size()); ++i)
            cycles_of_root[find(anchors[i])].push_back(static_cast<std::uint8_t>(i));
        std::vector<bool> seen(parent_.size(), false);
        for (int n = 0; n < static_cast<int>(parent_.size()); ++n) {
            int r = find(n);
            if (seen[r]) continue;
            seen[r] = true;
            auto it = cycles_of_root.find(r);
            const int c = it == cycles_of_root.end() ? 0 : static_cast<int>(it->second.size());
            const int rest = 2 - chi_[r] - c;
            if (rest < 0 || rest % 2) throw std::logic_error("assembler: bad Euler characteristic");
            const int genus = rest / 2;
            int d = dots_[r] + genus;
            out.log2_scalar += genus;
            if (c == 0) {
                // closed surface: dotless sphere dies, one dot evaluates to 1
                if (d != 1) {
                    out.zero = true;
                    return out;
                }
            } else {
                if (d >= 2) {
                    out.zero = true;
                    return out;
                }
                out.comps.push_back({it->second, d == 1});
            }
        }
        return out;
    }

  private:
    std::vector<int> parent_, chi_, dots_;
};

}  // namespace detail

/// Identity cobordism key on a smoothing: one dotless disk per arc and one
/// annulus joining each source loop to its target twin.
inline CobKey identity_key(const Smoothing& s) {
    CycleSpace space(s, s);
    CobKey key;
    for (int i = 0; i < space.n_orbits; ++i)
        key.comps.push_back({{static_cast<std::uint8_t>(i)}, false});
    for (int i = 0; i < s.loops; ++i)
        key.comps.push_back({{static_cast<std::uint8_t>(space.src_loop_id(i)),
                              static_cast<std::uint8_t>(space.tgt_loop_id(i))},
                             false});
    return detail::canonicalize_key(std::move(key), space);
}

/// deg = sum over components of (2 - #cycles) - 2 #dots - b/2.
inline int degree(const CobKey& key, int boundary_size) {
    int d = 0;
    for (const auto& c : key.comps) {
        d += 2 - static_cast<int>(c.cycles.size());
        if (c.dot) d -= 2;
    }
    return d - boundary_size / 2;
}

/// Exact linear combination of normal-form cobordisms with a common
/// source and target.
template <class R>
struct Morphism {
    Smoothing src, tgt;
    std::map<CobKey, R> terms;

    Morphism() = default;
    Morphism(Smoothing s, Smoothing t) : src(std::move(s)), tgt(std::move(t)) {}

    bool is_zero() const { return terms.empty(); }

    void add_term(const CobKey& key, const R& coeff) {
        if (RingTraits<R>::is_zero(coeff)) return;
        auto it = terms.find(key);
        if (it == terms.end()) {
            terms.emplace(key, coeff);
        } else {
            it->second += coeff;
            if (RingTraits<R>::is_zero(it->second)) terms.erase(it);
        }
    }

    Morphism& operator+=(const Morphism& o) {
        for (const auto& [k, c] : o.terms) add_term(k, c);
        return *this;
    }
    Morphism operator-() const {
        Morphism m(src, tgt);
        for (const auto& [k, c] : terms) m.terms.emplace(k, -c);
        return m;
    }
    Morphism scaled(const R& a) const {
        Morphism m(src, tgt);
        for (const auto& [k, c] : terms) m.add_term(k, a * c);
        return m;
    }
    friend bool operator==(const Morphism& a, const Morphism& b) {
        return a.src == b.src && a.tgt == b.tgt && a.terms == b.terms;
    }

    static Morphism identity(const Smoothing& s, R coeff = R(1)) {
        Morphism m(s, s);
        m.add_term(identity_key(s), coeff);
        return m;
    }

    std::string str() const {
        std::ostringstream os;
        os << src.str() << " -> " << tgt.str() << " :";
        if (terms.empty()) os << " 0";
        for (const auto& [k, c] : terms) os << " " << RingTraits<R>::to_string(c) << "*" << k.str();
        return os.str();
    }
};

/// Detect +-unit * identity; returns the inverse scalar when found. This
/// is the only invertibility the elimination step relies on.
template <class R>
std::optional<R> is_unit(const Morphism<R>& m) {
    if (m.terms.size() != 1) return std::nullopt;
    if (!(m.src == m.tgt) || m.src.loops != 0) return std::nullopt;
    const auto& [key, coeff] = *m.terms.begin();
    if (!RingTraits<R>::is_unit(coeff)) return std::nullopt;
    if (key != identity_key(m.src)) return std::nullopt;
    return RingTraits<R>::inverse(coeff);
}

/// Raw surface description used when building morphisms by hand: cycles
/// grouped into components that may carry genus and several dots.
struct RawComponent {
    std::vector<int> cycles;
    int genus = 0;
    int dots = 0;
};

/// Normal-form reduction: a genus-g component becomes 2^g copies of the
/// same component with g extra dots; two dots kill a component; closed
/// components evaluate to 0 or 1.
template <class R>
Morphism<R> reduce_raw(const Smoothing& src, const Smoothing& tgt,
                       const std::vector<RawComponent>& raw, const R& scalar) {
    CycleSpace space(src, tgt);
    std::vector<bool> covered(space.total(), false);
    Morphism<R> m(src, tgt);
    CobKey key;
    Int factor = 1;
    for (const auto& rc : raw) {
        for (int cyc : rc.cycles) {
            if (cyc < 0 || cyc >= space.total() || covered[cyc])
                throw std::invalid_argument("reduce_raw: bad cycle partition");
            covered[cyc] = true;
        }
        int d = rc.dots + rc.genus;
        factor <<= rc.genus;
        if (rc.cycles.empty()) {
            if (d != 1) return m;  // zero morphism
        } else {
            if (d >= 2) return m;
            CobComponent comp;
            for (int cyc : rc.cycles) comp.cycles.push_back(static_cast<std::uint8_t>(cyc));
            comp.dot = d == 1;
            key.comps.push_back(std::move(comp));
        }
    }
    for (bool v : covered)
        if (!v) throw std::invalid_argument("reduce_raw: partition does not cover all cycles");
    m.add_term(detail::canonicalize_key(std::move(key), space), scalar * R(static_cast<long>(factor)));
    return m;
}

/// Vertical composition g after f, gluing along the middle smoothing and
/// reducing to normal form.
template <class R>
Morphism<R> compose(const Morphism<R>& g, const Morphism<R>& f) {
    if (!(f.tgt == g.src)) throw std::invalid_argument("compose: middle smoothing mismatch");
    Morphism<R> out(f.src, g.tgt);
    if (f.is_zero() || g.is_zero()) return out;

    const Smoothing& mid = f.tgt;
    const bool f_id_shape = f.src.same_shape(f.tgt);
    const bool g_id_shape = g.src.same_shape(g.tgt);
    const CobKey f_id = f_id_shape ? identity_key(f.src) : CobKey{};
    const CobKey g_id = g_id_shape ? identity_key(g.src) : CobKey{};

    CycleSpace cf(f.src, f.tgt), cg(g.src, g.tgt), cn(f.src, g.tgt);

    for (const auto& [fk, fc] : f.terms) {
        const bool f_is_id = f_id_shape && fk == f_id;
        for (const auto& [gk, gc] : g.terms) {
            if (f_is_id) {
                out.add_term(gk, fc * gc);
                continue;
            }
            if (g_id_shape && gk == g_id) {
                out.add_term(fk, fc * gc);
                continue;
            }
            // nodes: components of f, then components of g
            detail::ComponentAssembler as;
            std::vector<int> f_comp_of(cf.total()), g_comp_of(cg.total());
            for (int ci = 0; ci < static_cast<int>(fk.comps.size()); ++ci) {
                const auto& comp = fk.comps[ci];
                as.add_node(2 - static_cast<int>(comp.cycles.size()), comp.dot ? 1 : 0);
                for (auto cyc : comp.cycles) f_comp_of[cyc] = ci;
            }
            const int nf = static_cast<int>(fk.comps.size());
            for (int ci = 0; ci < static_cast<int>(gk.comps.size()); ++ci) {
                const auto& comp = gk.comps[ci];
                as.add_node(2 - static_cast<int>(comp.cycles.size()), comp.dot ? 1 : 0);
                for (auto cyc : comp.cycles) g_comp_of[cyc] = nf + ci;
            }
            // glue along the arcs and loops of the middle smoothing
            for (int p = 0; p < mid.boundary_size(); ++p)
                if (static_cast<int>(mid.match[p]) > p)
                    as.glue(f_comp_of[cf.orbit_of[p]], g_comp_of[cg.orbit_of[p]], true);
            for (int i = 0; i < mid.loops; ++i)
                as.glue(f_comp_of[cf.tgt_loop_id(i)], g_comp_of[cg.src_loop_id(i)], false);
            // anchor each cycle of the composite in its merged component
            std::vector<int> anchors(cn.total());
            {
                std::vector<int> rep(cn.n_orbits, -1);
                for (int p = 0; p < f.src.boundary_size(); ++p)
                    if (rep[cn.orbit_of[p]] < 0) rep[cn.orbit_of[p]] = p;
                for (int o = 0; o < cn.n_orbits; ++o) anchors[o] = f_comp_of[cf.orbit_of[rep[o]]];
                for (int i = 0; i < cn.src_loops; ++i)
                    anchors[cn.src_loop_id(i)] = f_comp_of[cf.src_loop_id(i)];
                for (int i = 0; i < cn.tgt_loops; ++i)
                    anchors[cn.tgt_loop_id(i)] = g_comp_of[cg.tgt_loop_id(i)];
            }
            auto res = as.finish(anchors);
            if (res.zero) continue;
            CobKey key{std::move(res.comps)};
            R coeff = fc * gc * R(1L << res.log2_scalar);
            out.add_term(detail::canonicalize_key(std::move(key), cn), coeff);
        }
    }
    return out;
}

/// Smoothing-level horizontal composition along a gluing spec, together
/// with the bookkeeping needed to glue cobordisms over it.
struct SpliceTrace {
    Smoothing result;
    std::vector<GlueToken> closed_reps;  // one representative token per closed chain
};

inline SpliceTrace hcompose_smoothing(const GluingSpec& spec, const Smoothing& sa,
                                      const Smoothing& sb) {
    if (sa.boundary_size() != spec.a_size || sb.boundary_size() != spec.b_size)
        throw std::invalid_argument("hcompose: boundary size mismatch with spec");
    std::map<GlueToken, GlueToken> joined;
    for (auto [a, b] : spec.joins) {
        joined[{0, a}] = {1, b};
        joined[{1, b}] = {0, a};
    }
    for (auto [b1, b2] : spec.b_self_joins) {
        joined[{1, b1}] = {1, b2};
        joined[{1, b2}] = {1, b1};
    }
    std::map<GlueToken, int> result_index;
    for (int i = 0; i < static_cast<int>(spec.result.size()); ++i)
        result_index[spec.result[i]] = i;

    SpliceTrace tr;
    tr.result.match.assign(spec.result.size(), 0);
    tr.result.qshift = sa.qshift + sb.qshift;
    auto arc_partner = [&](GlueToken t) -> GlueToken {
        return t.side == 0 ? GlueToken{0, sa.match[t.pos]} : GlueToken{1, sb.match[t.pos]};
    };

    std::set<GlueToken> visited;
    for (int ri = 0; ri < static_cast<int>(spec.result.size()); ++ri) {
        GlueToken t = spec.result[ri];
        if (visited.count(t)) continue;
        GlueToken cur = t;
        for (;;) {
            visited.insert(cur);
            GlueToken nt = arc_partner(cur);
            visited.insert(nt);
            auto it = joined.find(nt);
            if (it == joined.end()) {
                int rj = result_index.at(nt);
                tr.result.match[ri] = static_cast<std::uint8_t>(rj);
                tr.result.match[rj] = static_cast<std::uint8_t>(ri);
                break;
            }
            cur = it->second;
        }
    }
    for (const auto& [t, partner] : joined) {
        if (visited.count(t)) continue;
        GlueToken cur = t, rep = t;
        do {
            visited.insert(cur);
            GlueToken nt = arc_partner(cur);
            visited.insert(nt);
            rep = std::min({rep, cur, nt});
            cur = joined.at(nt);
        } while (!(cur == t));
        tr.closed_reps.push_back(rep);
    }
    std::sort(tr.closed_reps.begin(), tr.closed_reps.end());
    tr.result.loops = sa.loops + sb.loops + static_cast<int>(tr.closed_reps.size());
    return tr;
}

/// Horizontal (planar) composition of morphisms: side-by-side placement
/// with the spec's identifications; cobordism components merge along the
/// glued vertical boundary lines, then everything is reduced.
template <class R>
Morphism<R> hcompose_morphism(const GluingSpec& spec, const Morphism<R>& ma,
                              const Morphism<R>& mb) {
    SpliceTrace tr_src = hcompose_smoothing(spec, ma.src, mb.src);
    SpliceTrace tr_tgt = hcompose_smoothing(spec, ma.tgt, mb.tgt);
    Morphism<R> out(tr_src.result, tr_tgt.result);
    if (ma.is_zero() || mb.is_zero()) return out;

    CycleSpace ca(ma.src, ma.tgt), cb(mb.src, mb.tgt), cn(tr_src.result, tr_tgt.result);

    for (const auto& [ka, caf] : ma.terms) {
        for (const auto& [kb, cbf] : mb.terms) {
            detail::ComponentAssembler as;
            std::vector<int> a_comp_of(std::max(ca.total(), 1)), b_comp_of(std::max(cb.total(), 1));
            for (int ci = 0; ci < static_cast<int>(ka.comps.size()); ++ci) {
                const auto& comp = ka.comps[ci];
                as.add_node(2 - static_cast<int>(comp.cycles.size()), comp.dot ? 1 : 0);
                for (auto cyc : comp.cycles) a_comp_of[cyc] = ci;
            }
            const int na = static_cast<int>(ka.comps.size());
            for (int ci = 0; ci < static_cast<int>(kb.comps.size()); ++ci) {
                const auto& comp = kb.comps[ci];
                as.add_node(2 - static_cast<int>(comp.cycles.size()), comp.dot ? 1 : 0);
                for (auto cyc : comp.cycles) b_comp_of[cyc] = na + ci;
            }
            auto node_of = [&](GlueToken t) {
                return t.side == 0 ? a_comp_of[ca.orbit_of[t.pos]]
                                   : b_comp_of[cb.orbit_of[t.pos]];
            };
            for (auto [a, b] : spec.joins) as.glue(node_of({0, a}), node_of({1, b}), true);
            for (auto [b1, b2] : spec.b_self_joins) as.glue(node_of({1, b1}), node_of({1, b2}), true);

            std::vector<int> anchors(cn.total());
            {
                std::vector<int> rep(cn.n_orbits, -1);
                for (int p = 0; p < tr_src.result.boundary_size(); ++p)
                    if (rep[cn.orbit_of[p]] < 0) rep[cn.orbit_of[p]] = p;
                for (int o = 0; o < cn.n_orbits; ++o) anchors[o] = node_of(spec.result[rep[o]]);
                int i = 0;
                for (int k = 0; k < ma.src.loops; ++k, ++i)
                    anchors[cn.src_loop_id(i)] = a_comp_of[ca.src_loop_id(k)];
                for (int k = 0; k < mb.src.loops; ++k, ++i)
                    anchors[cn.src_loop_id(i)] = b_comp_of[cb.src_loop_id(k)];
                for (const auto& t : tr_src.closed_reps) anchors[cn.src_loop_id(i++)] = node_of(t);
                i = 0;
                for (int k = 0; k < ma.tgt.loops; ++k, ++i)
                    anchors[cn.tgt_loop_id(i)] = a_comp_of[ca.tgt_loop_id(k)];
                for (int k = 0; k < mb.tgt.loops; ++k, ++i)
                    anchors[cn.tgt_loop_id(i)] = b_comp_of[cb.tgt_loop_id(k)];
                for (const auto& t : tr_tgt.closed_reps) anchors[cn.tgt_loop_id(i++)] = node_of(t);
            }
            auto res = as.finish(anchors);
            if (res.zero) continue;
            CobKey key{std::move(res.comps)};
            R coeff = caf * cbf * R(1L << res.log2_scalar);
            out.add_term(detail::canonicalize_key(std::move(key), cn), coeff);
        }
    }
    return out;
}

}  // namespace kh
