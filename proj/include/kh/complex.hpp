#pragma once

#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "kh/cobordism.hpp"
#include "kh/laurent.hpp"

namespace kh {

/// Sparse matrix of morphisms with row/column adjacency indexes. Entries
/// are keyed (target row, source column); iteration is row-major.
template <class R>
class DiffMatrix {
  public:
    using Entry = std::pair<std::pair<int, int>, Morphism<R>>;

    const std::map<std::pair<int, int>, Morphism<R>>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    const Morphism<R>* get(int row, int col) const {
        auto it = entries_.find({row, col});
        return it == entries_.end() ? nullptr : &it->second;
    }
    void set(int row, int col, Morphism<R> m) {
        if (m.is_zero()) {
            erase(row, col);
            return;
        }
        auto [it, inserted] = entries_.insert_or_assign({row, col}, std::move(m));
        (void)it;
        if (inserted) {
            rows_of_col_[col].insert(row);
            cols_of_row_[row].insert(col);
        }
    }
    void add(int row, int col, const Morphism<R>& m) {
        if (m.is_zero()) return;
        auto it = entries_.find({row, col});
        if (it == entries_.end()) {
            set(row, col, m);
        } else {
            it->second += m;
            if (it->second.is_zero()) erase(row, col);
        }
    }
    void erase(int row, int col) {
        auto it = entries_.find({row, col});
        if (it == entries_.end()) return;
        entries_.erase(it);
        unindex(row, col);
    }
    void erase_row(int row) {
        auto it = cols_of_row_.find(row);
        if (it == cols_of_row_.end()) return;
        for (int col : it->second) {
            entries_.erase({row, col});
            auto& rs = rows_of_col_[col];
            rs.erase(row);
            if (rs.empty()) rows_of_col_.erase(col);
        }
        cols_of_row_.erase(it);
    }
    void erase_col(int col) {
        auto it = rows_of_col_.find(col);
        if (it == rows_of_col_.end()) return;
        for (int row : it->second) {
            entries_.erase({row, col});
            auto& cs = cols_of_row_[row];
            cs.erase(col);
            if (cs.empty()) cols_of_row_.erase(row);
        }
        rows_of_col_.erase(it);
    }
    std::vector<int> rows_of_col(int col) const {
        auto it = rows_of_col_.find(col);
        return it == rows_of_col_.end() ? std::vector<int>{}
                                        : std::vector<int>(it->second.begin(), it->second.end());
    }
    std::vector<int> cols_of_row(int row) const {
        auto it = cols_of_row_.find(row);
        return it == cols_of_row_.end() ? std::vector<int>{}
                                        : std::vector<int>(it->second.begin(), it->second.end());
    }

  private:
    void unindex(int row, int col) {
        auto r = rows_of_col_.find(col);
        if (r != rows_of_col_.end()) {
            r->second.erase(row);
            if (r->second.empty()) rows_of_col_.erase(r);
        }
        auto c = cols_of_row_.find(row);
        if (c != cols_of_row_.end()) {
            c->second.erase(col);
            if (c->second.empty()) cols_of_row_.erase(c);
        }
    }

    std::map<std::pair<int, int>, Morphism<R>> entries_;
    std::map<int, std::set<int>> rows_of_col_;
    std::map<int, std::set<int>> cols_of_row_;
};

/// A formal complex: columns of shifted smoothings indexed by height,
/// with morphism matrices as differentials. Object ids are stable within
/// a complex and never reused.
template <class R>
struct FormalComplex {
    std::map<int, std::map<int, Smoothing>> columns;  // height -> (id -> object)
    std::map<int, DiffMatrix<R>> diffs;               // height h -> d : col h -> col h+1
    int next_id = 0;

    int add_object(int height, Smoothing s) {
        int id = next_id++;
        columns[height].emplace(id, std::move(s));
        return id;
    }
    int object_count() const {
        int n = 0;
        for (const auto& [h, col] : columns) n += static_cast<int>(col.size());
        return n;
    }
    void drop_empty_columns() {
        for (auto it = columns.begin(); it != columns.end();)
            it = it->second.empty() ? columns.erase(it) : std::next(it);
        for (auto it = diffs.begin(); it != diffs.end();)
            it = it->second.empty() ? diffs.erase(it) : std::next(it);
    }

    static FormalComplex unit() {
        FormalComplex c;
        c.add_object(0, Smoothing::empty());
        return c;
    }
    static FormalComplex single(Smoothing s, int height = 0) {
        FormalComplex c;
        c.add_object(height, std::move(s));
        return c;
    }
};

template <class R>
int object_count(const FormalComplex<R>& c) {
    return c.object_count();
}

/// Graded Euler characteristic: sum over objects of
/// (-1)^height q^shift (q + 1/q)^loops. Invariant under delooping and
/// elimination, and equal to the Kauffman bracket for scanned diagrams.
template <class R>
Laurent euler_characteristic(const FormalComplex<R>& c) {
    Laurent total;
    for (const auto& [h, col] : c.columns) {
        const bool neg = ((h % 2) + 2) % 2 == 1;
        for (const auto& [id, s] : col) {
            Laurent term = Laurent::monomial(s.qshift) * Laurent::loop_value().pow(s.loops);
            if (neg)
                total -= term;
            else
                total += term;
        }
    }
    return total;
}

template <class R>
void shift_complex(FormalComplex<R>& c, int dh, int dq) {
    if (dq != 0)
        for (auto& [h, col] : c.columns)
            for (auto& [id, s] : col) s.qshift += dq;
    if (dh != 0) {
        std::map<int, std::map<int, Smoothing>> cols;
        for (auto& [h, col] : c.columns) cols.emplace(h + dh, std::move(col));
        c.columns = std::move(cols);
        std::map<int, DiffMatrix<R>> dd;
        for (auto& [h, m] : c.diffs) dd.emplace(h + dh, std::move(m));
        c.diffs = std::move(dd);
    }
}

struct ValidationReport {
    bool ok = true;
    std::string message;
};

/// Check dimension conformity, degree homogeneity (deg e = q_src - q_tgt)
/// and d.d = 0. Returns the first violation found.
template <class R>
ValidationReport validate(const FormalComplex<R>& c) {
    auto fail = [](std::string msg) { return ValidationReport{false, std::move(msg)}; };
    for (const auto& [h, mat] : c.diffs) {
        auto src_col = c.columns.find(h);
        auto tgt_col = c.columns.find(h + 1);
        for (const auto& [rc, m] : mat.entries()) {
            auto [row, col] = rc;
            if (src_col == c.columns.end() || !src_col->second.count(col))
                return fail("entry with missing source object at height " + std::to_string(h));
            if (tgt_col == c.columns.end() || !tgt_col->second.count(row))
                return fail("entry with missing target object at height " + std::to_string(h + 1));
            if (!(m.src == src_col->second.at(col)) || !(m.tgt == tgt_col->second.at(row)))
                return fail("entry endpoints disagree with column objects at height " +
                            std::to_string(h));
            const int want = m.src.qshift - m.tgt.qshift;
            for (const auto& [key, coeff] : m.terms)
                if (degree(key, m.src.boundary_size()) != want)
                    return fail("inhomogeneous entry of degree " +
                                std::to_string(degree(key, m.src.boundary_size())) +
                                " between shifts " + std::to_string(m.src.qshift) + "," +
                                std::to_string(m.tgt.qshift));
        }
    }
    for (const auto& [h, mat] : c.diffs) {
        auto next = c.diffs.find(h + 1);
        if (next == c.diffs.end()) continue;
        std::map<std::pair<int, int>, Morphism<R>> acc;
        for (const auto& [rc, m1] : mat.entries()) {
            auto [j, i] = rc;
            for (int k : next->second.rows_of_col(j)) {
                const Morphism<R>* m2 = next->second.get(k, j);
                Morphism<R> prod = compose(*m2, m1);
                if (prod.is_zero()) continue;
                auto it = acc.find({k, i});
                if (it == acc.end())
                    acc.emplace(std::pair<int, int>{k, i}, std::move(prod));
                else
                    it->second += prod;
            }
        }
        for (const auto& [ki, m] : acc)
            if (!m.is_zero())
                return fail("d.d != 0 from height " + std::to_string(h) + " (object " +
                            std::to_string(ki.second) + " -> " + std::to_string(ki.first) + ")");
    }
    return {};
}

namespace detail {

template <class R>
Morphism<R> deloop_out_map(const Smoothing& s, bool to_plus) {
    // projection onto the shifted loopless copy: plain cap lands in {-1},
    // dotted cap in {+1}
    Smoothing tgt = s;
    tgt.loops -= 1;
    tgt.qshift += to_plus ? 1 : -1;
    Morphism<R> m(s, tgt);
    CycleSpace space(s, tgt);
    CobKey key;
    for (int i = 0; i < space.n_orbits; ++i)
        key.comps.push_back({{static_cast<std::uint8_t>(i)}, false});
    for (int i = 0; i < tgt.loops; ++i)
        key.comps.push_back({{static_cast<std::uint8_t>(space.src_loop_id(i)),
                              static_cast<std::uint8_t>(space.tgt_loop_id(i))},
                             false});
    key.comps.push_back({{static_cast<std::uint8_t>(space.src_loop_id(s.loops - 1))}, to_plus});
    m.add_term(canonicalize_key(std::move(key), space), R(1));
    return m;
}

template <class R>
Morphism<R> deloop_in_map(const Smoothing& s, bool from_plus) {
    // inclusion of the shifted copy: plain cup from {+1}, dotted from {-1}
    Smoothing src = s;
    src.loops -= 1;
    src.qshift += from_plus ? 1 : -1;
    Morphism<R> m(src, s);
    CycleSpace space(src, s);
    CobKey key;
    for (int i = 0; i < space.n_orbits; ++i)
        key.comps.push_back({{static_cast<std::uint8_t>(i)}, false});
    for (int i = 0; i < src.loops; ++i)
        key.comps.push_back({{static_cast<std::uint8_t>(space.src_loop_id(i)),
                              static_cast<std::uint8_t>(space.tgt_loop_id(i))},
                             false});
    key.comps.push_back({{static_cast<std::uint8_t>(space.tgt_loop_id(s.loops - 1))}, !from_plus});
    m.add_term(canonicalize_key(std::move(key), space), R(1));
    return m;
}

}  // namespace detail

/// Replace a loop-bearing object by its two loopless shifted copies,
/// composing all incident entries with the explicit isomorphisms. Returns
/// the ids of the {-1} and {+1} copies.
template <class R>
std::pair<int, int> deloop_inplace(FormalComplex<R>& c, int height, int id) {
    const Smoothing s = c.columns.at(height).at(id);
    if (s.loops < 1) throw std::invalid_argument("deloop: object has no loop");

    Morphism<R> pi_minus = detail::deloop_out_map<R>(s, false);
    Morphism<R> pi_plus = detail::deloop_out_map<R>(s, true);
    Morphism<R> io_minus = detail::deloop_in_map<R>(s, false);
    Morphism<R> io_plus = detail::deloop_in_map<R>(s, true);

    const int id_minus = c.add_object(height, pi_minus.tgt);
    const int id_plus = c.add_object(height, pi_plus.tgt);

    auto in_it = c.diffs.find(height - 1);
    if (in_it != c.diffs.end()) {
        for (int col : in_it->second.cols_of_row(id)) {
            Morphism<R> m = *in_it->second.get(id, col);
            in_it->second.add(id_minus, col, compose(pi_minus, m));
            in_it->second.add(id_plus, col, compose(pi_plus, m));
        }
        in_it->second.erase_row(id);
    }
    auto out_it = c.diffs.find(height);
    if (out_it != c.diffs.end()) {
        for (int row : out_it->second.rows_of_col(id)) {
            Morphism<R> m = *out_it->second.get(row, id);
            out_it->second.add(row, id_minus, compose(m, io_minus));
            out_it->second.add(row, id_plus, compose(m, io_plus));
        }
        out_it->second.erase_col(id);
    }
    c.columns[height].erase(id);
    return {id_minus, id_plus};
}

/// Cancel an invertible entry phi at (height, row, col): the two incident
/// objects disappear and every bypassing entry picks up the correction
/// -gamma phi^{-1} delta. Homotopy type is preserved. Returns the list of
/// corrected entry addresses.
template <class R>
std::vector<std::tuple<int, int, int>> gaussian_eliminate_inplace(FormalComplex<R>& c, int height,
                                                                  int row, int col) {
    auto& mat = c.diffs.at(height);
    const Morphism<R>* phi = mat.get(row, col);
    if (!phi) throw std::invalid_argument("eliminate: no entry at address");
    auto inv = is_unit(*phi);
    if (!inv) throw std::invalid_argument("eliminate: entry is not a detected unit");
    Morphism<R> phi_inv = Morphism<R>::identity(phi->src, *inv);

    struct Ref {
        int idx;
        Morphism<R> m;
    };
    std::vector<Ref> gamma, delta;
    for (int j : mat.rows_of_col(col))
        if (j != row) gamma.push_back({j, *mat.get(j, col)});
    for (int i : mat.cols_of_row(row))
        if (i != col) delta.push_back({i, *mat.get(row, i)});

    std::vector<std::tuple<int, int, int>> touched;
    for (const auto& d : delta) {
        Morphism<R> mid = compose(phi_inv, d.m);
        for (const auto& g : gamma) {
            mat.add(g.idx, d.idx, -compose(g.m, mid));
            touched.emplace_back(height, g.idx, d.idx);
        }
    }

    mat.erase_col(col);
    mat.erase_row(row);
    auto below = c.diffs.find(height - 1);
    if (below != c.diffs.end()) below->second.erase_row(col);
    auto above = c.diffs.find(height + 1);
    if (above != c.diffs.end()) above->second.erase_col(row);
    c.columns[height].erase(col);
    c.columns[height + 1].erase(row);
    return touched;
}

struct SimplifyOptions {
    bool paranoid = false;                 // validate + Euler check after every step
    std::function<void(int)> on_step;      // called with the current object count
};

struct SimplifyStats {
    long deloops = 0;
    long eliminations = 0;
    int peak_objects = 0;
};

/// Deloop every loop-bearing object, then cancel unit entries until none
/// remain (lowest height first, row-major, first detected unit wins), and
/// repeat to a fixpoint. Homotopy-equivalent to the input.
template <class R>
SimplifyStats simplify_inplace(FormalComplex<R>& c, const SimplifyOptions& opts = {}) {
    SimplifyStats stats;
    auto step = [&]() {
        stats.peak_objects = std::max(stats.peak_objects, c.object_count());
        if (opts.on_step) opts.on_step(c.object_count());
    };
    auto checked = [&](auto&& fn) {
        if (!opts.paranoid) {
            fn();
            return;
        }
        const Laurent before = euler_characteristic(c);
        fn();
        if (!(euler_characteristic(c) == before))
            throw std::logic_error("simplify: Euler characteristic changed");
        auto rep = validate(c);
        if (!rep.ok) throw std::logic_error("simplify: " + rep.message);
    };
    step();
    for (;;) {
        bool progressed = false;
        for (;;) {
            int lh = 0, lid = -1;
            for (const auto& [h, colmap] : c.columns) {
                for (const auto& [id, s] : colmap)
                    if (s.loops > 0) {
                        lh = h;
                        lid = id;
                        break;
                    }
                if (lid >= 0) break;
            }
            if (lid < 0) break;
            checked([&] { deloop_inplace(c, lh, lid); });
            ++stats.deloops;
            progressed = true;
            step();
        }

        std::set<std::tuple<int, int, int>> candidates;
        for (const auto& [h, mat] : c.diffs)
            for (const auto& [rc, m] : mat.entries())
                if (is_unit(m)) candidates.insert({h, rc.first, rc.second});
        while (!candidates.empty()) {
            auto [h, row, col] = *candidates.begin();
            candidates.erase(candidates.begin());
            auto mit = c.diffs.find(h);
            if (mit == c.diffs.end()) continue;
            const Morphism<R>* m = mit->second.get(row, col);
            if (!m || !is_unit(*m)) continue;
            std::vector<std::tuple<int, int, int>> touched;
            checked([&] { touched = gaussian_eliminate_inplace(c, h, row, col); });
            ++stats.eliminations;
            progressed = true;
            step();
            for (auto [th, trow, tcol] : touched) {
                const Morphism<R>* t = c.diffs.at(th).get(trow, tcol);
                if (t && is_unit(*t)) candidates.insert({th, trow, tcol});
            }
        }
        if (!progressed) break;
    }
    c.drop_empty_columns();
    return stats;
}

template <class R>
FormalComplex<R> simplify(FormalComplex<R> c, const SimplifyOptions& opts = {},
                          SimplifyStats* stats_out = nullptr) {
    SimplifyStats stats = simplify_inplace(c, opts);
    if (stats_out) *stats_out = stats;
    return c;
}

template <class R>
FormalComplex<R> deloop(FormalComplex<R> c, int height, int id) {
    deloop_inplace(c, height, id);
    return c;
}

template <class R>
FormalComplex<R> gaussian_eliminate(FormalComplex<R> c, int height, int row, int col) {
    gaussian_eliminate_inplace(c, height, row, col);
    return c;
}

/// Planar tensor product: the double complex of pairwise horizontal
/// compositions, flattened along anti-diagonals. Entries applying the
/// second factor's differential from bidegree (i, j) carry a (-1)^i sign.
template <class R>
FormalComplex<R> tensor(const GluingSpec& spec, const FormalComplex<R>& a,
                        const FormalComplex<R>& b) {
    FormalComplex<R> out;
    std::map<std::tuple<int, int, int, int>, int> idx;
    for (const auto& [ha, cola] : a.columns)
        for (const auto& [ida, sa] : cola)
            for (const auto& [hb, colb] : b.columns)
                for (const auto& [idb, sb] : colb) {
                    SpliceTrace tr = hcompose_smoothing(spec, sa, sb);
                    idx[{ha, ida, hb, idb}] = out.add_object(ha + hb, std::move(tr.result));
                }
    for (const auto& [ha, mat] : a.diffs)
        for (const auto& [rc, m] : mat.entries()) {
            auto [ja, ia] = rc;
            for (const auto& [hb, colb] : b.columns)
                for (const auto& [idb, sb] : colb) {
                    Morphism<R> glued = hcompose_morphism(spec, m, Morphism<R>::identity(sb));
                    out.diffs[ha + hb].add(idx.at({ha + 1, ja, hb, idb}),
                                           idx.at({ha, ia, hb, idb}), std::move(glued));
                }
        }
    for (const auto& [hb, mat] : b.diffs)
        for (const auto& [rc, m] : mat.entries()) {
            auto [jb, ib] = rc;
            for (const auto& [ha, cola] : a.columns) {
                const bool flip = ((ha % 2) + 2) % 2 == 1;
                for (const auto& [ida, sa] : cola) {
                    Morphism<R> glued = hcompose_morphism(spec, Morphism<R>::identity(sa), m);
                    if (flip) glued = -glued;
                    out.diffs[ha + hb].add(idx.at({ha, ida, hb + 1, jb}),
                                           idx.at({ha, ida, hb, ib}), std::move(glued));
                }
            }
        }
    return out;
}

/// One-line summary of a complex, for logs and dumps.
template <class R>
std::string describe(const FormalComplex<R>& c) {
    std::ostringstream os;
    os << "objects:";
    for (const auto& [h, col] : c.columns) os << " h" << h << ":" << col.size();
    int entries = 0;
    for (const auto& [h, m] : c.diffs) entries += static_cast<int>(m.entries().size());
    os << " entries:" << entries;
    return os.str();
}

}  // namespace kh
