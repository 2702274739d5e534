#pragma once

#include <algorithm>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kh/complex.hpp"
#include "kh/laurent.hpp"
#include "kh/rings.hpp"

namespace kh {

/// Dense integer matrix with arbitrary-precision entries.
struct IntMat {
    int rows = 0, cols = 0;
    std::vector<Int> a;  // row-major

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}
    Int& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const Int& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static IntMat identity(int n) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    friend IntMat operator*(const IntMat& x, const IntMat& y) {
        IntMat z(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                const Int& v = x.at(i, k);
                if (v == 0) continue;
                for (int j = 0; j < y.cols; ++j)
                    if (y.at(k, j) != 0) z.at(i, j) += v * y.at(k, j);
            }
        return z;
    }
    friend bool operator==(const IntMat& x, const IntMat& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }
};

struct SmithResult {
    std::vector<Int> divisors;  // nonzero diagonal entries, d1 | d2 | ...
    int rank = 0;
    std::optional<IntMat> U, V;  // U * A * V = diag(divisors), when requested
    int det_u = 1, det_v = 1;    // determinants of the accumulated transforms
};

/// Smith normal form over Z by unimodular row/column operations, smallest
/// pivot first. Entry growth is handled by arbitrary-precision integers.
inline SmithResult smith_normal_form(IntMat m, bool want_transforms = false) {
    SmithResult res;
    const int rows = m.rows, cols = m.cols;
    if (want_transforms) {
        res.U = IntMat::identity(rows);
        res.V = IntMat::identity(cols);
    }
    auto abs_val = [](const Int& x) { return x < 0 ? Int(-x) : x; };
    auto swap_rows = [&](int i, int j) {
        if (i == j) return;
        for (int k = 0; k < cols; ++k) std::swap(m.at(i, k), m.at(j, k));
        if (res.U)
            for (int k = 0; k < rows; ++k) std::swap(res.U->at(i, k), res.U->at(j, k));
        res.det_u = -res.det_u;
    };
    auto swap_cols = [&](int i, int j) {
        if (i == j) return;
        for (int k = 0; k < rows; ++k) std::swap(m.at(k, i), m.at(k, j));
        if (res.V)
            for (int k = 0; k < cols; ++k) std::swap(res.V->at(k, i), res.V->at(k, j));
        res.det_v = -res.det_v;
    };
    auto add_row = [&](int dst, int src, const Int& f) {  // row dst += f * row src
        for (int k = 0; k < cols; ++k) m.at(dst, k) += f * m.at(src, k);
        if (res.U)
            for (int k = 0; k < rows; ++k) res.U->at(dst, k) += f * res.U->at(src, k);
    };
    auto add_col = [&](int dst, int src, const Int& f) {
        for (int k = 0; k < rows; ++k) m.at(k, dst) += f * m.at(k, src);
        if (res.V)
            for (int k = 0; k < cols; ++k) res.V->at(k, dst) += f * res.V->at(k, src);
    };
    auto negate_row = [&](int i) {
        for (int k = 0; k < cols; ++k) m.at(i, k) = -m.at(i, k);
        if (res.U)
            for (int k = 0; k < rows; ++k) res.U->at(i, k) = -res.U->at(i, k);
        res.det_u = -res.det_u;
    };

    const int t_max = std::min(rows, cols);
    for (int t = 0; t < t_max; ++t) {
        // pick the nonzero entry of smallest magnitude in the submatrix
        int pi = -1, pj = -1;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j)
                if (m.at(i, j) != 0 &&
                    (pi < 0 || abs_val(m.at(i, j)) < abs_val(m.at(pi, pj)))) {
                    pi = i;
                    pj = j;
                }
        if (pi < 0) break;
        swap_rows(t, pi);
        swap_cols(t, pj);
        for (bool again = true; again;) {
            again = false;
            for (int i = t + 1; i < rows; ++i) {
                if (m.at(i, t) == 0) continue;
                Int q = m.at(i, t) / m.at(t, t);
                if (q != 0) add_row(i, t, -q);
                if (m.at(i, t) != 0) {  // remainder survives: smaller pivot found
                    swap_rows(t, i);
                    again = true;
                }
            }
            for (int j = t + 1; j < cols; ++j) {
                if (m.at(t, j) == 0) continue;
                Int q = m.at(t, j) / m.at(t, t);
                if (q != 0) add_col(j, t, -q);
                if (m.at(t, j) != 0) {
                    swap_cols(t, j);
                    again = true;
                }
            }
            if (again) continue;
            // pivot must divide every remaining entry for the divisor chain
            for (int i = t + 1; i < rows && !again; ++i)
                for (int j = t + 1; j < cols && !again; ++j)
                    if (m.at(i, j) % m.at(t, t) != 0) {
                        add_row(t, i, 1);
                        again = true;
                    }
        }
        if (m.at(t, t) < 0) negate_row(t);
    }
    for (int t = 0; t < t_max; ++t)
        if (m.at(t, t) != 0) {
            res.divisors.push_back(m.at(t, t));
            ++res.rank;
        }
    return res;
}

/// Integer chain complexes split by q-degree: per q, dimensions by height
/// and the differential matrices between consecutive heights.
struct GradedIntegerComplex {
    struct Block {
        std::map<int, int> dims;     // height -> dimension
        std::map<int, IntMat> diff;  // height h -> matrix (dim h+1) x (dim h)
    };
    std::map<int, Block> by_q;

    int total_dim() const {
        int n = 0;
        for (const auto& [q, block] : by_q)
            for (const auto& [h, d] : block.dims) n += d;
        return n;
    }
};

namespace detail {

template <class R>
Int coeff_to_int(const R& value);

template <>
inline Int coeff_to_int<Int>(const Int& value) {
    return value;
}
template <>
inline Int coeff_to_int<Rational>(const Rational& value) {
    if (boost::multiprecision::denominator(value) != 1)
        throw std::logic_error("to_graded: non-integer rational coefficient");
    return boost::multiprecision::numerator(value);
}
template <>
inline Int coeff_to_int<Fp>(const Fp& value) {
    return Int(value.value());
}

}  // namespace detail

/// Apply the functor sending the empty smoothing to a rank-1 module: a
/// fully scanned complex (all objects shifted empty smoothings) becomes a
/// family of integer chain complexes, one per q-degree.
template <class R>
GradedIntegerComplex to_graded(const FormalComplex<R>& c) {
    GradedIntegerComplex g;
    std::map<std::pair<int, int>, std::map<int, int>> index;  // (q, h) -> id -> index
    for (const auto& [h, col] : c.columns)
        for (const auto& [id, s] : col) {
            if (s.boundary_size() != 0 || s.loops != 0)
                throw std::invalid_argument("to_graded: non-empty object present; "
                                            "scan/simplify the complex first");
            auto& block = g.by_q[s.qshift];
            int& d = block.dims[h];
            index[{s.qshift, h}][id] = d++;
        }
    for (auto& [q, block] : g.by_q)
        for (auto& [h, dim] : block.dims) {
            auto next = block.dims.find(h + 1);
            if (next == block.dims.end()) continue;
            block.diff.emplace(h, IntMat(next->second, dim));
        }
    for (const auto& [h, mat] : c.diffs)
        for (const auto& [rc, m] : mat.entries()) {
            auto [row, col] = rc;
            const int q = m.src.qshift;
            if (m.tgt.qshift != q)
                throw std::logic_error("to_graded: differential does not preserve q");
            if (m.terms.size() != 1 || !m.terms.begin()->first.comps.empty())
                throw std::logic_error("to_graded: non-scalar entry");
            auto& block = g.by_q.at(q);
            auto it = block.diff.find(h);
            if (it == block.diff.end())
                throw std::logic_error("to_graded: entry without allocated matrix");
            it->second.at(index.at({q, h + 1}).at(row), index.at({q, h}).at(col)) =
                detail::coeff_to_int<R>(m.terms.begin()->second);
        }
    return g;
}

/// Coefficient choice for reading homology off an integer complex.
struct RingSpec {
    enum class Kind { Z, Q, Fp } kind = Kind::Z;
    std::uint32_t p = 2;

    static RingSpec z() { return {Kind::Z, 2}; }
    static RingSpec q() { return {Kind::Q, 2}; }
    static RingSpec fp(std::uint32_t p) { return {Kind::Fp, p}; }
    std::string name() const {
        switch (kind) {
            case Kind::Z: return "Z";
            case Kind::Q: return "Q";
            default: return "F" + std::to_string(p);
        }
    }
};

/// Homology groups indexed by (height r, q-degree). `torsion` is the
/// elementary divisor chain (entries > 1, each dividing the next).
struct HomologyTable {
    struct Group {
        Int free = 0;
        std::vector<Int> torsion;
        bool trivial() const { return free == 0 && torsion.empty(); }
    };
    std::map<std::pair<int, int>, Group> entries;  // (r, q) -> group

    const Group* find(int r, int q) const {
        auto it = entries.find({r, q});
        return it == entries.end() ? nullptr : &it->second;
    }
    Int total_rank() const {
        Int n = 0;
        for (const auto& [rq, grp] : entries) n += grp.free;
        return n;
    }
    friend bool operator==(const HomologyTable& a, const HomologyTable& b) {
        auto canon = [](const HomologyTable& t) {
            std::map<std::pair<int, int>, std::pair<Int, std::vector<Int>>> out;
            for (const auto& [rq, g] : t.entries)
                if (!g.trivial()) out[rq] = {g.free, g.torsion};
            return out;
        };
        return canon(a) == canon(b);
    }
};

/// Canonical divisor chain of a finite abelian group given as any list of
/// cyclic orders; used to compare published tables up to isomorphism.
inline std::vector<Int> divisor_chain(std::vector<Int> orders) {
    std::map<Int, std::vector<int>> powers;  // prime -> exponents, descending later
    for (Int n : orders) {
        if (n < 2) continue;
        for (Int f = 2; f * f <= n; ++f)
            while (n % f == 0) {
                int e = 0;
                do {
                    n /= f;
                    ++e;
                } while (n % f == 0);
                powers[f].push_back(e);
            }
        if (n > 1) powers[n].push_back(1);
    }
    std::size_t layers = 0;
    for (auto& [p, es] : powers) {
        std::sort(es.begin(), es.end(), std::greater<int>());
        layers = std::max(layers, es.size());
    }
    std::vector<Int> chain(layers, Int(1));  // chain[0] = largest divisor
    for (auto& [p, es] : powers)
        for (std::size_t i = 0; i < es.size(); ++i)
            for (int k = 0; k < es[i]; ++k) chain[i] *= p;
    std::reverse(chain.begin(), chain.end());
    return chain;
}

/// Homology of a graded integer complex over Z, Q or F_p. All three reuse
/// one Smith decomposition per matrix: the Q-rank is the number of nonzero
/// divisors, the F_p-rank counts divisors not divisible by p, and torsion
/// comes from divisors exceeding 1.
inline HomologyTable homology(const GradedIntegerComplex& g, RingSpec ring = RingSpec::z()) {
    HomologyTable table;
    for (const auto& [q, block] : g.by_q) {
        std::map<int, SmithResult> snf;
        for (const auto& [h, mat] : block.diff) snf[h] = smith_normal_form(mat);
        auto rank_of = [&](int h) -> int {
            auto it = snf.find(h);
            if (it == snf.end()) return 0;
            if (ring.kind == RingSpec::Kind::Fp) {
                int r = 0;
                for (const Int& d : it->second.divisors)
                    if (d % ring.p != 0) ++r;
                return r;
            }
            return it->second.rank;
        };
        for (const auto& [h, dim] : block.dims) {
            HomologyTable::Group grp;
            grp.free = dim - rank_of(h) - rank_of(h - 1);
            if (ring.kind == RingSpec::Kind::Z) {
                auto it = snf.find(h - 1);
                if (it != snf.end())
                    for (const Int& d : it->second.divisors)
                        if (d > 1) grp.torsion.push_back(d);
            }
            if (!grp.trivial()) table.entries[{h, q}] = std::move(grp);
        }
    }
    return table;
}

/// Read the homology of a fully simplified complex directly; over a field
/// every surviving differential must already be zero.
template <class R>
HomologyTable scan_homology(const FormalComplex<R>& c, RingSpec ring) {
    return homology(to_graded(c), ring);
}

inline Laurent euler_characteristic(const HomologyTable& t) {
    Laurent total;
    for (const auto& [rq, grp] : t.entries) {
        auto [r, q] = rq;
        Laurent term = Laurent::monomial(q, grp.free);
        if (((r % 2) + 2) % 2 == 1)
            total -= term;
        else
            total += term;
    }
    return total;
}

inline std::string group_to_string(const HomologyTable::Group& g) {
    std::ostringstream os;
    bool first = true;
    if (g.free > 0) {
        os << "Z";
        if (g.free > 1) os << "^" << g.free.str();
        first = false;
    }
    for (const Int& d : g.torsion) {
        if (!first) os << "+";
        os << "Z_" << d.str();
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

/// Aligned text table: rows are heights r, columns are the degrees
/// j = q - 2r, so the cell at (r, j) holds the part of H^r in q = 2r + j.
inline std::string table_to_text(const HomologyTable& t) {
    if (t.entries.empty()) return "(trivial)\n";
    std::set<int> js;
    int rmin = 0, rmax = 0;
    bool first = true;
    for (const auto& [rq, grp] : t.entries) {
        auto [r, q] = rq;
        js.insert(q - 2 * r);
        rmin = first ? r : std::min(rmin, r);
        rmax = first ? r : std::max(rmax, r);
        first = false;
    }
    std::vector<int> jcols(js.begin(), js.end());
    std::vector<std::size_t> width(jcols.size());
    std::vector<std::string> header(jcols.size());
    for (std::size_t k = 0; k < jcols.size(); ++k) {
        header[k] = "j=" + std::to_string(jcols[k]);
        width[k] = header[k].size();
    }
    std::map<std::pair<int, int>, std::string> cells;
    for (const auto& [rq, grp] : t.entries) {
        auto [r, q] = rq;
        int k = static_cast<int>(std::lower_bound(jcols.begin(), jcols.end(), q - 2 * r) -
                                 jcols.begin());
        cells[{r, k}] = group_to_string(grp);
        width[k] = std::max(width[k], cells[{r, k}].size());
    }
    std::ostringstream os;
    os << std::setw(6) << "" << " ";
    for (std::size_t k = 0; k < jcols.size(); ++k)
        os << std::setw(static_cast<int>(width[k]) + 2) << header[k];
    os << "\n";
    for (int r = rmin; r <= rmax; ++r) {
        os << std::setw(6) << ("r=" + std::to_string(r)) << " ";
        for (std::size_t k = 0; k < jcols.size(); ++k) {
            auto it = cells.find({r, static_cast<int>(k)});
            os << std::setw(static_cast<int>(width[k]) + 2)
               << (it == cells.end() ? "." : it->second);
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace kh
