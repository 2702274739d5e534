#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kh/complex.hpp"
#include "kh/scan_order.hpp"

namespace kh {

/// The two-object complex of a single crossing, with the height and
/// q-degree shifts already in place: a positive crossing sits at heights
/// (0,1) with shifts (+1,+2), a negative one at (-1,0) with (-2,-1).
/// With `shifted` false the raw cube complex (heights 0,1 and shifts 0,1)
/// is returned.
template <class R>
FormalComplex<R> crossing_complex(int sign, bool shifted = true) {
    const Smoothing s0 = Smoothing::from_pairs(4, {{0, 1}, {2, 3}});
    const Smoothing s1 = Smoothing::from_pairs(4, {{0, 3}, {1, 2}});
    int h0 = 0, q0 = 0, q1 = 1;
    if (shifted) {
        if (sign > 0) {
            h0 = 0;
            q0 = 1;
            q1 = 2;
        } else {
            h0 = -1;
            q0 = -2;
            q1 = -1;
        }
    }
    FormalComplex<R> c;
    Smoothing a = s0, b = s1;
    a.qshift = q0;
    b.qshift = q1;
    int ia = c.add_object(h0, a);
    int ib = c.add_object(h0 + 1, b);
    Morphism<R> saddle = reduce_raw(a, b, {RawComponent{{0}, 0, 0}}, R(1));
    c.diffs[h0].set(ib, ia, std::move(saddle));
    return c;
}

struct ScanStats {
    int peak_objects = 0;
    long eliminations = 0;
    long deloops = 0;
    std::vector<int> width_profile;
};

struct ScanOptions {
    bool paranoid = false;
    std::function<void(int, int)> progress;  // (crossings done, current objects)
};

/// A tangle mid-scan: several disjoint partial tangles ("islands"), each a
/// simplified complex with a cyclic open boundary of edge labels.
template <class R>
struct ScanState {
    struct Island {
        FormalComplex<R> complex;
        std::vector<int> circle;
    };
    std::vector<Island> islands;
    int crossings_done = 0;
    ScanStats stats;

    int total_objects() const {
        int n = 0;
        for (const auto& i : islands) n += i.complex.object_count();
        return n;
    }
    int open_boundary_size() const {
        int n = 0;
        for (const auto& i : islands) n += static_cast<int>(i.circle.size());
        return n;
    }
};

namespace detail {

inline GluingSpec disjoint_spec(int a_size, int b_size, int gap, int rot) {
    GluingSpec spec;
    spec.a_size = a_size;
    spec.b_size = b_size;
    if (a_size == 0) {
        for (int i = 0; i < b_size; ++i) spec.result.push_back({1, i});
        return spec;
    }
    for (int i = 0; i <= gap; ++i) spec.result.push_back({0, i});
    for (int k = 0; k < b_size; ++k) spec.result.push_back({1, (rot + k) % b_size});
    for (int i = gap + 1; i < a_size; ++i) spec.result.push_back({0, i});
    return spec;
}

}  // namespace detail

/// Glue one crossing onto the scan state and re-simplify.
template <class R>
void scan_step(ScanState<R>& state, const Crossing& crossing, const ScanOptions& opts = {}) {
    std::vector<std::vector<int>> circles;
    for (const auto& isl : state.islands) circles.push_back(isl.circle);
    auto plan = plan_crossing_glue(circles, crossing.edges);
    if (!plan)
        throw PlanarityError("crossing cannot be glued planarly onto the partial tangle");

    FormalComplex<R> acc;
    if (plan->touched.empty()) {
        acc = FormalComplex<R>::unit();
    } else {
        acc = std::move(state.islands[plan->touched[0]].complex);
        int acc_size = static_cast<int>(state.islands[plan->touched[0]].circle.size());
        for (std::size_t k = 1; k < plan->touched.size(); ++k) {
            const auto& isl = state.islands[plan->touched[k]];
            auto [gap, rot] = plan->insertions[k - 1];
            GluingSpec dj = detail::disjoint_spec(acc_size, static_cast<int>(isl.circle.size()),
                                                  gap, rot);
            acc = tensor(dj, acc, isl.complex);
            acc_size += static_cast<int>(isl.circle.size());
        }
    }
    FormalComplex<R> glued = tensor(plan->spec, acc, crossing_complex<R>(crossing.sign));
    state.stats.peak_objects = std::max(state.stats.peak_objects, glued.object_count());

    SimplifyOptions sopts;
    sopts.paranoid = opts.paranoid;
    SimplifyStats st = simplify_inplace(glued, sopts);
    state.stats.deloops += st.deloops;
    state.stats.eliminations += st.eliminations;
    state.stats.peak_objects = std::max(state.stats.peak_objects, st.peak_objects);

    std::vector<typename ScanState<R>::Island> next;
    for (int k = 0; k < static_cast<int>(state.islands.size()); ++k)
        if (!std::count(plan->touched.begin(), plan->touched.end(), k))
            next.push_back(std::move(state.islands[k]));
    next.push_back({std::move(glued), plan->new_circle});
    state.islands = std::move(next);
    ++state.crossings_done;
    state.stats.width_profile.push_back(state.open_boundary_size());
    if (opts.progress) opts.progress(state.crossings_done, state.total_objects());
}

/// Merge all remaining islands into a single complex (their disjoint
/// side-by-side product) and return it along with the final boundary.
template <class R>
std::pair<FormalComplex<R>, std::vector<int>> scan_finish(ScanState<R>& state,
                                                          const ScanOptions& opts = {}) {
    if (state.islands.empty()) return {FormalComplex<R>::unit(), {}};
    FormalComplex<R> acc = std::move(state.islands[0].complex);
    std::vector<int> circle = state.islands[0].circle;
    for (std::size_t k = 1; k < state.islands.size(); ++k) {
        auto& isl = state.islands[k];
        GluingSpec dj = detail::disjoint_spec(static_cast<int>(circle.size()),
                                              static_cast<int>(isl.circle.size()),
                                              std::max(0, static_cast<int>(circle.size()) - 1), 0);
        acc = tensor(dj, acc, isl.complex);
        state.stats.peak_objects = std::max(state.stats.peak_objects, acc.object_count());
        for (int e : isl.circle) circle.push_back(e);
    }
    SimplifyOptions sopts;
    sopts.paranoid = opts.paranoid;
    SimplifyStats st = simplify_inplace(acc, sopts);
    state.stats.deloops += st.deloops;
    state.stats.eliminations += st.eliminations;
    state.stats.peak_objects = std::max(state.stats.peak_objects, st.peak_objects);
    state.islands.clear();
    return {std::move(acc), std::move(circle)};
}

/// Scan an open tangle given as a list of signed crossings, one crossing
/// at a time in the given order, simplifying after each step.
template <class R>
std::pair<FormalComplex<R>, std::vector<int>> scan_tangle(const std::vector<Crossing>& crossings,
                                                          const std::vector<int>& order,
                                                          ScanStats* stats_out = nullptr,
                                                          const ScanOptions& opts = {},
                                                          int unknots = 0) {
    ScanState<R> state;
    for (int k = 0; k < unknots; ++k)
        state.islands.push_back({FormalComplex<R>::single(Smoothing::empty(0, 1)), {}});
    for (int idx : order) scan_step(state, crossings.at(idx), opts);
    auto result = scan_finish(state, opts);
    if (stats_out) *stats_out = state.stats;
    return result;
}

/// The simplified Khovanov complex of a closed diagram: all objects are
/// shifted empty smoothings.
template <class R>
FormalComplex<R> scan(const Diagram& d, const ScanOrder& order, ScanStats* stats_out = nullptr,
                      const ScanOptions& opts = {}) {
    auto [complex, circle] = scan_tangle<R>(d.crossings, order.perm, stats_out, opts, d.unknots);
    if (!circle.empty()) throw std::logic_error("scan: diagram did not close up");
    return std::move(complex);
}

template <class R>
FormalComplex<R> scan(const Diagram& d, OrderStrategy strategy = OrderStrategy::Given,
                      ScanStats* stats_out = nullptr, const ScanOptions& opts = {}) {
    return scan<R>(d, order_crossings(d, strategy), stats_out, opts);
}

struct DivideStats {
    int tensor_objects = 0;  // size of the intermediate double complex
    ScanStats left, right;
};

/// Divide and conquer: simplify the two halves of a diagram independently,
/// then glue them and simplify the product.
template <class R>
FormalComplex<R> divide_and_conquer(const Diagram& d, const std::vector<int>& first_half,
                                    DivideStats* stats_out = nullptr,
                                    const ScanOptions& opts = {}) {
    std::vector<int> second_half;
    std::vector<bool> in_first(d.size(), false);
    for (int c : first_half) {
        if (c < 0 || c >= d.size() || in_first[c])
            throw std::invalid_argument("divide_and_conquer: bad cut");
        in_first[c] = true;
    }
    for (int c = 0; c < d.size(); ++c)
        if (!in_first[c]) second_half.push_back(c);

    DivideStats stats;
    auto [left, lcircle] = scan_tangle<R>(d.crossings, first_half, &stats.left, opts, d.unknots);
    auto [right, rcircle] = scan_tangle<R>(d.crossings, second_half, &stats.right, opts, 0);

    // all cut edges appear once on each side
    std::vector<std::pair<int, int>> joins;
    for (int i = 0; i < static_cast<int>(lcircle.size()); ++i)
        for (int j = 0; j < static_cast<int>(rcircle.size()); ++j)
            if (lcircle[i] == rcircle[j]) joins.push_back({i, j});
    if (joins.size() != lcircle.size() || joins.size() != rcircle.size())
        throw std::invalid_argument("divide_and_conquer: halves do not close the diagram");

    GluingSpec spec = make_gluing_spec(static_cast<int>(lcircle.size()),
                                       static_cast<int>(rcircle.size()), joins);
    FormalComplex<R> whole = tensor(spec, left, right);
    stats.tensor_objects = whole.object_count();
    SimplifyOptions sopts;
    sopts.paranoid = opts.paranoid;
    simplify_inplace(whole, sopts);
    if (stats_out) *stats_out = stats;
    return whole;
}

}  // namespace kh
