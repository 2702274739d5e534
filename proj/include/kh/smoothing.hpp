#pragma once

#include <compare>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kh {

/// A crossingless tangle state: a planar perfect matching on the boundary
/// points 0..b-1 (in their cyclic order), a count of anonymous closed
/// loops, and a formal q-degree shift.
struct Smoothing {
    std::vector<std::uint8_t> match;  // match[i] = partner of i
    int loops = 0;
    int qshift = 0;

    int boundary_size() const { return static_cast<int>(match.size()); }

    friend auto operator<=>(const Smoothing&, const Smoothing&) = default;

    /// Same underlying curves, ignoring the formal shift.
    bool same_shape(const Smoothing& o) const { return match == o.match && loops == o.loops; }

    static Smoothing empty(int qshift = 0, int loops = 0) {
        Smoothing s;
        s.loops = loops;
        s.qshift = qshift;
        return s;
    }
    static Smoothing from_pairs(int b, const std::vector<std::pair<int, int>>& pairs,
                                int loops = 0, int qshift = 0) {
        Smoothing s;
        s.match.assign(b, 0);
        std::vector<bool> seen(b, false);
        for (auto [i, j] : pairs) {
            s.match[i] = static_cast<std::uint8_t>(j);
            s.match[j] = static_cast<std::uint8_t>(i);
            seen[i] = seen[j] = true;
        }
        for (bool v : seen)
            if (!v) throw std::invalid_argument("Smoothing: incomplete matching");
        s.loops = loops;
        s.qshift = qshift;
        s.check();
        return s;
    }

    void check() const {
        const int b = boundary_size();
        if (b % 2) throw std::invalid_argument("Smoothing: odd boundary size");
        if (loops < 0) throw std::invalid_argument("Smoothing: negative loop count");
        for (int i = 0; i < b; ++i) {
            int j = match[i];
            if (j < 0 || j >= b || j == i || match[j] != i)
                throw std::invalid_argument("Smoothing: not a fixed-point-free involution");
        }
        // non-crossing with respect to the cyclic order: chords must nest
        std::vector<int> stack;
        for (int i = 0; i < b; ++i) {
            if (!stack.empty() && stack.back() == static_cast<int>(match[i]))
                stack.pop_back();
            else if (match[i] > i)
                stack.push_back(i);
            else
                throw std::invalid_argument("Smoothing: matching is not planar");
        }
    }

    std::string str() const {
        std::ostringstream os;
        os << "b" << boundary_size() << ":";
        for (int i = 0; i < boundary_size(); ++i)
            if (static_cast<int>(match[i]) > i) os << "(" << i << " " << int(match[i]) << ")";
        if (loops) os << "+" << loops << "o";
        os << "{" << (qshift >= 0 ? "+" : "") << qshift << "}";
        return os.str();
    }
};

}  // namespace kh
