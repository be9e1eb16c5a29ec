#ifndef MAGWEYL_MULTIINDEX_HPP
#define MAGWEYL_MULTIINDEX_HPP

#include <vector>

namespace magweyl {

using MultiIndex = std::vector<int>;

inline int mi_order(const MultiIndex& a) {
    int s = 0;
    for (int v : a) s += v;
    return s;
}
inline bool mi_leq(const MultiIndex& a, const MultiIndex& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}
inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}
inline double mi_binom(const MultiIndex& a, const MultiIndex& b) {
    double r = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) r *= binom(a[i], b[i]);
    return r;
}

// All multi-indices of length d with |alpha| == m.
inline void enumerate_multiindices(int d, int m, std::vector<MultiIndex>& out,
                                   MultiIndex prefix = {}) {
    if (int(prefix.size()) == d - 1) {
        prefix.push_back(m);
        out.push_back(prefix);
        return;
    }
    for (int k = 0; k <= m; ++k) {
        MultiIndex p = prefix;
        p.push_back(k);
        enumerate_multiindices(d, m - k, out, p);
    }
}

}  // namespace magweyl

#endif  // MAGWEYL_MULTIINDEX_HPP
