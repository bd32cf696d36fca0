#pragma once

#include <algorithm>
#include <vector>

#include "maclane/intlinalg.hpp"

namespace maclane {

/**
 * A deliberately naive invariant-factor computation used only as a
 * cross-check against the production Smith normal form: full pivoting on
 * the largest remaining entry, plain row/column elimination without any
 * divisibility bookkeeping, then a pairwise gcd/lcm sweep on the diagonal.
 * Slow and transform-free, but an independent code path.
 */
inline std::vector<Int> reference_invariant_factors(DenseMat a) {
    const int m = static_cast<int>(a.size());
    const int n = m ? static_cast<int>(a[0].size()) : 0;
    auto gcd = [](Int x, Int y) {
        if (x < 0) x = -x;
        if (y < 0) y = -y;
        while (y != 0) {
            Int r = x % y;
            x = y;
            y = r;
        }
        return x;
    };
    std::vector<Int> diag;
    for (int t = 0; t < std::min(m, n); ++t) {
        // largest |entry| in the trailing submatrix (chosen once; afterwards
        // the pivot magnitude only shrinks, so the sweep terminates)
        int pr = -1, pc = -1;
        Int best = 0;
        for (int i = t; i < m; ++i)
            for (int j = t; j < n; ++j)
                if (abs(a[i][j]) > best) {
                    best = abs(a[i][j]);
                    pr = i;
                    pc = j;
                }
        if (pr < 0) break;
        std::swap(a[t], a[pr]);
        for (int i = 0; i < m; ++i) std::swap(a[i][t], a[i][pc]);
        for (;;) {
            bool clean = true;
            for (int i = t + 1; i < m; ++i)
                while (a[i][t] != 0) {
                    Int q = a[i][t] / a[t][t];
                    for (int j = t; j < n; ++j) a[i][j] -= q * a[t][j];
                    if (a[i][t] != 0) {
                        std::swap(a[t], a[i]);
                        clean = false;
                    }
                }
            for (int j = t + 1; j < n; ++j)
                while (a[t][j] != 0) {
                    Int q = a[t][j] / a[t][t];
                    for (int i = t; i < m; ++i) a[i][j] -= q * a[i][t];
                    if (a[t][j] != 0) {
                        for (int i = t; i < m; ++i) std::swap(a[i][t], a[i][j]);
                        clean = false;
                    }
                }
            if (clean) break;
        }
        diag.push_back(abs(a[t][t]));
    }
    // diag(a, b) and diag(gcd, lcm) present the same group
    for (std::size_t i = 0; i < diag.size(); ++i)
        for (std::size_t j = i + 1; j < diag.size(); ++j)
            if (diag[j] % diag[i] != 0) {
                Int g = gcd(diag[i], diag[j]);
                Int l = diag[i] / g * diag[j];
                diag[i] = g;
                diag[j] = l;
            }
    std::sort(diag.begin(), diag.end());
    return diag;
}

/// Canonical group form from a free presentation via the reference
/// reduction: Z^cols / image(relations as columns of a rows x cols ... );
/// here: the cokernel invariants of a free chain piece. H_n of a complex of
/// free groups is Z^{z_n - r_{n+1}} plus the torsion of d_{n+1}.
inline FPAbelianGroup reference_free_homology(const DenseMat& d_n, const DenseMat& d_np1, int dim_n) {
    auto rank_of = [](const DenseMat& m) {
        return static_cast<int>(reference_invariant_factors(m).size());
    };
    const int rank_dn = d_n.empty() ? 0 : rank_of(d_n);
    std::vector<Int> inv = d_np1.empty() ? std::vector<Int>{} : reference_invariant_factors(d_np1);
    const int rank_dnp1 = static_cast<int>(inv.size());
    FPAbelianGroup h;
    h.free_rank = dim_n - rank_dn - rank_dnp1;
    for (const auto& t : inv)
        if (t > 1) h.torsion.push_back(t);
    return h;
}

} // namespace maclane
