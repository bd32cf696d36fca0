#pragma once

#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "maclane/abgroup.hpp"
#include "maclane/intlinalg.hpp"

namespace maclane {

/// Default cap on |A|^(2^n), the number of cube functions enumerated per
/// degree. The double-exponential growth makes high degrees unreachable;
/// the guard fails loudly instead of hanging.
constexpr std::uint64_t k_default_budget = 100000000;

/**
 * Vertices of the n-cube C_n = {0,1}^n are bitmasks with coordinate 1 in
 * the lowest bit. Inserting a bit at position i (1 <= i <= n+1) produces a
 * vertex of C_{n+1}; face restrictions evaluate through these insertions.
 */
inline std::uint32_t insert_coordinate(std::uint32_t vertex, int n, int i, int bit) {
    if (i < 1 || i > n + 1) throw ValidationError("insert position " + std::to_string(i) + " out of range");
    const std::uint32_t low_mask = (std::uint32_t{1} << (i - 1)) - 1;
    const std::uint32_t low = vertex & low_mask;
    const std::uint32_t high = vertex >> (i - 1);
    return low | (static_cast<std::uint32_t>(bit) << (i - 1)) | (high << i);
}

/// A function C_n -> A as a table of element indices, indexed by vertex
/// bitmask. dim() is n.
struct CubeFunction {
    std::vector<std::uint32_t> values; // size 2^n

    int dim() const {
        int n = 0;
        while ((std::size_t{1} << n) < values.size()) ++n;
        return n;
    }

    bool operator==(const CubeFunction& other) const { return values == other.values; }
    bool operator<(const CubeFunction& other) const { return values < other.values; }
};

/// Restriction along the face insertion (i, bit): the function
/// e -> f(insert_coordinate(e, i, bit)) on C_{n-1}.
inline std::vector<std::uint32_t> face_restrict(const std::vector<std::uint32_t>& values, int n, int i, int bit) {
    std::vector<std::uint32_t> out(std::size_t{1} << (n - 1));
    for (std::uint32_t e = 0; e < out.size(); ++e) out[e] = values[insert_coordinate(e, n - 1, i, bit)];
    return out;
}

/// A monomial is degenerate when some face restriction is constantly zero
/// (for n = 0: the function itself is zero). Degenerate monomials span the
/// subcomplex the quotient kills, so the non-degenerate ones form a basis.
inline bool is_degenerate(const std::vector<std::uint32_t>& values, int n) {
    if (n == 0) return values[0] == 0;
    const std::uint32_t half = std::uint32_t{1} << (n - 1);
    for (int i = 1; i <= n; ++i) {
        for (int bit = 0; bit <= 1; ++bit) {
            bool all_zero = true;
            for (std::uint32_t e = 0; e < half && all_zero; ++e)
                all_zero = values[insert_coordinate(e, n - 1, i, bit)] == 0;
            if (all_zero) return true;
        }
    }
    return false;
}

/**
 * The ordered monomial basis of Q_n(A): all non-degenerate functions
 * C_n -> A, sorted lexicographically on the value table under the
 * canonical element enumeration. Lookup is binary search.
 */
class QBasis {
public:
    QBasis(FinAbGroup group, int n, std::vector<CubeFunction> fns)
        : group_(std::move(group)), n_(n), fns_(std::move(fns)) {}

    const FinAbGroup& group() const { return group_; }
    int degree() const { return n_; }
    int rank() const { return static_cast<int>(fns_.size()); }
    const std::vector<CubeFunction>& functions() const { return fns_; }
    const CubeFunction& function(int i) const { return fns_[static_cast<std::size_t>(i)]; }

    /// Position of a value table in the basis; nullopt for degenerate (or
    /// otherwise absent) functions, which project to zero in Q_n.
    std::optional<int> index_of(const std::vector<std::uint32_t>& values) const {
        auto it = std::lower_bound(fns_.begin(), fns_.end(), values,
                                   [](const CubeFunction& f, const std::vector<std::uint32_t>& v) {
                                       return f.values < v;
                                   });
        if (it == fns_.end() || it->values != values) return std::nullopt;
        return static_cast<int>(it - fns_.begin());
    }

    bool operator==(const QBasis& other) const {
        return group_ == other.group_ && n_ == other.n_ && fns_ == other.fns_;
    }

private:
    FinAbGroup group_;
    int n_;
    std::vector<CubeFunction> fns_; // sorted by value table
};

namespace detail {

inline std::vector<CubeFunction> enumerate_chunk(const FinAbGroup& group, int n, std::uint64_t begin,
                                                 std::uint64_t end) {
    const std::uint64_t order = group.order();
    const std::size_t table = std::size_t{1} << n;
    std::vector<std::uint32_t> values(table);
    // decode the starting function: mixed radix, last vertex fastest
    std::uint64_t rest = begin;
    for (std::size_t v = table; v-- > 0;) {
        values[v] = static_cast<std::uint32_t>(rest % order);
        rest /= order;
    }
    std::vector<CubeFunction> out;
    for (std::uint64_t rank = begin; rank < end; ++rank) {
        if (!is_degenerate(values, n)) out.push_back(CubeFunction{values});
        // odometer step
        for (std::size_t v = table; v-- > 0;) {
            if (++values[v] < order) break;
            values[v] = 0;
        }
    }
    return out;
}

} // namespace detail

/// Number of functions C_n -> A, as an exact integer.
inline Int enumeration_size(const FinAbGroup& group, int n) {
    Int size = 1;
    const Int order = group.order();
    for (std::size_t v = 0; v < (std::size_t{1} << n); ++v) size *= order;
    return size;
}

/**
 * Basis of Q_n(A) by streaming enumeration of all |A|^(2^n) cube
 * functions, keeping only non-degenerate ones. Enumeration is chunked
 * across threads and merged in chunk order, so the result is deterministic.
 */
inline QBasis q_basis(const FinAbGroup& group, int n, std::uint64_t budget = k_default_budget) {
    if (n < 0) throw ValidationError("negative cube dimension");
    if (n >= 26) throw BudgetError("degree out of computational range: C_" + std::to_string(n) + " has 2^" +
                                   std::to_string(n) + " vertices");
    const Int total_big = enumeration_size(group, n);
    if (total_big > budget)
        throw BudgetError("degree out of computational range: Q_" + std::to_string(n) + "(" + group.to_spec() +
                          ") needs enumeration of " + total_big.str() + " functions, budget is " +
                          std::to_string(budget));
    const std::uint64_t total = total_big.convert_to<std::uint64_t>();

    std::vector<CubeFunction> fns;
    if (total >= (std::uint64_t{1} << 16)) {
        unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
        std::vector<std::future<std::vector<CubeFunction>>> parts;
        const std::uint64_t chunk = (total + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::uint64_t begin = w * chunk;
            std::uint64_t end = std::min(total, begin + chunk);
            if (begin >= end) break;
            parts.push_back(std::async(std::launch::async, detail::enumerate_chunk, std::cref(group), n, begin, end));
        }
        for (auto& p : parts) {
            auto part = p.get();
            fns.insert(fns.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        }
    } else {
        fns = detail::enumerate_chunk(group, n, 0, total);
    }
    return QBasis(group, n, std::move(fns));
}

/**
 * Matrix of the differential Q_n -> Q_{n-1} on the non-degenerate bases:
 * the alternating sum over positions i = 1..n of (paste - front - back)
 * face terms, where the paste face adds the two restrictions pointwise in
 * A. Images that are degenerate project to zero.
 */
inline SparseIntMatrix delta_matrix(const QBasis& src, const QBasis& dst) {
    const int n = src.degree();
    if (n == 0) throw ValidationError("no differential out of degree 0");
    if (dst.degree() != n - 1 || !(dst.group() == src.group()))
        throw ValidationError("delta_matrix basis mismatch");
    const FinAbGroup& group = src.group();
    SparseIntMatrix out(dst.rank(), src.rank());
    const std::uint32_t half = std::uint32_t{1} << (n - 1);
    std::vector<std::uint32_t> rvals(half), svals(half), pvals(half);
    for (int j = 0; j < src.rank(); ++j) {
        const auto& values = src.function(j).values;
        for (int i = 1; i <= n; ++i) {
            for (std::uint32_t e = 0; e < half; ++e) {
                rvals[e] = values[insert_coordinate(e, n - 1, i, 0)];
                svals[e] = values[insert_coordinate(e, n - 1, i, 1)];
                pvals[e] = static_cast<std::uint32_t>(group.add_index(rvals[e], svals[e]));
            }
            const int sign = (i % 2 == 0) ? 1 : -1; // (-1)^i
            if (auto p = dst.index_of(pvals)) out.add(*p, j, sign);
            if (auto r = dst.index_of(rvals)) out.add(*r, j, -sign);
            if (auto s = dst.index_of(svals)) out.add(*s, j, -sign);
        }
    }
    return out;
}

/// A bilinear pairing A x B -> C on element indices.
struct BilinearMap {
    FinAbGroup lhs, rhs, target;
    std::function<std::uint64_t(std::uint64_t, std::uint64_t)> mul;

    static BilinearMap from_ring(const RingTable& ring) {
        return BilinearMap{ring.additive(), ring.additive(), ring.additive(),
                           [&ring](std::uint64_t a, std::uint64_t b) { return ring.mul_index(a, b); }};
    }
};

/**
 * The pairing Q_n(A) (x) Q_m(B) -> Q_{n+m}(C) induced by a bilinear map:
 * the image of a basis pair (f, g) is the function on C_{n+m} = C_n x C_m
 * (f's coordinates first) whose value at (x, y) is mul(f(x), g(y)).
 * Source columns are indexed f-major. Degenerate images project to zero.
 */
inline SparseIntMatrix dixmier_matrix(const QBasis& a, const QBasis& b, const QBasis& target,
                                      const BilinearMap& mul) {
    const int n = a.degree(), m = b.degree();
    if (target.degree() != n + m) throw ValidationError("dixmier_matrix degree mismatch");
    if (!(a.group() == mul.lhs) || !(b.group() == mul.rhs) || !(target.group() == mul.target))
        throw ValidationError("dixmier_matrix group mismatch");
    SparseIntMatrix out(target.rank(), a.rank() * b.rank());
    const std::uint32_t mask_n = (std::uint32_t{1} << n) - 1;
    std::vector<std::uint32_t> values(std::size_t{1} << (n + m));
    for (int ia = 0; ia < a.rank(); ++ia) {
        const auto& fa = a.function(ia).values;
        for (int ib = 0; ib < b.rank(); ++ib) {
            const auto& fb = b.function(ib).values;
            for (std::uint32_t v = 0; v < values.size(); ++v)
                values[v] = static_cast<std::uint32_t>(mul.mul(fa[v & mask_n], fb[v >> n]));
            if (auto t = target.index_of(values)) out.add(*t, ia * b.rank() + ib, 1);
        }
    }
    return out;
}

/**
 * The augmentation Q_0(A) -> A: a basis class [a] maps to a, written in
 * invariant-factor coordinates (one matrix row per factor of A). Higher
 * degrees augment to zero since the target sits in degree 0.
 */
inline SparseIntMatrix augmentation_matrix(const QBasis& q0) {
    if (q0.degree() != 0) throw ValidationError("augmentation acts on degree 0");
    const FinAbGroup& group = q0.group();
    SparseIntMatrix out(static_cast<int>(group.num_factors()), q0.rank());
    for (int j = 0; j < q0.rank(); ++j) {
        auto coords = group.decode(q0.function(j).values[0]);
        for (std::size_t i = 0; i < coords.size(); ++i)
            if (coords[i] != 0) out.set(static_cast<int>(i), j, coords[i]);
    }
    return out;
}

/// U (+) V with U's factors listed first.
inline FinAbGroup direct_sum(const FinAbGroup& u, const FinAbGroup& v) {
    std::vector<std::uint64_t> factors = u.factors();
    factors.insert(factors.end(), v.factors().begin(), v.factors().end());
    return FinAbGroup(std::move(factors));
}

/**
 * The comparison map Q_n(U) (+) Q_n(V) -> Q_n(U (+) V) given by applying
 * the two inclusions pointwise to cube functions. Columns list the U block
 * first. It is a chain map, and a quasi-isomorphism.
 */
inline SparseIntMatrix additivity_map(const QBasis& u, const QBasis& v, const QBasis& uv) {
    const int n = u.degree();
    if (v.degree() != n || uv.degree() != n) throw ValidationError("additivity_map degree mismatch");
    if (!(uv.group() == direct_sum(u.group(), v.group())))
        throw ValidationError("additivity_map target is not the direct sum");
    const std::size_t ru = u.group().num_factors();
    const std::size_t rv = v.group().num_factors();
    SparseIntMatrix out(uv.rank(), u.rank() + v.rank());
    std::vector<std::uint32_t> values(std::size_t{1} << n);
    std::vector<std::uint32_t> coords(ru + rv, 0);
    for (int j = 0; j < u.rank(); ++j) {
        for (std::size_t x = 0; x < values.size(); ++x) {
            auto cu = u.group().decode(u.function(j).values[x]);
            std::fill(coords.begin(), coords.end(), 0);
            std::copy(cu.begin(), cu.end(), coords.begin());
            values[x] = static_cast<std::uint32_t>(uv.group().encode(coords));
        }
        if (auto t = uv.index_of(values)) out.add(*t, j, 1);
    }
    for (int j = 0; j < v.rank(); ++j) {
        for (std::size_t x = 0; x < values.size(); ++x) {
            auto cv = v.group().decode(v.function(j).values[x]);
            std::fill(coords.begin(), coords.end(), 0);
            std::copy(cv.begin(), cv.end(), coords.begin() + static_cast<std::ptrdiff_t>(ru));
            values[x] = static_cast<std::uint32_t>(uv.group().encode(coords));
        }
        if (auto t = uv.index_of(values)) out.add(*t, u.rank() + j, 1);
    }
    return out;
}

/// Optional hooks for obtaining bases and differentials from a cache (or
/// any other store) instead of recomputing them.
struct QProviders {
    std::function<QBasis(const FinAbGroup&, int, std::uint64_t)> basis;
    std::function<SparseIntMatrix(const FinAbGroup&, int, std::uint64_t)> delta;
};

inline QBasis provide_basis(const QProviders* p, const FinAbGroup& g, int n, std::uint64_t budget) {
    return p && p->basis ? p->basis(g, n, budget) : q_basis(g, n, budget);
}

inline SparseIntMatrix provide_delta(const QProviders* p, const FinAbGroup& g, int n, std::uint64_t budget,
                                     const QBasis& src, const QBasis& dst) {
    return p && p->delta ? p->delta(g, n, budget) : delta_matrix(src, dst);
}

/// Outcome of comparing H_k on both sides of the additivity map.
struct AdditivityVerdict {
    int degree = 0;
    FPAbelianGroup source; // H_k(Q(U)) (+) H_k(Q(V))
    FPAbelianGroup target; // H_k(Q(U (+) V))
    bool isomorphism = false;
};

/**
 * Checks that Q(U) (+) Q(V) -> Q(U (+) V) induces isomorphisms on homology
 * in degrees 0..max_k. The induced map is computed on cycle lattices; it is
 * an isomorphism precisely when it is surjective and the two canonical
 * forms agree (finitely generated abelian groups are Hopfian, so a
 * surjection between isomorphic groups is an isomorphism).
 */
inline std::vector<AdditivityVerdict> additivity_check(const FinAbGroup& u, const FinAbGroup& v, int max_k,
                                                       std::uint64_t budget = k_default_budget,
                                                       const QProviders* providers = nullptr) {
    const FinAbGroup uv = direct_sum(u, v);
    const int top = max_k + 1;
    std::vector<QBasis> bu, bv, buv;
    for (int n = 0; n <= top; ++n) {
        bu.push_back(provide_basis(providers, u, n, budget));
        bv.push_back(provide_basis(providers, v, n, budget));
        buv.push_back(provide_basis(providers, uv, n, budget));
    }
    // block-diagonal source complex, with the U block first
    auto source_delta = [&](int n) {
        SparseIntMatrix du = provide_delta(providers, u, n, budget, bu[static_cast<std::size_t>(n)],
                                           bu[static_cast<std::size_t>(n - 1)]);
        SparseIntMatrix dv = provide_delta(providers, v, n, budget, bv[static_cast<std::size_t>(n)],
                                           bv[static_cast<std::size_t>(n - 1)]);
        SparseIntMatrix out(du.rows() + dv.rows(), du.cols() + dv.cols());
        for (int c = 0; c < du.cols(); ++c)
            for (const auto& [r, val] : du.col(c)) out.set(r, c, val);
        for (int c = 0; c < dv.cols(); ++c)
            for (const auto& [r, val] : dv.col(c)) out.set(du.rows() + r, du.cols() + c, val);
        return out;
    };
    std::vector<SparseIntMatrix> ds, dt, phi;
    for (int n = 1; n <= top; ++n) {
        ds.push_back(source_delta(n));
        dt.push_back(provide_delta(providers, uv, n, budget, buv[static_cast<std::size_t>(n)],
                                   buv[static_cast<std::size_t>(n - 1)]));
    }
    for (int n = 0; n <= top; ++n)
        phi.push_back(additivity_map(bu[static_cast<std::size_t>(n)], bv[static_cast<std::size_t>(n)],
                                     buv[static_cast<std::size_t>(n)]));

    std::vector<AdditivityVerdict> out;
    for (int k = 0; k <= max_k; ++k) {
        AdditivityVerdict verdict;
        verdict.degree = k;
        const int s_dim = bu[static_cast<std::size_t>(k)].rank() + bv[static_cast<std::size_t>(k)].rank();
        const int t_dim = buv[static_cast<std::size_t>(k)].rank();

        auto cycles = [&](const SparseIntMatrix* d, int dim) {
            LatticeBasis z(dim);
            if (!d) {
                for (int i = 0; i < dim; ++i) {
                    std::vector<Int> e(static_cast<std::size_t>(dim), Int(0));
                    e[static_cast<std::size_t>(i)] = 1;
                    z.insert(std::move(e));
                }
            } else {
                for (auto& col : kernel_basis(*d)) z.insert(std::move(col));
            }
            return z;
        };
        LatticeBasis zs = cycles(k >= 1 ? &ds[static_cast<std::size_t>(k - 1)] : nullptr, s_dim);
        LatticeBasis zt = cycles(k >= 1 ? &dt[static_cast<std::size_t>(k - 1)] : nullptr, t_dim);

        LatticeBasis bs(s_dim), bt(t_dim);
        bs.insert_columns(ds[static_cast<std::size_t>(k)]);
        bt.insert_columns(dt[static_cast<std::size_t>(k)]);

        verdict.source = quotient_lattice(zs.basis_matrix(), bs.basis_matrix());
        verdict.target = quotient_lattice(zt.basis_matrix(), bt.basis_matrix());

        // induced map on cycle coordinates, then surjectivity mod boundaries
        const int r_s = zs.rank(), r_t = zt.rank();
        SparseIntMatrix phi_on_cycles = phi[static_cast<std::size_t>(k)] * zs.basis_matrix();
        SparseIntMatrix g(r_t, r_s + bt.rank());
        bool expressible = true;
        auto express_into = [&](const SparseIntMatrix& m, int col_offset) {
            for (int c = 0; c < m.cols(); ++c) {
                std::vector<Int> col(static_cast<std::size_t>(t_dim), Int(0));
                for (const auto& [r, val] : m.col(c)) col[static_cast<std::size_t>(r)] = val;
                auto x = zt.express(std::move(col));
                if (!x) {
                    expressible = false;
                    return;
                }
                for (int i = 0; i < r_t; ++i)
                    if ((*x)[static_cast<std::size_t>(i)] != 0) g.set(i, col_offset + c, (*x)[static_cast<std::size_t>(i)]);
            }
        };
        express_into(phi_on_cycles, 0);
        if (expressible) express_into(bt.basis_matrix(), r_s);
        bool surjective = false;
        if (expressible) {
            SNFResult s = snf(g, false);
            surjective = s.rank() == r_t;
            for (const auto& d : s.diag) surjective = surjective && d == 1;
        }
        verdict.isomorphism = expressible && surjective && verdict.source == verdict.target;
        out.push_back(std::move(verdict));
    }
    return out;
}

/// H_k of (Q_*(A), delta) in canonical form.
inline FPAbelianGroup q_homology(const FinAbGroup& group, int k, std::uint64_t budget = k_default_budget) {
    if (k < 0) throw ValidationError("negative homology degree");
    const int lo = k > 0 ? k - 1 : 0;
    const int hi = k + 1;
    std::vector<QBasis> bases;
    for (int n = lo; n <= hi; ++n) bases.push_back(q_basis(group, n, budget));
    FPComplex complex(lo, hi);
    for (int n = lo; n <= hi; ++n) complex.set_free_group(n, bases[static_cast<std::size_t>(n - lo)].rank());
    for (int n = lo + 1; n <= hi; ++n)
        complex.set_diff(n, delta_matrix(bases[static_cast<std::size_t>(n - lo)],
                                         bases[static_cast<std::size_t>(n - 1 - lo)]));
    return homology_of_fp_complex(complex, k);
}

} // namespace maclane
