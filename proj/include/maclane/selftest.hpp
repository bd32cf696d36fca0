#pragma once

#include <random>
#include <string>
#include <vector>

#include "maclane/abgroup.hpp"
#include "maclane/abop.hpp"
#include "maclane/hochschild.hpp"
#include "maclane/intlinalg.hpp"
#include "maclane/qcomplex.hpp"
#include "maclane/reference_snf.hpp"

namespace maclane {

struct CheckResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

namespace selftest_detail {

inline Int bareiss_det(DenseMat a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) return 0;
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

inline SparseIntMatrix random_matrix(std::mt19937_64& rng, int max_dim, int max_abs) {
    std::uniform_int_distribution<int> dim(1, max_dim), entry(-max_abs, max_abs);
    const int m = dim(rng), n = dim(rng);
    SparseIntMatrix a(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            int v = entry(rng);
            if (v) a.set(i, j, v);
        }
    return a;
}

inline FPAbelianGroup canonical_group(const FinAbGroup& a) {
    const int r = static_cast<int>(a.num_factors());
    SparseIntMatrix rel(r, r);
    for (int i = 0; i < r; ++i) rel.set(i, i, Int(a.factors()[static_cast<std::size_t>(i)]));
    return quotient_lattice(SparseIntMatrix::identity(r), rel);
}

inline DeltaOpMorphism random_interval_map(std::mt19937_64& rng, int n, int m) {
    std::uniform_int_distribution<int> val(0, m + 1);
    DeltaOpMorphism f;
    f.n = n;
    f.m = m;
    f.map.resize(static_cast<std::size_t>(n + 2));
    std::vector<int> middle(static_cast<std::size_t>(n));
    for (auto& v : middle) v = val(rng);
    std::sort(middle.begin(), middle.end());
    f.map[0] = 0;
    for (int i = 0; i < n; ++i) f.map[static_cast<std::size_t>(i + 1)] = middle[static_cast<std::size_t>(i)];
    f.map[static_cast<std::size_t>(n + 1)] = m + 1;
    return f;
}

inline ABMorphism random_ab_morphism(std::mt19937_64& rng, int src_size, int tgt_size) {
    ABMorphism f;
    f.source = ABObject{src_size, {}};
    f.target = ABObject{tgt_size, {}};
    std::uniform_int_distribution<int> pick(0, tgt_size - 1);
    f.map.resize(static_cast<std::size_t>(src_size));
    f.fiber_orders.resize(static_cast<std::size_t>(tgt_size));
    for (int s = 0; s < src_size; ++s) {
        f.map[static_cast<std::size_t>(s)] = pick(rng);
        f.fiber_orders[static_cast<std::size_t>(f.map[static_cast<std::size_t>(s)])].push_back(s);
    }
    for (auto& fiber : f.fiber_orders) std::shuffle(fiber.begin(), fiber.end(), rng);
    return f;
}

/// The classical bar faces written out directly (adjacent multiplication,
/// wrap-around through the left action), bypassing the marked-set
/// morphisms entirely. Used to confirm both descriptions coincide.
inline SparseIntMatrix classical_face(const TotalComplex& tc, int face, const BarTerm& src, const BarTerm& dst) {
    const int p = src.p;
    const BimoduleTable& mod = tc.module();
    const FinAbGroup& mg = mod.group();
    const int s = src.m_gens;
    SparseIntMatrix out(static_cast<int>(dst.total_gens), static_cast<int>(src.total_gens));
    BilinearMap mul = BilinearMap::from_ring(tc.ring());
    for (std::size_t ci = 0; ci < src.comps.size(); ++ci) {
        const auto& comp = src.comps[ci];
        std::vector<int> tgt_comp;
        if (face == 0 || face == p) {
            const int slot = face == 0 ? 0 : p - 1;
            if (comp[static_cast<std::size_t>(slot)] != 0) continue;
            for (int i = 0; i < p; ++i)
                if (i != slot) tgt_comp.push_back(comp[static_cast<std::size_t>(i)]);
        } else {
            for (int i = 0; i < p; ++i) {
                if (i == face - 1)
                    tgt_comp.push_back(comp[static_cast<std::size_t>(i)] + comp[static_cast<std::size_t>(i + 1)]);
                else if (i != face)
                    tgt_comp.push_back(comp[static_cast<std::size_t>(i)]);
            }
        }
        auto tci = dst.comp_index(tgt_comp);
        if (!tci) continue;
        for (long long tpos = 0; tpos < src.tuple_count(static_cast<int>(ci)); ++tpos) {
            const auto& tuple = src.tuples[ci][static_cast<std::size_t>(tpos)];
            if (face == 0 || face == p) {
                const int slot = face == 0 ? 0 : p - 1;
                const std::uint64_t a =
                    tc.basis(0).function(tuple[static_cast<std::size_t>(slot)]).values[0];
                std::vector<int> tgt_tuple;
                for (int i = 0; i < p; ++i)
                    if (i != slot) tgt_tuple.push_back(tuple[static_cast<std::size_t>(i)]);
                for (int m_idx = 0; m_idx < s; ++m_idx) {
                    std::vector<std::uint32_t> e(mg.num_factors(), 0);
                    e[static_cast<std::size_t>(m_idx)] = 1;
                    const std::uint64_t gen = mg.encode(e);
                    const std::uint64_t image =
                        face == 0 ? mod.right_index(gen, a) : mod.left_index(a, gen);
                    auto coords = mg.decode(image);
                    for (std::size_t row = 0; row < coords.size(); ++row)
                        if (coords[row] != 0) {
                            auto tgt = dst.find(*tci, static_cast<int>(row), tgt_tuple);
                            if (tgt)
                                out.add(static_cast<int>(*tgt),
                                        static_cast<int>(src.gen_index(static_cast<int>(ci), m_idx, tpos)),
                                        coords[row]);
                        }
                }
            } else {
                const int qa = comp[static_cast<std::size_t>(face - 1)];
                const int qb = comp[static_cast<std::size_t>(face)];
                const auto& fa = tc.basis(qa).function(tuple[static_cast<std::size_t>(face - 1)]).values;
                const auto& fb = tc.basis(qb).function(tuple[static_cast<std::size_t>(face)]).values;
                std::vector<std::uint32_t> merged(std::size_t{1} << (qa + qb));
                const std::uint32_t mask = (std::uint32_t{1} << qa) - 1;
                for (std::uint32_t v = 0; v < merged.size(); ++v)
                    merged[v] = static_cast<std::uint32_t>(mul.mul(fa[v & mask], fb[v >> qa]));
                auto mi = tc.basis(qa + qb).index_of(merged);
                if (!mi) continue;
                std::vector<int> tgt_tuple;
                for (int i = 0; i < p; ++i) {
                    if (i == face - 1)
                        tgt_tuple.push_back(*mi);
                    else if (i != face)
                        tgt_tuple.push_back(tuple[static_cast<std::size_t>(i)]);
                }
                for (int m_idx = 0; m_idx < s; ++m_idx) {
                    auto tgt = dst.find(*tci, m_idx, tgt_tuple);
                    if (tgt)
                        out.add(static_cast<int>(*tgt),
                                static_cast<int>(src.gen_index(static_cast<int>(ci), m_idx, tpos)), 1);
                }
            }
        }
    }
    return out;
}

} // namespace selftest_detail

inline CheckResult check_snf_reference_agreement(int trials = 200) {
    std::mt19937_64 rng(12345);
    for (int t = 0; t < trials; ++t) {
        SparseIntMatrix a = selftest_detail::random_matrix(rng, 6, 9);
        auto got = snf(a, false).diag;
        auto want = reference_invariant_factors(a.to_dense());
        if (got != want)
            return {"snf-reference-agreement", false, "mismatch on trial " + std::to_string(t)};
    }
    return {"snf-reference-agreement", true, std::to_string(trials) + " random matrices"};
}

inline CheckResult check_snf_transforms(int trials = 60) {
    std::mt19937_64 rng(54321);
    for (int t = 0; t < trials; ++t) {
        SparseIntMatrix a = selftest_detail::random_matrix(rng, 5, 9);
        SNFResult s = snf(a, true);
        Int du = selftest_detail::bareiss_det(s.U);
        Int dv = selftest_detail::bareiss_det(s.V);
        if (du * du != 1 || dv * dv != 1)
            return {"snf-transform-identity", false, "non-unimodular transform on trial " + std::to_string(t)};
        // U * A * V == diag(D)
        SparseIntMatrix prod = SparseIntMatrix::from_dense(s.U) * a * SparseIntMatrix::from_dense(s.V);
        SparseIntMatrix diag(a.rows(), a.cols());
        for (int i = 0; i < s.rank(); ++i) diag.set(i, i, s.diag[static_cast<std::size_t>(i)]);
        if (!(prod == diag))
            return {"snf-transform-identity", false, "UAV != D on trial " + std::to_string(t)};
    }
    return {"snf-transform-identity", true, std::to_string(trials) + " random matrices"};
}

inline CheckResult check_snf_idempotence() {
    const std::vector<std::vector<int>> chains = {{1}, {2}, {2, 4}, {1, 2, 6}, {3, 3, 9}, {1, 1, 1}, {2, 2, 4, 8}};
    for (const auto& chain : chains) {
        SparseIntMatrix d(static_cast<int>(chain.size()), static_cast<int>(chain.size()));
        for (std::size_t i = 0; i < chain.size(); ++i) d.set(static_cast<int>(i), static_cast<int>(i), chain[i]);
        auto got = snf(d, false).diag;
        std::vector<Int> want(chain.begin(), chain.end());
        if (got != want) return {"snf-idempotence", false, "chain altered"};
    }
    return {"snf-idempotence", true, ""};
}

inline CheckResult check_delta_squared(std::uint64_t budget = k_default_budget) {
    const std::vector<std::string> specs = {"Z/2", "Z/3", "Z/4", "Z/2 x Z/2"};
    for (const auto& spec : specs) {
        FinAbGroup a = FinAbGroup::parse(spec);
        std::vector<QBasis> bases;
        for (int n = 0; n <= 3; ++n) bases.push_back(q_basis(a, n, budget));
        for (int n = 2; n <= 3; ++n) {
            SparseIntMatrix d_hi = delta_matrix(bases[static_cast<std::size_t>(n)], bases[static_cast<std::size_t>(n - 1)]);
            SparseIntMatrix d_lo = delta_matrix(bases[static_cast<std::size_t>(n - 1)], bases[static_cast<std::size_t>(n - 2)]);
            if (!(d_lo * d_hi).is_zero())
                return {"delta-squared", false, spec + " at degree " + std::to_string(n)};
        }
    }
    return {"delta-squared", true, "groups of order <= 4, degrees <= 3"};
}

inline CheckResult check_n_stability(std::uint64_t budget = k_default_budget) {
    // the differential computed on all of Q', restricted to degenerate
    // monomials, must have zero net coefficient on every non-degenerate one
    const std::vector<std::string> specs = {"Z/2", "Z/3"};
    for (const auto& spec : specs) {
        FinAbGroup group = FinAbGroup::parse(spec);
        for (int n = 1; n <= 3; ++n) {
            const Int total_big = enumeration_size(group, n);
            if (total_big > budget) return {"n-stability", false, "budget too small for the sweep"};
            const std::uint64_t total = total_big.convert_to<std::uint64_t>();
            const std::uint64_t order = group.order();
            const std::size_t table = std::size_t{1} << n;
            std::vector<std::uint32_t> values(table, 0);
            for (std::uint64_t rank = 0; rank < total; ++rank) {
                if (rank > 0) {
                    for (std::size_t v = table; v-- > 0;) {
                        if (++values[v] < order) break;
                        values[v] = 0;
                    }
                }
                if (!is_degenerate(values, n)) continue;
                std::map<std::vector<std::uint32_t>, long long> image;
                const std::uint32_t half = std::uint32_t{1} << (n - 1);
                for (int i = 1; i <= n; ++i) {
                    std::vector<std::uint32_t> rv(half), sv(half), pv(half);
                    for (std::uint32_t e = 0; e < half; ++e) {
                        rv[e] = values[insert_coordinate(e, n - 1, i, 0)];
                        sv[e] = values[insert_coordinate(e, n - 1, i, 1)];
                        pv[e] = static_cast<std::uint32_t>(group.add_index(rv[e], sv[e]));
                    }
                    const int sign = (i % 2 == 0) ? 1 : -1;
                    image[pv] += sign;
                    image[rv] -= sign;
                    image[sv] -= sign;
                }
                for (const auto& [monomial, coeff] : image)
                    if (coeff != 0 && !is_degenerate(monomial, n - 1))
                        return {"n-stability", false,
                                spec + ": degenerate monomial at degree " + std::to_string(n) +
                                    " leaks outside the degenerate span"};
            }
        }
    }
    return {"n-stability", true, "|A| <= 3, degrees <= 3"};
}

inline CheckResult check_dixmier_leibniz(std::uint64_t budget = k_default_budget) {
    const std::vector<std::string> specs = {"Z/2", "Z/3"};
    for (const auto& spec : specs) {
        RingTable ring = RingTable::from_spec(spec);
        const FinAbGroup& a = ring.additive();
        BilinearMap mul = BilinearMap::from_ring(ring);
        std::vector<QBasis> bases;
        for (int n = 0; n <= 3; ++n) bases.push_back(q_basis(a, n, budget));
        std::vector<SparseIntMatrix> deltas; // deltas[n] : Q_{n+1} -> Q_n
        for (int n = 1; n <= 3; ++n)
            deltas.push_back(delta_matrix(bases[static_cast<std::size_t>(n)], bases[static_cast<std::size_t>(n - 1)]));
        auto dix = [&](int n, int m) {
            return dixmier_matrix(bases[static_cast<std::size_t>(n)], bases[static_cast<std::size_t>(m)],
                                  bases[static_cast<std::size_t>(n + m)], mul);
        };
        for (int n = 0; n <= 3; ++n)
            for (int m = 0; n + m <= 3; ++m) {
                if (n + m < 1) continue;
                SparseIntMatrix lhs = deltas[static_cast<std::size_t>(n + m - 1)] * dix(n, m);
                SparseIntMatrix rhs(lhs.rows(), lhs.cols());
                if (n >= 1)
                    rhs = rhs + dix(n - 1, m) * kronecker(deltas[static_cast<std::size_t>(n - 1)],
                                                          SparseIntMatrix::identity(bases[static_cast<std::size_t>(m)].rank()));
                if (m >= 1) {
                    SparseIntMatrix term =
                        dix(n, m - 1) * kronecker(SparseIntMatrix::identity(bases[static_cast<std::size_t>(n)].rank()),
                                                  deltas[static_cast<std::size_t>(m - 1)]);
                    rhs = rhs + (n % 2 == 0 ? term : -term);
                }
                if (!(lhs == rhs))
                    return {"dixmier-leibniz", false,
                            spec + " at bidegree (" + std::to_string(n) + ", " + std::to_string(m) + ")"};
            }
    }
    return {"dixmier-leibniz", true, "total degree <= 3 over Z/2 and Z/3"};
}

inline CheckResult check_dixmier_associativity(std::uint64_t budget = k_default_budget) {
    const std::vector<std::string> specs = {"Z/2", "Z/3"};
    for (const auto& spec : specs) {
        RingTable ring = RingTable::from_spec(spec);
        const FinAbGroup& a = ring.additive();
        BilinearMap mul = BilinearMap::from_ring(ring);
        std::vector<QBasis> bases;
        for (int n = 0; n <= 2; ++n) bases.push_back(q_basis(a, n, budget));
        auto dix = [&](int n, int m) {
            return dixmier_matrix(bases[static_cast<std::size_t>(n)], bases[static_cast<std::size_t>(m)],
                                  bases[static_cast<std::size_t>(n + m)], mul);
        };
        for (int n = 0; n <= 2; ++n)
            for (int m = 0; n + m <= 2; ++m)
                for (int k = 0; n + m + k <= 2; ++k) {
                    SparseIntMatrix lhs =
                        dix(n + m, k) * kronecker(dix(n, m),
                                                  SparseIntMatrix::identity(bases[static_cast<std::size_t>(k)].rank()));
                    SparseIntMatrix rhs =
                        dix(n, m + k) * kronecker(SparseIntMatrix::identity(bases[static_cast<std::size_t>(n)].rank()),
                                                  dix(m, k));
                    if (!(lhs == rhs))
                        return {"dixmier-associativity", false,
                                spec + " at (" + std::to_string(n) + "," + std::to_string(m) + "," +
                                    std::to_string(k) + ")"};
                }
    }
    return {"dixmier-associativity", true, "total degree <= 2 over Z/2 and Z/3"};
}

inline CheckResult check_augmentation_monoidal(std::uint64_t budget = k_default_budget) {
    const std::vector<std::string> specs = {"Z/2", "Z/3", "Z/4"};
    for (const auto& spec : specs) {
        RingTable ring = RingTable::from_spec(spec);
        const FinAbGroup& a = ring.additive();
        QBasis q0 = q_basis(a, 0, budget);
        SparseIntMatrix aug = augmentation_matrix(q0);
        SparseIntMatrix dix = dixmier_matrix(q0, q0, q0, BilinearMap::from_ring(ring));
        SparseIntMatrix lhs = aug * dix; // eps(x . y) on pair columns
        for (int ia = 0; ia < q0.rank(); ++ia)
            for (int ib = 0; ib < q0.rank(); ++ib) {
                const std::uint64_t prod = ring.mul_index(q0.function(ia).values[0], q0.function(ib).values[0]);
                auto coords = a.decode(prod);
                const int col = ia * q0.rank() + ib;
                for (std::size_t row = 0; row < coords.size(); ++row) {
                    Int diff = lhs.at(static_cast<int>(row), col) - Int(coords[row]);
                    if (diff % Int(a.factors()[row]) != 0)
                        return {"augmentation-monoidal", false, spec + " fails on a degree-0 pair"};
                }
            }
    }
    return {"augmentation-monoidal", true, "all degree-0 pairs over Z/2, Z/3, Z/4"};
}

inline CheckResult check_augmentation_chain_map(std::uint64_t budget = k_default_budget) {
    const std::vector<std::string> specs = {"Z/2", "Z/3", "Z/4"};
    for (const auto& spec : specs) {
        FinAbGroup a = FinAbGroup::parse(spec);
        QBasis q0 = q_basis(a, 0, budget);
        QBasis q1 = q_basis(a, 1, budget);
        SparseIntMatrix composite = augmentation_matrix(q0) * delta_matrix(q1, q0);
        for (int c = 0; c < composite.cols(); ++c)
            for (const auto& [row, v] : composite.col(c))
                if (v % Int(a.factors()[static_cast<std::size_t>(row)]) != 0)
                    return {"augmentation-chain-map", false, spec + ": eps(delta x) != 0 in A"};
    }
    return {"augmentation-chain-map", true, "eps . delta vanishes into A"};
}

inline CheckResult check_total_d_squared(std::uint64_t budget = k_default_budget) {
    struct Case {
        const char* spec;
        int k;
    };
    const std::vector<Case> cases = {{"Z/2", 3}, {"Z/3", 2}, {"Z/4", 2}};
    for (const auto& c : cases) {
        try {
            RingTable ring = RingTable::from_spec(c.spec);
            TotalComplex tc(ring, self_bimodule(ring), c.k, budget); // ctor asserts D^2 = 0
        } catch (const std::exception& e) {
            return {"total-d-squared", false, std::string(c.spec) + ": " + e.what()};
        }
    }
    return {"total-d-squared", true, "Z/2 at K=3; Z/3, Z/4 at K=2"};
}

inline CheckResult check_simplicial_identities() {
    for (int p = 2; p <= 5; ++p) {
        auto faces_p = face_morphisms(p);
        auto faces_lo = face_morphisms(p - 1);
        for (int j = 1; j <= p; ++j)
            for (int i = 0; i < j; ++i) {
                ABMorphism lhs = compose_ab(faces_lo[static_cast<std::size_t>(i)], faces_p[static_cast<std::size_t>(j)]);
                ABMorphism rhs =
                    compose_ab(faces_lo[static_cast<std::size_t>(j - 1)], faces_p[static_cast<std::size_t>(i)]);
                if (!(lhs == rhs))
                    return {"simplicial-identities", false,
                            "d_" + std::to_string(i) + " d_" + std::to_string(j) + " at level " + std::to_string(p)};
            }
    }
    return {"simplicial-identities", true, "levels <= 5, fiber orders included"};
}

inline CheckResult check_chi_functoriality(int trials = 200) {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> level(0, 4);
    for (int t = 0; t < trials; ++t) {
        const int n = level(rng), m = level(rng), k = level(rng);
        DeltaOpMorphism f = selftest_detail::random_interval_map(rng, n, m);
        DeltaOpMorphism g = selftest_detail::random_interval_map(rng, m, k);
        ABMorphism lhs = chi(compose_delta_op(g, f));
        ABMorphism rhs = compose_ab(chi(g), chi(f));
        if (!(lhs == rhs)) return {"chi-functoriality", false, "trial " + std::to_string(t)};
    }
    return {"chi-functoriality", true, std::to_string(trials) + " random composable pairs"};
}

inline CheckResult check_compose_associativity(int trials = 100) {
    std::mt19937_64 rng(999);
    std::uniform_int_distribution<int> size(1, 6);
    for (int t = 0; t < trials; ++t) {
        const int s0 = size(rng), s1 = size(rng), s2 = size(rng), s3 = size(rng);
        ABMorphism f = selftest_detail::random_ab_morphism(rng, s0, s1);
        ABMorphism g = selftest_detail::random_ab_morphism(rng, s1, s2);
        ABMorphism h = selftest_detail::random_ab_morphism(rng, s2, s3);
        if (!(compose_ab(h, compose_ab(g, f)) == compose_ab(compose_ab(h, g), f)))
            return {"compose-associativity", false, "trial " + std::to_string(t)};
    }
    return {"compose-associativity", true, std::to_string(trials) + " random triples"};
}

inline CheckResult check_faces_match_classical(std::uint64_t budget = k_default_budget) {
    RingTable ring = RingTable::from_spec("Z/2");
    TotalComplex tc(ring, self_bimodule(ring), 3, budget);
    for (int p = 1; p <= 3; ++p) {
        auto faces = face_morphisms(p);
        for (int q = 0; q <= 2 && p + q <= 4; ++q) {
            if (!tc.has_term(p, q) || !tc.has_term(p - 1, q)) continue; // zero on either side
            const BarTerm& src = tc.term(p, q);
            const BarTerm& dst = tc.term(p - 1, q);
            for (int i = 0; i <= p; ++i) {
                SparseIntMatrix from_chi = tc.face_matrix(faces[static_cast<std::size_t>(i)], src, dst);
                SparseIntMatrix classical = selftest_detail::classical_face(tc, i, src, dst);
                if (!(from_chi == classical))
                    return {"faces-match-classical", false,
                            "d_" + std::to_string(i) + " at (p, q) = (" + std::to_string(p) + ", " +
                                std::to_string(q) + ")"};
            }
        }
    }
    return {"faces-match-classical", true, "p <= 3, q <= 2 over Z/2"};
}

inline CheckResult check_h0_recovers_group(std::uint64_t budget = k_default_budget) {
    const std::vector<std::vector<std::uint64_t>> groups = {{2}, {3}, {4}, {2, 2}, {5}, {6},
                                                            {7}, {8}, {2, 4}, {2, 2, 2}};
    for (const auto& factors : groups) {
        FinAbGroup a{std::vector<std::uint64_t>(factors)};
        FPAbelianGroup h0 = q_homology(a, 0, budget);
        if (!(h0 == selftest_detail::canonical_group(a)))
            return {"h0-recovers-group", false, a.to_spec() + " gives " + h0.to_string()};
    }
    return {"h0-recovers-group", true, "all groups of order <= 8"};
}

inline CheckResult check_normalized_equivalence(std::uint64_t budget = k_default_budget) {
    RingTable ring = RingTable::from_spec("Z/2");
    BimoduleTable mod = self_bimodule(ring);
    TotalComplex plain(ring, mod, 2, budget, false);
    TotalComplex reduced(ring, mod, 2, budget, true);
    for (int k = 0; k <= 2; ++k)
        if (!(plain.homology(k) == reduced.homology(k)))
            return {"normalized-equivalence", false, "degree " + std::to_string(k)};
    return {"normalized-equivalence", true, "Z/2 at K <= 2"};
}

inline CheckResult check_additivity(std::uint64_t budget = k_default_budget) {
    FinAbGroup z2 = FinAbGroup::parse("Z/2");
    auto verdicts = additivity_check(z2, z2, 2, budget);
    for (const auto& v : verdicts)
        if (!v.isomorphism)
            return {"additivity-quasi-iso", false,
                    "degree " + std::to_string(v.degree) + ": " + v.source.to_string() + " vs " +
                        v.target.to_string()};
    return {"additivity-quasi-iso", true, "H_k iso for k <= 2, U = V = Z/2"};
}

/// The structural invariant battery behind both the CLI selftest command
/// and the acceptance suite.
inline std::vector<CheckResult> run_selftest(std::uint64_t budget = k_default_budget, bool include_slow = true) {
    std::vector<CheckResult> out;
    out.push_back(check_snf_reference_agreement());
    out.push_back(check_snf_transforms());
    out.push_back(check_snf_idempotence());
    out.push_back(check_delta_squared(budget));
    out.push_back(check_n_stability(budget));
    out.push_back(check_dixmier_leibniz(budget));
    out.push_back(check_dixmier_associativity(budget));
    out.push_back(check_augmentation_monoidal(budget));
    out.push_back(check_augmentation_chain_map(budget));
    out.push_back(check_total_d_squared(budget));
    out.push_back(check_simplicial_identities());
    out.push_back(check_chi_functoriality());
    out.push_back(check_compose_associativity());
    out.push_back(check_faces_match_classical(budget));
    out.push_back(check_h0_recovers_group(budget));
    out.push_back(check_normalized_equivalence(budget));
    if (include_slow) out.push_back(check_additivity(budget));
    return out;
}

} // namespace maclane
