#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maclane/abgroup.hpp"
#include "maclane/abop.hpp"
#include "maclane/intlinalg.hpp"
#include "maclane/qcomplex.hpp"

namespace maclane {

/// Compositions of q into p non-negative parts, lexicographically ascending.
inline std::vector<std::vector<int>> compositions(int q, int p) {
    std::vector<std::vector<int>> out;
    if (p == 0) {
        if (q == 0) out.push_back({});
        return out;
    }
    std::vector<int> comp(static_cast<std::size_t>(p), 0);
    // walk: first part from 0 to q, recurse on the rest
    std::function<void(int, int)> rec = [&](int slot, int remaining) {
        if (slot == p - 1) {
            comp[static_cast<std::size_t>(slot)] = remaining;
            out.push_back(comp);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            comp[static_cast<std::size_t>(slot)] = v;
            rec(slot + 1, remaining - v);
        }
    };
    rec(0, q);
    return out;
}

/**
 * The bidegree (p, q) piece of the bar bicomplex: a direct sum of copies of
 * the coefficient module M, one per composition q = q_1 + ... + q_p and
 * tensor tuple of Q-basis elements of those degrees. Generators are ordered
 * by (composition, M generator, tuple), tuples lexicographic with the last
 * factor fastest. In normalized mode, tuples containing the degree-0 unit
 * class are omitted.
 */
struct BarTerm {
    int p = 0, q = 0;
    int m_gens = 0;
    std::vector<std::vector<int>> comps;                // lex ascending
    std::vector<std::vector<std::vector<int>>> tuples;  // per composition, sorted
    std::vector<long long> comp_offset;                 // generator offset per composition
    long long total_gens = 0;

    std::optional<int> comp_index(const std::vector<int>& comp) const {
        auto it = std::lower_bound(comps.begin(), comps.end(), comp);
        if (it == comps.end() || *it != comp) return std::nullopt;
        return static_cast<int>(it - comps.begin());
    }

    long long tuple_count(int ci) const { return static_cast<long long>(tuples[static_cast<std::size_t>(ci)].size()); }

    long long gen_index(int ci, int m_idx, long long tuple_pos) const {
        return comp_offset[static_cast<std::size_t>(ci)] + m_idx * tuple_count(ci) + tuple_pos;
    }

    std::optional<long long> find(int ci, int m_idx, const std::vector<int>& tuple) const {
        const auto& list = tuples[static_cast<std::size_t>(ci)];
        auto it = std::lower_bound(list.begin(), list.end(), tuple);
        if (it == list.end() || *it != tuple) return std::nullopt;
        return gen_index(ci, m_idx, it - list.begin());
    }
};

/**
 * The totalized Hochschild complex of (Q_*(A), M) for a finite ring with
 * additive group A and bimodule M acting through the degree-0 augmentation.
 * Built over the window [0, K+1], which is exactly what homology in degrees
 * up to K needs. The total differential is the alternating face sum plus
 * (-1)^p times the internal Q-differential with Koszul signs; its square is
 * checked to vanish in the presented groups at construction time.
 */
class TotalComplex {
public:
    TotalComplex(RingTable ring, BimoduleTable module, int max_degree,
                 std::uint64_t budget = k_default_budget, bool normalized = false,
                 const QProviders* providers = nullptr)
        : ring_(std::move(ring)), module_(std::move(module)), k_(max_degree), normalized_(normalized),
          complex_(0, max_degree + 1) {
        if (max_degree < 0) throw ValidationError("max homology degree must be >= 0");
        if (!(module_.ring().additive() == ring_.additive()))
            throw ValidationError("bimodule is not over the given ring");
        build(budget, providers);
    }

    int max_degree() const { return k_; }
    const FPComplex& complex() const { return complex_; }
    const RingTable& ring() const { return ring_; }
    const BimoduleTable& module() const { return module_; }
    const QBasis& basis(int q) const { return bases_[static_cast<std::size_t>(q)]; }
    bool has_term(int p, int q) const { return terms_.count({p, q}) != 0; }
    const BarTerm& term(int p, int q) const { return terms_.at({p, q}); }

    /// Pieces (p, q) of total degree n, p ascending, with generator offsets.
    const std::vector<std::pair<int, int>>& pieces(int n) const { return degree_terms_[static_cast<std::size_t>(n)]; }
    long long piece_offset(int n, int p) const {
        const auto& ps = degree_terms_[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < ps.size(); ++i)
            if (ps[i].first == p) return degree_offsets_[static_cast<std::size_t>(n)][i];
        throw ValidationError("no piece at that bidegree");
    }

    FPAbelianGroup homology(int k) const {
        if (k < 0 || k > k_) throw ValidationError("homology degree outside the built window");
        return homology_of_fp_complex(complex_, k);
    }

private:
    void build(std::uint64_t budget, const QProviders* providers) {
        const FinAbGroup& a = ring_.additive();
        // Q bases and differentials up to internal degree K (bar terms at
        // total degree <= K+1 have p >= 1, so factor degrees stay <= K)
        for (int q = 0; q <= k_; ++q) {
            try {
                bases_.push_back(provide_basis(providers, a, q, budget));
            } catch (const BudgetError& e) {
                throw BudgetError(std::string(e.what()) + " (needed for bar term (1, " + std::to_string(q) + "))");
            }
        }
        for (int q = 1; q <= k_; ++q)
            deltas_.push_back(provide_delta(providers, a, q, budget, bases_[static_cast<std::size_t>(q)],
                                            bases_[static_cast<std::size_t>(q - 1)]));
        BilinearMap ring_mul = BilinearMap::from_ring(ring_);
        for (int n = 0; n <= k_; ++n)
            for (int m = 0; n + m <= k_; ++m)
                dixmier_.emplace(std::make_pair(n, m),
                                 dixmier_matrix(bases_[static_cast<std::size_t>(n)], bases_[static_cast<std::size_t>(m)],
                                                bases_[static_cast<std::size_t>(n + m)], ring_mul));

        // invariant factors of M and the action matrices of each degree-0
        // basis class on M, in M's coordinates
        const FinAbGroup& mg = module_.group();
        for (auto t : mg.factors()) m_factors_.push_back(Int(t));
        const int s = static_cast<int>(mg.num_factors());
        const QBasis& q0 = bases_[0];
        for (int j = 0; j < q0.rank(); ++j) {
            const std::uint64_t a_ix = q0.function(j).values[0];
            SparseIntMatrix left(s, s), right(s, s);
            for (int col = 0; col < s; ++col) {
                std::vector<std::uint32_t> e(static_cast<std::size_t>(s), 0);
                e[static_cast<std::size_t>(col)] = 1;
                const std::uint64_t gen = mg.encode(e);
                auto lc = mg.decode(module_.left_index(a_ix, gen));
                auto rc = mg.decode(module_.right_index(gen, a_ix));
                for (int row = 0; row < s; ++row) {
                    if (lc[static_cast<std::size_t>(row)]) left.set(row, col, lc[static_cast<std::size_t>(row)]);
                    if (rc[static_cast<std::size_t>(row)]) right.set(row, col, rc[static_cast<std::size_t>(row)]);
                }
            }
            left_act_.push_back(std::move(left));
            right_act_.push_back(std::move(right));
        }
        unit_class_ = q0.index_of({static_cast<std::uint32_t>(ring_.one_index())});

        // bar terms and degree layout
        for (int n = 0; n <= k_ + 1; ++n) {
            degree_terms_.emplace_back();
            degree_offsets_.emplace_back();
            long long offset = 0;
            for (int p = 0; p <= n; ++p) {
                const int q = n - p;
                if (p == 0 && q != 0) continue; // bar level 0 is M alone, concentrated in q = 0
                BarTerm term = make_term(p, q);
                degree_terms_.back().emplace_back(p, q);
                degree_offsets_.back().push_back(offset);
                offset += term.total_gens;
                terms_.emplace(std::make_pair(p, q), std::move(term));
            }
            const long long n_gens = offset;
            if (n_gens > (1ll << 31)) throw BudgetError("total complex degree " + std::to_string(n) + " too large");
            SparseIntMatrix rels(static_cast<int>(n_gens), static_cast<int>(n_gens));
            long long g = 0;
            for (std::size_t i = 0; i < degree_terms_.back().size(); ++i) {
                const BarTerm& term = terms_.at(degree_terms_.back()[i]);
                for (std::size_t ci = 0; ci < term.comps.size(); ++ci)
                    for (int m_idx = 0; m_idx < term.m_gens; ++m_idx)
                        for (long long tpos = 0; tpos < term.tuple_count(static_cast<int>(ci)); ++tpos) {
                            rels.set(static_cast<int>(g), static_cast<int>(g),
                                     m_factors_[static_cast<std::size_t>(m_idx)]);
                            ++g;
                        }
            }
            complex_.set_group(n, static_cast<int>(n_gens), std::move(rels));
        }

        for (int n = 1; n <= k_ + 1; ++n) complex_.set_diff(n, total_differential(n));
        complex_.validate(); // D^2 = 0 in the presented groups
    }

    BarTerm make_term(int p, int q) const {
        BarTerm term;
        term.p = p;
        term.q = q;
        term.m_gens = static_cast<int>(module_.group().num_factors());
        term.comps = compositions(q, p);
        term.tuples.resize(term.comps.size());
        term.comp_offset.resize(term.comps.size());
        long long offset = 0;
        for (std::size_t ci = 0; ci < term.comps.size(); ++ci) {
            const auto& comp = term.comps[ci];
            std::vector<int> tuple(static_cast<std::size_t>(p), 0);
            // odometer over basis positions, last slot fastest
            bool done = false;
            while (!done) {
                bool admissible = true;
                for (int i = 0; i < p && admissible; ++i) {
                    const int rank = bases_[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])].rank();
                    if (tuple[static_cast<std::size_t>(i)] >= rank) admissible = false;
                }
                if (!admissible) break; // some factor has rank 0: no tuples at all
                if (normalized_ && unit_class_) {
                    for (int i = 0; i < p; ++i)
                        if (comp[static_cast<std::size_t>(i)] == 0 &&
                            tuple[static_cast<std::size_t>(i)] == *unit_class_) {
                            admissible = false;
                            break;
                        }
                }
                if (admissible) term.tuples[ci].push_back(tuple);
                if (p == 0) break;
                done = true;
                for (int i = p; i-- > 0;) {
                    const int rank = bases_[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])].rank();
                    if (++tuple[static_cast<std::size_t>(i)] < rank) {
                        done = false;
                        break;
                    }
                    tuple[static_cast<std::size_t>(i)] = 0;
                }
            }
            term.comp_offset[ci] = offset;
            offset += term.m_gens * static_cast<long long>(term.tuples[ci].size());
        }
        term.total_gens = offset;
        return term;
    }

public:
    /**
     * The matrix of one bar face, read off the marked-set morphism: the
     * unique two-point fiber either merges two adjacent Q factors through
     * the ring pairing, or folds a degree-0 factor into the module slot by
     * the augmentation followed by the action the fiber order dictates
     * (module first = right action, module last = left action). No Koszul
     * sign arises since the folded factor has degree 0.
     */
    SparseIntMatrix face_matrix(const ABMorphism& d, const BarTerm& src, const BarTerm& dst) const {
        const int p = src.p;
        int merge_target = -1;
        for (int t = 0; t < d.target.size; ++t)
            if (d.fiber_orders[static_cast<std::size_t>(t)].size() == 2) {
                merge_target = t;
                break;
            }
        if (merge_target < 0) throw ValidationError("face morphism has no merged fiber");
        const auto& fiber = d.fiber_orders[static_cast<std::size_t>(merge_target)];
        // single source position feeding each unmerged target slot
        std::vector<int> slot_source(static_cast<std::size_t>(d.target.size), -1);
        for (int t = 0; t < d.target.size; ++t)
            if (t != merge_target) slot_source[static_cast<std::size_t>(t)] = d.fiber_orders[static_cast<std::size_t>(t)][0];

        SparseIntMatrix out(static_cast<int>(dst.total_gens), static_cast<int>(src.total_gens));
        std::vector<int> tgt_comp(static_cast<std::size_t>(dst.p));
        std::vector<int> tgt_tuple(static_cast<std::size_t>(dst.p));

        for (std::size_t ci = 0; ci < src.comps.size(); ++ci) {
            const auto& comp = src.comps[ci];
            auto deg_of = [&](int pos) { return pos == 0 ? 0 : comp[static_cast<std::size_t>(pos - 1)]; };

            if (merge_target >= 1) {
                const int s1 = fiber[0], s2 = fiber[1];
                const int d1 = deg_of(s1), d2 = deg_of(s2);
                for (int u = 1; u < d.target.size; ++u)
                    tgt_comp[static_cast<std::size_t>(u - 1)] =
                        u == merge_target ? d1 + d2 : deg_of(slot_source[static_cast<std::size_t>(u)]);
                auto tci = dst.comp_index(tgt_comp);
                if (!tci) continue;
                const SparseIntMatrix& dix = dixmier_.at({d1, d2});
                const int rank2 = bases_[static_cast<std::size_t>(d2)].rank();
                for (long long tpos = 0; tpos < src.tuple_count(static_cast<int>(ci)); ++tpos) {
                    const auto& tuple = src.tuples[ci][static_cast<std::size_t>(tpos)];
                    const int pair_col = tuple[static_cast<std::size_t>(s1 - 1)] * rank2 +
                                         tuple[static_cast<std::size_t>(s2 - 1)];
                    const auto& column = dix.col(pair_col);
                    if (column.empty()) continue; // merged monomial is degenerate
                    const int merged = column.begin()->first;
                    for (int u = 1; u < d.target.size; ++u)
                        tgt_tuple[static_cast<std::size_t>(u - 1)] =
                            u == merge_target ? merged
                                              : tuple[static_cast<std::size_t>(slot_source[static_cast<std::size_t>(u)] - 1)];
                    for (int m_idx = 0; m_idx < src.m_gens; ++m_idx) {
                        auto tgt = dst.find(*tci, m_idx, tgt_tuple);
                        if (tgt)
                            out.add(static_cast<int>(*tgt), static_cast<int>(src.gen_index(static_cast<int>(ci), m_idx, tpos)),
                                    column.begin()->second);
                    }
                }
            } else {
                // fold into the module slot
                const bool module_first = fiber[0] == 0;
                const int s = module_first ? fiber[1] : fiber[0];
                if (deg_of(s) != 0) continue; // the module sits in degree 0
                for (int u = 1; u < d.target.size; ++u)
                    tgt_comp[static_cast<std::size_t>(u - 1)] = deg_of(slot_source[static_cast<std::size_t>(u)]);
                auto tci = dst.comp_index(tgt_comp);
                if (!tci) continue;
                for (long long tpos = 0; tpos < src.tuple_count(static_cast<int>(ci)); ++tpos) {
                    const auto& tuple = src.tuples[ci][static_cast<std::size_t>(tpos)];
                    const int a_pos = tuple[static_cast<std::size_t>(s - 1)];
                    const SparseIntMatrix& act = module_first ? right_act_[static_cast<std::size_t>(a_pos)]
                                                              : left_act_[static_cast<std::size_t>(a_pos)];
                    for (int u = 1; u < d.target.size; ++u)
                        tgt_tuple[static_cast<std::size_t>(u - 1)] =
                            tuple[static_cast<std::size_t>(slot_source[static_cast<std::size_t>(u)] - 1)];
                    for (int m_idx = 0; m_idx < src.m_gens; ++m_idx) {
                        for (const auto& [row, val] : act.col(m_idx)) {
                            auto tgt = dst.find(*tci, row, tgt_tuple);
                            if (tgt)
                                out.add(static_cast<int>(*tgt),
                                        static_cast<int>(src.gen_index(static_cast<int>(ci), m_idx, tpos)), val);
                        }
                    }
                }
            }
        }
        return out;
    }

    /// Internal Q-differential on a bar term, with Koszul signs over the
    /// factors to the left of the slot being differentiated.
    SparseIntMatrix internal_matrix(const BarTerm& src, const BarTerm& dst) const {
        const int p = src.p;
        SparseIntMatrix out(static_cast<int>(dst.total_gens), static_cast<int>(src.total_gens));
        std::vector<int> tgt_comp(static_cast<std::size_t>(p));
        std::vector<int> tgt_tuple(static_cast<std::size_t>(p));
        for (std::size_t ci = 0; ci < src.comps.size(); ++ci) {
            const auto& comp = src.comps[ci];
            int prefix = 0; // q_1 + ... + q_{i-1}
            for (int slot = 1; slot <= p; ++slot) {
                const int qi = comp[static_cast<std::size_t>(slot - 1)];
                if (qi >= 1) {
                    const int koszul = prefix % 2 == 0 ? 1 : -1;
                    tgt_comp.assign(comp.begin(), comp.end());
                    tgt_comp[static_cast<std::size_t>(slot - 1)] = qi - 1;
                    auto tci = dst.comp_index(tgt_comp);
                    if (tci) {
                        const SparseIntMatrix& delta = deltas_[static_cast<std::size_t>(qi - 1)];
                        for (long long tpos = 0; tpos < src.tuple_count(static_cast<int>(ci)); ++tpos) {
                            const auto& tuple = src.tuples[ci][static_cast<std::size_t>(tpos)];
                            tgt_tuple.assign(tuple.begin(), tuple.end());
                            for (const auto& [row, val] : delta.col(tuple[static_cast<std::size_t>(slot - 1)])) {
                                tgt_tuple[static_cast<std::size_t>(slot - 1)] = row;
                                for (int m_idx = 0; m_idx < src.m_gens; ++m_idx) {
                                    auto tgt = dst.find(*tci, m_idx, tgt_tuple);
                                    if (tgt)
                                        out.add(static_cast<int>(*tgt),
                                                static_cast<int>(src.gen_index(static_cast<int>(ci), m_idx, tpos)),
                                                koszul * val);
                                }
                            }
                        }
                    }
                }
                prefix += qi;
            }
        }
        return out;
    }

private:
    SparseIntMatrix total_differential(int n) const {
        SparseIntMatrix out(complex_.gens(n - 1), complex_.gens(n));
        for (std::size_t i = 0; i < degree_terms_[static_cast<std::size_t>(n)].size(); ++i) {
            const auto [p, q] = degree_terms_[static_cast<std::size_t>(n)][i];
            const long long src_off = degree_offsets_[static_cast<std::size_t>(n)][i];
            const BarTerm& src = terms_.at({p, q});
            if (p >= 1 && src.total_gens > 0) {
                auto dst_it = terms_.find({p - 1, q});
                if (dst_it != terms_.end() && dst_it->second.total_gens > 0) {
                    const BarTerm& dst = dst_it->second;
                    const long long dst_off = piece_offset(n - 1, p - 1);
                    auto faces = face_morphisms(p);
                    for (int fi = 0; fi <= p; ++fi) {
                        SparseIntMatrix block = face_matrix(faces[static_cast<std::size_t>(fi)], src, dst);
                        const int sign = fi % 2 == 0 ? 1 : -1;
                        for (int c = 0; c < block.cols(); ++c)
                            for (const auto& [r, v] : block.col(c))
                                out.add(static_cast<int>(dst_off + r), static_cast<int>(src_off + c), sign * v);
                    }
                }
            }
            if (q >= 1 && p >= 1 && src.total_gens > 0) {
                auto dst_it = terms_.find({p, q - 1});
                if (dst_it != terms_.end() && dst_it->second.total_gens > 0) {
                    const BarTerm& dst = dst_it->second;
                    const long long dst_off = piece_offset(n - 1, p);
                    SparseIntMatrix block = internal_matrix(src, dst);
                    const int sign = p % 2 == 0 ? 1 : -1; // (-1)^p
                    for (int c = 0; c < block.cols(); ++c)
                        for (const auto& [r, v] : block.col(c))
                            out.add(static_cast<int>(dst_off + r), static_cast<int>(src_off + c), sign * v);
                }
            }
        }
        return out;
    }

    RingTable ring_;
    BimoduleTable module_;
    int k_;
    bool normalized_;
    std::vector<QBasis> bases_;
    std::vector<SparseIntMatrix> deltas_; // deltas_[q-1] : Q_q -> Q_{q-1}
    std::map<std::pair<int, int>, SparseIntMatrix> dixmier_;
    std::vector<SparseIntMatrix> left_act_, right_act_;
    std::vector<Int> m_factors_;
    std::optional<int> unit_class_;
    std::map<std::pair<int, int>, BarTerm> terms_;
    std::vector<std::vector<std::pair<int, int>>> degree_terms_;
    std::vector<std::vector<long long>> degree_offsets_;
    FPComplex complex_;
};

/// The bidegree (p, q) bar group alone, as a presented abelian group
/// datum: one copy of M per admissible tensor tuple.
inline BarTerm bar_term(const RingTable& ring, const BimoduleTable& module, int p, int q,
                        std::uint64_t budget = k_default_budget) {
    TotalComplex tc(ring, module, p + q, budget);
    return tc.term(p, q);
}

/// MacLane homology of (R, M) in degree k.
inline FPAbelianGroup hml(const RingTable& ring, const BimoduleTable& module, int k,
                          std::uint64_t budget = k_default_budget, bool normalized = false,
                          const QProviders* providers = nullptr) {
    TotalComplex tc(ring, module, k, budget, normalized, providers);
    return tc.homology(k);
}

} // namespace maclane
