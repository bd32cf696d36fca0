#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "maclane/errors.hpp"

namespace maclane {

/**
 * A finite abelian group presented as Z/d_1 x ... x Z/d_r with every
 * d_i >= 2. The empty factor list is the trivial group.
 *
 * Elements are addressed two ways: as coordinate vectors (coords[i] in
 * [0, d_i)) or as a canonical index in [0, order). The canonical
 * enumeration is lexicographic on coordinates with coords[0] most
 * significant, so index 0 is always the zero element.
 */
class FinAbGroup {
public:
    FinAbGroup() = default;

    explicit FinAbGroup(std::vector<std::uint64_t> factors) : factors_(std::move(factors)) {
        for (auto d : factors_)
            if (d < 2) throw ParseError("group factor must be >= 2, got " + std::to_string(d));
        order_ = 1;
        for (auto d : factors_) {
            if (order_ > (std::uint64_t{1} << 62) / d)
                throw ValidationError("group order exceeds 2^62, not enumerable");
            order_ *= d;
        }
        strides_.assign(factors_.size(), 1);
        for (std::size_t i = factors_.size(); i-- > 1;)
            strides_[i - 1] = strides_[i] * factors_[i];
    }

    /// Parse "Z/n" or "Z/n x Z/m x ..." (n >= 2).
    static FinAbGroup parse(const std::string& spec) {
        std::vector<std::uint64_t> factors;
        std::istringstream in(spec);
        std::string tok;
        bool expect_factor = true;
        while (in >> tok) {
            if (expect_factor) {
                if (tok.size() < 3 || tok[0] != 'Z' || tok[1] != '/')
                    throw ParseError("expected Z/n factor, got '" + tok + "' in spec '" + spec + "'");
                std::uint64_t n = 0;
                for (std::size_t k = 2; k < tok.size(); ++k) {
                    if (tok[k] < '0' || tok[k] > '9')
                        throw ParseError("malformed modulus in '" + tok + "'");
                    if (n > (std::uint64_t{1} << 60)) throw ParseError("modulus too large in '" + tok + "'");
                    n = n * 10 + static_cast<std::uint64_t>(tok[k] - '0');
                }
                if (n < 2) throw ParseError("modulus must be >= 2 in '" + tok + "'");
                factors.push_back(n);
            } else if (tok != "x") {
                throw ParseError("expected 'x' between factors, got '" + tok + "'");
            }
            expect_factor = !expect_factor;
        }
        if (expect_factor) throw ParseError("empty or truncated group spec '" + spec + "'");
        return FinAbGroup(std::move(factors));
    }

    const std::vector<std::uint64_t>& factors() const { return factors_; }
    std::size_t num_factors() const { return factors_.size(); }
    std::uint64_t order() const { return order_; }
    bool trivial() const { return factors_.empty(); }

    /// Canonical spec string; parse(to_spec()) reproduces the group.
    std::string to_spec() const {
        if (factors_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (i) s += " x ";
            s += "Z/" + std::to_string(factors_[i]);
        }
        return s;
    }

    bool operator==(const FinAbGroup& other) const { return factors_ == other.factors_; }
    bool operator!=(const FinAbGroup& other) const { return !(*this == other); }

    // --- index arithmetic (the fast path used by the enumeration layers) ---

    std::uint64_t encode(const std::vector<std::uint32_t>& coords) const {
        check_coords(coords);
        std::uint64_t ix = 0;
        for (std::size_t i = 0; i < coords.size(); ++i) ix += coords[i] * strides_[i];
        return ix;
    }

    std::vector<std::uint32_t> decode(std::uint64_t index) const {
        if (index >= order_) throw ValidationError("element index out of range");
        std::vector<std::uint32_t> coords(factors_.size());
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            coords[i] = static_cast<std::uint32_t>(index / strides_[i]);
            index %= strides_[i];
        }
        return coords;
    }

    std::uint64_t add_index(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t out = 0;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            std::uint64_t ca = (a / strides_[i]) % factors_[i];
            std::uint64_t cb = (b / strides_[i]) % factors_[i];
            out += ((ca + cb) % factors_[i]) * strides_[i];
        }
        return out;
    }

    std::uint64_t neg_index(std::uint64_t a) const {
        std::uint64_t out = 0;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            std::uint64_t ca = (a / strides_[i]) % factors_[i];
            out += ((factors_[i] - ca) % factors_[i]) * strides_[i];
        }
        return out;
    }

    static constexpr std::uint64_t zero_index() { return 0; }

private:
    void check_coords(const std::vector<std::uint32_t>& coords) const {
        if (coords.size() != factors_.size())
            throw ValidationError("element has " + std::to_string(coords.size()) + " coordinates, group has " +
                                  std::to_string(factors_.size()) + " factors");
        for (std::size_t i = 0; i < coords.size(); ++i)
            if (coords[i] >= factors_[i])
                throw ValidationError("coordinate " + std::to_string(coords[i]) + " out of range for Z/" +
                                      std::to_string(factors_[i]));
    }

    std::vector<std::uint64_t> factors_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t order_ = 1;

    friend struct GroupElement;
};

/// An element in invariant-factor coordinates. Value type; the parent group
/// is identified by its factor list, so elements of structurally equal
/// groups are interchangeable.
struct GroupElement {
    std::vector<std::uint32_t> coords;

    bool operator==(const GroupElement& other) const { return coords == other.coords; }
    bool operator!=(const GroupElement& other) const { return !(*this == other); }
};

inline GroupElement group_element(const FinAbGroup& g, std::uint64_t index) { return GroupElement{g.decode(index)}; }

inline GroupElement add(const FinAbGroup& g, const GroupElement& a, const GroupElement& b) {
    return group_element(g, g.add_index(g.encode(a.coords), g.encode(b.coords)));
}

inline GroupElement negate(const FinAbGroup& g, const GroupElement& a) {
    return group_element(g, g.neg_index(g.encode(a.coords)));
}

inline bool is_zero(const FinAbGroup& g, const GroupElement& a) { return g.encode(a.coords) == 0; }

inline GroupElement zero(const FinAbGroup& g) { return GroupElement{std::vector<std::uint32_t>(g.num_factors(), 0)}; }

namespace detail {

// Exhaustive checks are capped; beyond the cap we sample this many triples
// with a fixed-seed generator so validation stays deterministic.
constexpr std::uint64_t k_exhaustive_ring_order = 256;
constexpr std::uint64_t k_exhaustive_distributivity_order = 16;
constexpr int k_sampled_triples = 10000;
constexpr std::uint64_t k_max_table_order = 4096;

inline std::string witness(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return "witness triple (indices " + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ")";
}

} // namespace detail

/**
 * A finite ring: additive group plus a full multiplication table on element
 * indices. Construction validates associativity, unitality and
 * distributivity -- exhaustively up to order 256 (order 16 for
 * distributivity's cubic sweep per the table size), by fixed-seed sampling
 * beyond that. Failures report a witness triple.
 */
class RingTable {
public:
    RingTable(FinAbGroup additive, std::vector<std::uint32_t> mul, std::uint64_t one)
        : additive_(std::move(additive)), mul_(std::move(mul)), one_(one) {
        const std::uint64_t n = additive_.order();
        if (n > detail::k_max_table_order)
            throw ValidationError("ring of order " + std::to_string(n) + " exceeds table limit " +
                                  std::to_string(detail::k_max_table_order));
        if (mul_.size() != n * n) throw ValidationError("multiplication table has wrong size");
        if (one_ >= n) throw ValidationError("unit index out of range");
        validate();
    }

    /// "Z/n": the cyclic ring with its standard multiplication.
    static RingTable cyclic(std::uint64_t n) {
        FinAbGroup g({n});
        std::vector<std::uint32_t> mul(n * n);
        for (std::uint64_t a = 0; a < n; ++a)
            for (std::uint64_t b = 0; b < n; ++b) mul[a * n + b] = static_cast<std::uint32_t>((a * b) % n);
        return RingTable(std::move(g), std::move(mul), 1 % n);
    }

    static RingTable from_spec(const std::string& spec) {
        FinAbGroup g = FinAbGroup::parse(spec);
        if (g.num_factors() != 1)
            throw ParseError("ring spec '" + spec + "' is not cyclic; use a table file for product groups");
        return cyclic(g.factors()[0]);
    }

    const FinAbGroup& additive() const { return additive_; }
    std::uint64_t order() const { return additive_.order(); }
    std::uint64_t one_index() const { return one_; }

    std::uint64_t mul_index(std::uint64_t a, std::uint64_t b) const { return mul_[a * additive_.order() + b]; }

    GroupElement one() const { return group_element(additive_, one_); }
    GroupElement mul(const GroupElement& a, const GroupElement& b) const {
        return group_element(additive_, mul_index(additive_.encode(a.coords), additive_.encode(b.coords)));
    }

private:
    void validate() const {
        const std::uint64_t n = additive_.order();
        for (std::uint64_t a = 0; a < n; ++a)
            for (std::uint64_t b = 0; b < n; ++b)
                if (mul_[a * n + b] >= n)
                    throw ValidationError("table entry out of range at " + detail::witness(a, b, 0));
        for (std::uint64_t a = 0; a < n; ++a) {
            if (mul_index(one_, a) != a || mul_index(a, one_) != a)
                throw ValidationError("unit fails at " + detail::witness(one_, a, a));
        }
        auto assoc = [&](std::uint64_t a, std::uint64_t b, std::uint64_t c) {
            if (mul_index(mul_index(a, b), c) != mul_index(a, mul_index(b, c)))
                throw ValidationError("non-associative: " + detail::witness(a, b, c));
        };
        auto distrib = [&](std::uint64_t a, std::uint64_t b, std::uint64_t c) {
            std::uint64_t lhs = mul_index(a, additive_.add_index(b, c));
            std::uint64_t rhs = additive_.add_index(mul_index(a, b), mul_index(a, c));
            if (lhs != rhs) throw ValidationError("not left-distributive: " + detail::witness(a, b, c));
            lhs = mul_index(additive_.add_index(b, c), a);
            rhs = additive_.add_index(mul_index(b, a), mul_index(c, a));
            if (lhs != rhs) throw ValidationError("not right-distributive: " + detail::witness(a, b, c));
        };
        if (n <= detail::k_exhaustive_ring_order) {
            for (std::uint64_t a = 0; a < n; ++a)
                for (std::uint64_t b = 0; b < n; ++b)
                    for (std::uint64_t c = 0; c < n; ++c) assoc(a, b, c);
        }
        if (n <= detail::k_exhaustive_distributivity_order) {
            for (std::uint64_t a = 0; a < n; ++a)
                for (std::uint64_t b = 0; b < n; ++b)
                    for (std::uint64_t c = 0; c < n; ++c) distrib(a, b, c);
        }
        if (n > detail::k_exhaustive_distributivity_order) {
            std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
            std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
            for (int t = 0; t < detail::k_sampled_triples; ++t) {
                std::uint64_t a = pick(rng), b = pick(rng), c = pick(rng);
                if (n > detail::k_exhaustive_ring_order) assoc(a, b, c);
                distrib(a, b, c);
            }
        }
    }

    FinAbGroup additive_;
    std::vector<std::uint32_t> mul_;
    std::uint64_t one_;
};

/**
 * A bimodule over a ring, given by left and right action tables on element
 * indices. All axioms (biadditivity, associativity over the ring product,
 * commuting actions, unitality) are checked at construction, exhaustively
 * at small sizes and by fixed-seed sampling beyond.
 */
class BimoduleTable {
public:
    BimoduleTable(RingTable ring, FinAbGroup group, std::vector<std::uint32_t> left,
                  std::vector<std::uint32_t> right)
        : ring_(std::move(ring)), group_(std::move(group)), left_(std::move(left)), right_(std::move(right)) {
        const std::uint64_t nr = ring_.order();
        const std::uint64_t nm = group_.order();
        if (nm > detail::k_max_table_order)
            throw ValidationError("bimodule of order " + std::to_string(nm) + " exceeds table limit");
        if (left_.size() != nr * nm || right_.size() != nm * nr)
            throw ValidationError("action table has wrong size");
        validate();
    }

    const FinAbGroup& group() const { return group_; }
    const RingTable& ring() const { return ring_; }

    std::uint64_t left_index(std::uint64_t r, std::uint64_t m) const { return left_[r * group_.order() + m]; }
    std::uint64_t right_index(std::uint64_t m, std::uint64_t r) const { return right_[m * ring_.order() + r]; }

    GroupElement left(const GroupElement& r, const GroupElement& m) const {
        return group_element(group_, left_index(ring_.additive().encode(r.coords), group_.encode(m.coords)));
    }
    GroupElement right(const GroupElement& m, const GroupElement& r) const {
        return group_element(group_, right_index(group_.encode(m.coords), ring_.additive().encode(r.coords)));
    }

private:
    void validate() const {
        const std::uint64_t nr = ring_.order();
        const std::uint64_t nm = group_.order();
        const FinAbGroup& ra = ring_.additive();
        auto check = [&](std::uint64_t r, std::uint64_t s, std::uint64_t m) {
            // biadditive in each slot
            if (left_index(ra.add_index(r, s), m) != group_.add_index(left_index(r, m), left_index(s, m)))
                throw ValidationError("left action not additive in ring: " + detail::witness(r, s, m));
            if (right_index(m, ra.add_index(r, s)) != group_.add_index(right_index(m, r), right_index(m, s)))
                throw ValidationError("right action not additive in ring: " + detail::witness(r, s, m));
            // associativity over the ring product
            if (left_index(ring_.mul_index(r, s), m) != left_index(r, left_index(s, m)))
                throw ValidationError("left action not associative: " + detail::witness(r, s, m));
            if (right_index(m, ring_.mul_index(r, s)) != right_index(right_index(m, r), s))
                throw ValidationError("right action not associative: " + detail::witness(r, s, m));
            // left and right actions commute
            if (right_index(left_index(r, m), s) != left_index(r, right_index(m, s)))
                throw ValidationError("actions do not commute: " + detail::witness(r, s, m));
        };
        auto check_additive_m = [&](std::uint64_t r, std::uint64_t m, std::uint64_t m2) {
            if (left_index(r, group_.add_index(m, m2)) != group_.add_index(left_index(r, m), left_index(r, m2)))
                throw ValidationError("left action not additive in module: " + detail::witness(r, m, m2));
            if (right_index(group_.add_index(m, m2), r) != group_.add_index(right_index(m, r), right_index(m2, r)))
                throw ValidationError("right action not additive in module: " + detail::witness(r, m, m2));
        };
        for (std::uint64_t m = 0; m < nm; ++m) {
            if (left_index(ring_.one_index(), m) != m || right_index(m, ring_.one_index()) != m)
                throw ValidationError("action not unital: " + detail::witness(ring_.one_index(), m, m));
        }
        if (nr * nr * nm <= (1u << 24) && nr * nm * nm <= (1u << 24)) {
            for (std::uint64_t r = 0; r < nr; ++r)
                for (std::uint64_t s = 0; s < nr; ++s)
                    for (std::uint64_t m = 0; m < nm; ++m) check(r, s, m);
            for (std::uint64_t r = 0; r < nr; ++r)
                for (std::uint64_t m = 0; m < nm; ++m)
                    for (std::uint64_t m2 = 0; m2 < nm; ++m2) check_additive_m(r, m, m2);
        } else {
            std::mt19937_64 rng(0x517cc1b727220a95ull);
            std::uniform_int_distribution<std::uint64_t> pr(0, nr - 1), pm(0, nm - 1);
            for (int t = 0; t < detail::k_sampled_triples; ++t) {
                check(pr(rng), pr(rng), pm(rng));
                check_additive_m(pr(rng), pm(rng), pm(rng));
            }
        }
    }

    RingTable ring_;
    FinAbGroup group_;
    std::vector<std::uint32_t> left_;
    std::vector<std::uint32_t> right_;
};

/// The ring as a bimodule over itself: left action = multiplication on the
/// left, right action = multiplication on the right.
inline BimoduleTable self_bimodule(const RingTable& ring) {
    const std::uint64_t n = ring.order();
    std::vector<std::uint32_t> left(n * n), right(n * n);
    for (std::uint64_t r = 0; r < n; ++r)
        for (std::uint64_t m = 0; m < n; ++m) {
            left[r * n + m] = static_cast<std::uint32_t>(ring.mul_index(r, m));
            right[m * n + r] = static_cast<std::uint32_t>(ring.mul_index(m, r));
        }
    return BimoduleTable(ring, ring.additive(), std::move(left), std::move(right));
}

inline FinAbGroup group_from_spec(const std::string& spec) { return FinAbGroup::parse(spec); }

} // namespace maclane
