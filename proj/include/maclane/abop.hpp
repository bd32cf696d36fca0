#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "maclane/errors.hpp"

namespace maclane {

/// A finite set {0,...,size-1} with a marked subset. In the bar-complex
/// interpretation the marked positions carry module factors and the rest
/// carry algebra factors.
struct ABObject {
    int size = 0;
    std::vector<int> marked; // sorted, each in [0, size)

    bool operator==(const ABObject& other) const { return size == other.size && marked == other.marked; }
};

/**
 * A morphism of marked sets: a set map restricting to a bijection on the
 * marked subsets, together with a total order on every fiber. Composition
 * concatenates fiber orders, so these morphisms know how to multiply
 * tensor factors in a definite order.
 */
struct ABMorphism {
    ABObject source, target;
    std::vector<int> map;                       // size source.size, values in [0, target.size)
    std::vector<std::vector<int>> fiber_orders; // per target point, an ordering of its preimage

    bool operator==(const ABMorphism& other) const {
        return source == other.source && target == other.target && map == other.map &&
               fiber_orders == other.fiber_orders;
    }
};

inline void validate_ab_morphism(const ABMorphism& f) {
    if (static_cast<int>(f.map.size()) != f.source.size) throw ValidationError("AB morphism: map has wrong arity");
    for (int v : f.map)
        if (v < 0 || v >= f.target.size) throw ValidationError("AB morphism: map value out of range");
    // marked restriction is a bijection onto the target's marked set
    std::vector<int> image;
    for (int u : f.source.marked) image.push_back(f.map[static_cast<std::size_t>(u)]);
    std::sort(image.begin(), image.end());
    if (image != f.target.marked || std::adjacent_find(image.begin(), image.end()) != image.end())
        throw ValidationError("AB morphism: marked subset does not map bijectively");
    // fiber orders list each preimage exactly once
    if (static_cast<int>(f.fiber_orders.size()) != f.target.size)
        throw ValidationError("AB morphism: one fiber order per target point required");
    std::vector<int> seen(static_cast<std::size_t>(f.source.size), 0);
    for (int t = 0; t < f.target.size; ++t)
        for (int s : f.fiber_orders[static_cast<std::size_t>(t)]) {
            if (s < 0 || s >= f.source.size || f.map[static_cast<std::size_t>(s)] != t || seen[static_cast<std::size_t>(s)]++)
                throw ValidationError("AB morphism: fiber order is not a listing of the preimage of " +
                                      std::to_string(t));
        }
    for (int s = 0; s < f.source.size; ++s)
        if (!seen[static_cast<std::size_t>(s)]) throw ValidationError("AB morphism: fiber orders miss a point");
}

inline ABMorphism identity_ab(const ABObject& obj) {
    ABMorphism f;
    f.source = f.target = obj;
    f.map.resize(static_cast<std::size_t>(obj.size));
    f.fiber_orders.resize(static_cast<std::size_t>(obj.size));
    for (int s = 0; s < obj.size; ++s) {
        f.map[static_cast<std::size_t>(s)] = s;
        f.fiber_orders[static_cast<std::size_t>(s)] = {s};
    }
    return f;
}

/// g after f. The fiber of the composite over x is the concatenation of
/// f's fibers over the points of g's fiber over x, in g's fiber order.
inline ABMorphism compose_ab(const ABMorphism& g, const ABMorphism& f) {
    if (!(f.target == g.source)) throw ValidationError("compose_ab: morphisms are not composable");
    ABMorphism out;
    out.source = f.source;
    out.target = g.target;
    out.map.resize(static_cast<std::size_t>(f.source.size));
    for (int s = 0; s < f.source.size; ++s)
        out.map[static_cast<std::size_t>(s)] = g.map[static_cast<std::size_t>(f.map[static_cast<std::size_t>(s)])];
    out.fiber_orders.resize(static_cast<std::size_t>(g.target.size));
    for (int x = 0; x < g.target.size; ++x) {
        auto& fiber = out.fiber_orders[static_cast<std::size_t>(x)];
        for (int t : g.fiber_orders[static_cast<std::size_t>(x)])
            for (int s : f.fiber_orders[static_cast<std::size_t>(t)]) fiber.push_back(s);
    }
    return out;
}

/**
 * The simplex category modeled on intervals: level n is the totally
 * ordered set {0, 1, ..., n+1} and morphisms are monotone maps fixing both
 * endpoints. (Presheaves on intervals are simplicial objects, so maps here
 * compose covariantly while acting like face/degeneracy data.)
 */
struct DeltaOpMorphism {
    int n = 0, m = 0;
    std::vector<int> map; // size n+2, map[0] = 0, map[n+1] = m+1, monotone
};

inline void validate_delta_op(const DeltaOpMorphism& f) {
    if (static_cast<int>(f.map.size()) != f.n + 2) throw ValidationError("interval map has wrong arity");
    if (f.map.front() != 0 || f.map.back() != f.m + 1)
        throw ValidationError("interval map must preserve the endpoints");
    for (std::size_t i = 0; i + 1 < f.map.size(); ++i)
        if (f.map[i] > f.map[i + 1]) throw ValidationError("interval map is not monotone");
    for (int v : f.map)
        if (v < 0 || v > f.m + 1) throw ValidationError("interval map value out of range");
}

inline DeltaOpMorphism compose_delta_op(const DeltaOpMorphism& g, const DeltaOpMorphism& f) {
    if (f.m != g.n) throw ValidationError("interval maps are not composable");
    DeltaOpMorphism out;
    out.n = f.n;
    out.m = g.m;
    out.map.resize(static_cast<std::size_t>(f.n + 2));
    for (std::size_t i = 0; i < out.map.size(); ++i)
        out.map[i] = g.map[static_cast<std::size_t>(f.map[i])];
    return out;
}

/**
 * The translation from interval maps to marked-set morphisms. Level n
 * becomes ({0,...,n}, {0}); a point mapping to the top endpoint m+1 wraps
 * around to 0. Fibers over j >= 1 carry the numeric order; the fiber over
 * 0 lists the wrapped points (preimage of m+1) first, then the preimage of
 * 0 -- this wrap-around order is what makes the last bar face act through
 * the left module structure.
 */
inline ABMorphism chi(const DeltaOpMorphism& f) {
    validate_delta_op(f);
    ABMorphism out;
    out.source = ABObject{f.n + 1, {0}};
    out.target = ABObject{f.m + 1, {0}};
    out.map.resize(static_cast<std::size_t>(f.n + 1));
    for (int i = 0; i <= f.n; ++i)
        out.map[static_cast<std::size_t>(i)] = (f.map[static_cast<std::size_t>(i)] == f.m + 1)
                                                   ? 0
                                                   : f.map[static_cast<std::size_t>(i)];
    out.fiber_orders.resize(static_cast<std::size_t>(f.m + 1));
    for (int j = 1; j <= f.m; ++j)
        for (int i = 0; i <= f.n; ++i)
            if (f.map[static_cast<std::size_t>(i)] == j) out.fiber_orders[static_cast<std::size_t>(j)].push_back(i);
    for (int i = 0; i <= f.n; ++i)
        if (f.map[static_cast<std::size_t>(i)] == f.m + 1) out.fiber_orders[0].push_back(i);
    for (int i = 0; i <= f.n; ++i)
        if (f.map[static_cast<std::size_t>(i)] == 0) out.fiber_orders[0].push_back(i);
    validate_ab_morphism(out);
    return out;
}

/// The interval representative of the i-th face at bar level p:
/// j -> j for j <= i and j -> j-1 for j > i. This is the unique monotone
/// endpoint-preserving map {0..p+1} -> {0..p} hitting every value and
/// identifying i with i+1; under chi it merges positions i, i+1 in that
/// order for i < p, and wraps position p onto 0 in the order (p, 0) for
/// i = p.
inline DeltaOpMorphism delta_op_face(int p, int i) {
    if (p < 1 || i < 0 || i > p) throw ValidationError("face index out of range");
    DeltaOpMorphism f;
    f.n = p;
    f.m = p - 1;
    f.map.resize(static_cast<std::size_t>(p + 2));
    for (int j = 0; j <= p + 1; ++j) f.map[static_cast<std::size_t>(j)] = j <= i ? j : j - 1;
    validate_delta_op(f);
    return f;
}

/// The p+1 face morphisms d_0, ..., d_p of bar level p as marked-set
/// morphisms ({0..p}, {0}) -> ({0..p-1}, {0}).
inline std::vector<ABMorphism> face_morphisms(int p) {
    if (p < 1) throw ValidationError("bar level must be >= 1 for faces");
    std::vector<ABMorphism> out;
    out.reserve(static_cast<std::size_t>(p + 1));
    for (int i = 0; i <= p; ++i) out.push_back(chi(delta_op_face(p, i)));
    return out;
}

} // namespace maclane
