#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "maclane/errors.hpp"

namespace maclane {

/// All exact linear algebra runs over arbitrary-precision integers;
/// intermediate entry growth in elimination makes fixed width unsafe.
using Int = boost::multiprecision::cpp_int;

using DenseMat = std::vector<std::vector<Int>>; // row-major

inline Int fdiv(const Int& a, const Int& b) {
    // floor division (cpp_int's operator/ truncates toward zero)
    Int q = a / b;
    if (q * b != a && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Sparse integer matrix, column-major. Zero entries are never stored.
class SparseIntMatrix {
public:
    SparseIntMatrix() = default;
    SparseIntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(cols)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    static SparseIntMatrix identity(int n) {
        SparseIntMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }

    void set(int r, int c, Int v) {
        check(r, c);
        if (v == 0)
            data_[c].erase(r);
        else
            data_[c][r] = std::move(v);
    }

    void add(int r, int c, const Int& v) {
        check(r, c);
        auto it = data_[c].find(r);
        if (it == data_[c].end()) {
            if (v != 0) data_[c].emplace(r, v);
        } else {
            it->second += v;
            if (it->second == 0) data_[c].erase(it);
        }
    }

    Int at(int r, int c) const {
        check(r, c);
        auto it = data_[c].find(r);
        return it == data_[c].end() ? Int(0) : it->second;
    }

    /// Column c as an ordered (row -> value) map.
    const std::map<int, Int>& col(int c) const { return data_[c]; }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& c : data_) n += c.size();
        return n;
    }

    bool is_zero() const { return nnz() == 0; }

    SparseIntMatrix operator*(const SparseIntMatrix& other) const {
        if (cols_ != other.rows_) throw ValidationError("matrix product dimension mismatch");
        SparseIntMatrix out(rows_, other.cols_);
        for (int k = 0; k < other.cols_; ++k)
            for (const auto& [j, v] : other.data_[k])
                for (const auto& [i, a] : data_[j]) out.add(i, k, a * v);
        return out;
    }

    SparseIntMatrix operator-() const {
        SparseIntMatrix out(rows_, cols_);
        for (int c = 0; c < cols_; ++c)
            for (const auto& [r, v] : data_[c]) out.data_[c][r] = -v;
        return out;
    }

    SparseIntMatrix operator+(const SparseIntMatrix& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_) throw ValidationError("matrix sum dimension mismatch");
        SparseIntMatrix out = *this;
        for (int c = 0; c < cols_; ++c)
            for (const auto& [r, v] : other.data_[c]) out.add(r, c, v);
        return out;
    }

    bool operator==(const SparseIntMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

    /// [A | B] side by side.
    static SparseIntMatrix hcat(const SparseIntMatrix& a, const SparseIntMatrix& b) {
        if (a.rows() != b.rows()) throw ValidationError("hcat row mismatch");
        SparseIntMatrix out(a.rows(), a.cols() + b.cols());
        for (int c = 0; c < a.cols(); ++c) out.data_[c] = a.data_[c];
        for (int c = 0; c < b.cols(); ++c) out.data_[a.cols() + c] = b.data_[c];
        return out;
    }

    DenseMat to_dense() const {
        DenseMat d(static_cast<std::size_t>(rows_), std::vector<Int>(static_cast<std::size_t>(cols_), Int(0)));
        for (int c = 0; c < cols_; ++c)
            for (const auto& [r, v] : data_[c]) d[r][c] = v;
        return d;
    }

    static SparseIntMatrix from_dense(const DenseMat& d) {
        int rows = static_cast<int>(d.size());
        int cols = rows ? static_cast<int>(d[0].size()) : 0;
        SparseIntMatrix out(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                if (d[r][c] != 0) out.data_[c][r] = d[r][c];
        return out;
    }

private:
    void check(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw ValidationError("matrix index out of range");
    }

    int rows_ = 0, cols_ = 0;
    std::vector<std::map<int, Int>> data_;
};

/**
 * Smith normal form: U * A * V = diag(D) with U, V unimodular (products of
 * elementary operations) and D the positive invariant factors
 * d_1 | d_2 | ... | d_k. Pivots are chosen by minimal absolute value with
 * lexicographic (row, col) tie-break, which keeps the output deterministic
 * and limits coefficient growth.
 */
struct SNFResult {
    std::vector<Int> diag; // positive, divisibility chain; size = rank
    DenseMat U;            // rows x rows (empty when transforms not requested)
    DenseMat V;            // cols x cols (empty when transforms not requested)
    int rows = 0, cols = 0;

    int rank() const { return static_cast<int>(diag.size()); }
};

inline SNFResult snf(const SparseIntMatrix& input, bool want_transforms = true) {
    const int m = input.rows(), n = input.cols();
    DenseMat a = input.to_dense();
    DenseMat u, v;
    if (want_transforms) {
        u.assign(m, std::vector<Int>(m, Int(0)));
        for (int i = 0; i < m; ++i) u[i][i] = 1;
        v.assign(n, std::vector<Int>(n, Int(0)));
        for (int i = 0; i < n; ++i) v[i][i] = 1;
    }

    auto swap_rows = [&](int i, int j) {
        if (i == j) return;
        std::swap(a[i], a[j]);
        if (want_transforms) std::swap(u[i], u[j]);
    };
    auto swap_cols = [&](int i, int j) {
        if (i == j) return;
        for (int r = 0; r < m; ++r) std::swap(a[r][i], a[r][j]);
        if (want_transforms)
            for (int r = 0; r < n; ++r) std::swap(v[r][i], v[r][j]);
    };
    auto row_axpy = [&](int dst, int src, const Int& q) {
        // row_dst -= q * row_src
        if (q == 0) return;
        for (int c = 0; c < n; ++c)
            if (a[src][c] != 0) a[dst][c] -= q * a[src][c];
        if (want_transforms)
            for (int c = 0; c < m; ++c)
                if (u[src][c] != 0) u[dst][c] -= q * u[src][c];
    };
    auto col_axpy = [&](int dst, int src, const Int& q) {
        if (q == 0) return;
        for (int r = 0; r < m; ++r)
            if (a[r][src] != 0) a[r][dst] -= q * a[r][src];
        if (want_transforms)
            for (int r = 0; r < n; ++r)
                if (v[r][src] != 0) v[r][dst] -= q * v[r][src];
    };
    auto negate_row = [&](int i) {
        for (int c = 0; c < n; ++c) a[i][c] = -a[i][c];
        if (want_transforms)
            for (int c = 0; c < m; ++c) u[i][c] = -u[i][c];
    };

    const int steps = std::min(m, n);
    int t = 0;
    for (; t < steps; ++t) {
        // minimal |entry| pivot over the trailing submatrix, lex tie-break
        int pr = -1, pc = -1;
        Int best;
        for (int i = t; i < m; ++i)
            for (int j = t; j < n; ++j) {
                if (a[i][j] == 0) continue;
                Int mag = abs(a[i][j]);
                if (pr < 0 || mag < best) {
                    best = mag;
                    pr = i;
                    pc = j;
                }
            }
        if (pr < 0) break; // submatrix is zero
        swap_rows(t, pr);
        swap_cols(t, pc);

        for (;;) {
            // clear column t below the pivot
            bool shrunk = false;
            for (int i = t + 1; i < m; ++i) {
                if (a[i][t] == 0) continue;
                Int q = a[i][t] / a[t][t];
                row_axpy(i, t, q);
                if (a[i][t] != 0) { // remainder is a strictly smaller pivot
                    swap_rows(t, i);
                    shrunk = true;
                }
            }
            if (shrunk) continue;
            for (int j = t + 1; j < n; ++j) {
                if (a[t][j] == 0) continue;
                Int q = a[t][j] / a[t][t];
                col_axpy(j, t, q);
                if (a[t][j] != 0) {
                    swap_cols(t, j);
                    shrunk = true;
                }
            }
            if (shrunk) continue;
            // pivot must divide the rest of the submatrix for the
            // divisibility chain; fold in an offending row and repeat
            bool fixed = true;
            for (int i = t + 1; i < m && fixed; ++i)
                for (int j = t + 1; j < n && fixed; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        row_axpy(t, i, Int(-1));
                        fixed = false;
                    }
            if (fixed) break;
        }
        if (a[t][t] < 0) negate_row(t);
    }

    SNFResult out;
    out.rows = m;
    out.cols = n;
    for (int i = 0; i < t; ++i) out.diag.push_back(a[i][i]);
    out.U = std::move(u);
    out.V = std::move(v);
    return out;
}

/// Kronecker product with the row/column pairing (i, j) -> i * B.rows + j,
/// matching the f-major indexing of paired tensor bases.
inline SparseIntMatrix kronecker(const SparseIntMatrix& a, const SparseIntMatrix& b) {
    SparseIntMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int ca = 0; ca < a.cols(); ++ca)
        for (const auto& [ra, va] : a.col(ca))
            for (int cb = 0; cb < b.cols(); ++cb)
                for (const auto& [rb, vb] : b.col(cb))
                    out.set(ra * b.rows() + rb, ca * b.cols() + cb, va * vb);
    return out;
}

/// Basis of the integer kernel {x : A x = 0}, as columns.
inline std::vector<std::vector<Int>> kernel_basis(const SparseIntMatrix& a) {
    SNFResult s = snf(a, true);
    std::vector<std::vector<Int>> out;
    for (int j = s.rank(); j < a.cols(); ++j) {
        std::vector<Int> col(static_cast<std::size_t>(a.cols()));
        for (int r = 0; r < a.cols(); ++r) col[r] = s.V[r][j];
        out.push_back(std::move(col));
    }
    return out;
}

/**
 * A sublattice of Z^dim maintained in column Hermite normal form:
 * strictly increasing pivot rows, positive pivots, off-pivot entries in a
 * pivot's row reduced into [0, pivot). Columns can be inserted
 * incrementally; generating sets far larger than dim reduce cheaply once
 * the lattice stabilizes.
 */
class LatticeBasis {
public:
    explicit LatticeBasis(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    int rank() const { return static_cast<int>(cols_.size()); }

    void insert(std::vector<Int> v) {
        if (static_cast<int>(v.size()) != dim_) throw ValidationError("lattice insert dimension mismatch");
        bool changed_basis = false;
        std::size_t j = 0;
        int t = top_nonzero(v);
        while (t >= 0) {
            while (j < cols_.size() && pivot_row_[j] < t) ++j;
            if (j == cols_.size() || pivot_row_[j] > t) {
                // new pivot row
                if (v[t] < 0)
                    for (auto& x : v) x = -x;
                cols_.insert(cols_.begin() + static_cast<std::ptrdiff_t>(j), std::move(v));
                pivot_row_.insert(pivot_row_.begin() + static_cast<std::ptrdiff_t>(j), t);
                changed_basis = true;
                break;
            }
            // same pivot row: combine
            Int& p = cols_[j][t];
            if (v[t] % p == 0) {
                axpy(v, cols_[j], v[t] / p);
            } else {
                Int g, x, y;
                ext_gcd(p, v[t], g, x, y);
                std::vector<Int> combined(static_cast<std::size_t>(dim_));
                Int pa = p / g, vb = v[t] / g;
                for (int r = 0; r < dim_; ++r) {
                    combined[r] = x * cols_[j][r] + y * v[r];
                    Int nv = pa * v[r] - vb * cols_[j][r];
                    v[r] = std::move(nv);
                }
                cols_[j] = std::move(combined);
                changed_basis = true;
            }
            t = top_nonzero(v);
            ++j;
        }
        if (changed_basis) normalize();
    }

    void insert_sparse(const std::map<int, Int>& col) {
        std::vector<Int> v(static_cast<std::size_t>(dim_));
        for (const auto& [r, val] : col) v[r] = val;
        insert(std::move(v));
    }

    void insert_columns(const SparseIntMatrix& m) {
        if (m.rows() != dim_) throw ValidationError("lattice insert dimension mismatch");
        for (int c = 0; c < m.cols(); ++c) insert_sparse(m.col(c));
    }

    /// Membership test; does not change the basis.
    bool contains(std::vector<Int> v) const {
        if (static_cast<int>(v.size()) != dim_) throw ValidationError("lattice membership dimension mismatch");
        std::size_t j = 0;
        int t = top_nonzero(v);
        while (t >= 0) {
            while (j < cols_.size() && pivot_row_[j] < t) ++j;
            if (j == cols_.size() || pivot_row_[j] > t) return false;
            if (v[t] % cols_[j][t] != 0) return false;
            axpy(v, cols_[j], v[t] / cols_[j][t]);
            t = top_nonzero(v);
            ++j;
        }
        return true;
    }

    bool contains_sparse(const std::map<int, Int>& col) const {
        std::vector<Int> v(static_cast<std::size_t>(dim_));
        for (const auto& [r, val] : col) v[r] = val;
        return contains(std::move(v));
    }

    /// Coefficients x with basis * x = v, or nullopt if v is outside the
    /// lattice.
    std::optional<std::vector<Int>> express(std::vector<Int> v) const {
        if (static_cast<int>(v.size()) != dim_) throw ValidationError("lattice express dimension mismatch");
        std::vector<Int> coeff(cols_.size(), Int(0));
        std::size_t j = 0;
        int t = top_nonzero(v);
        while (t >= 0) {
            while (j < cols_.size() && pivot_row_[j] < t) ++j;
            if (j == cols_.size() || pivot_row_[j] > t) return std::nullopt;
            if (v[t] % cols_[j][t] != 0) return std::nullopt;
            Int q = v[t] / cols_[j][t];
            axpy(v, cols_[j], q);
            coeff[j] = q;
            t = top_nonzero(v);
            ++j;
        }
        return coeff;
    }

    /// The HNF basis as a dim x rank matrix.
    SparseIntMatrix basis_matrix() const {
        SparseIntMatrix m(dim_, rank());
        for (std::size_t j = 0; j < cols_.size(); ++j)
            for (int r = 0; r < dim_; ++r)
                if (cols_[j][r] != 0) m.set(r, static_cast<int>(j), cols_[j][r]);
        return m;
    }

    const std::vector<int>& pivot_rows() const { return pivot_row_; }

private:
    static int top_nonzero(const std::vector<Int>& v) {
        for (std::size_t r = 0; r < v.size(); ++r)
            if (v[r] != 0) return static_cast<int>(r);
        return -1;
    }

    // v -= q * w
    static void axpy(std::vector<Int>& v, const std::vector<Int>& w, const Int& q) {
        if (q == 0) return;
        for (std::size_t r = 0; r < v.size(); ++r)
            if (w[r] != 0) v[r] -= q * w[r];
    }

    static void ext_gcd(const Int& a, const Int& b, Int& g, Int& x, Int& y) {
        if (b == 0) {
            g = a < 0 ? Int(-a) : a;
            x = a < 0 ? Int(-1) : Int(1);
            y = 0;
            return;
        }
        Int x1, y1;
        ext_gcd(b, a % b, g, x1, y1);
        x = y1;
        y = x1 - (a / b) * y1;
    }

    // restore the reduced form: entries in a pivot's row, in other columns,
    // lie in [0, pivot)
    void normalize() {
        for (std::size_t j = 0; j < cols_.size(); ++j) {
            const int p = pivot_row_[j];
            for (std::size_t k = 0; k < j; ++k) {
                Int q = fdiv(cols_[k][p], cols_[j][p]);
                axpy(cols_[k], cols_[j], q);
            }
        }
    }

    int dim_;
    std::vector<std::vector<Int>> cols_; // sorted by pivot row
    std::vector<int> pivot_row_;
};

/**
 * A finitely generated abelian group in canonical form: Z^free_rank plus
 * cyclic torsion Z/t_1 x ... with 2 <= t_1 | t_2 | ...
 */
struct FPAbelianGroup {
    int free_rank = 0;
    std::vector<Int> torsion;

    bool operator==(const FPAbelianGroup& other) const {
        return free_rank == other.free_rank && torsion == other.torsion;
    }
    bool operator!=(const FPAbelianGroup& other) const { return !(*this == other); }

    bool is_trivial() const { return free_rank == 0 && torsion.empty(); }

    /// "0", "Z", "Z/2", "Z+Z/2+Z/4", ... free copies first, torsion in
    /// invariant-factor order.
    std::string to_string() const {
        if (is_trivial()) return "0";
        std::string s;
        for (int i = 0; i < free_rank; ++i) {
            if (!s.empty()) s += "+";
            s += "Z";
        }
        for (const auto& t : torsion) {
            if (!s.empty()) s += "+";
            s += "Z/" + t.str();
        }
        return s;
    }
};

/// Canonical form of lattice(K)/lattice(I); requires lattice(I) inside
/// lattice(K), else reports the first offending column.
inline FPAbelianGroup quotient_lattice(const SparseIntMatrix& k_gens, const SparseIntMatrix& i_gens) {
    if (k_gens.rows() != i_gens.rows()) throw ValidationError("quotient_lattice ambient dimension mismatch");
    LatticeBasis kb(k_gens.rows());
    kb.insert_columns(k_gens);
    const int r = kb.rank();
    SparseIntMatrix coeffs(r, i_gens.cols());
    for (int c = 0; c < i_gens.cols(); ++c) {
        std::vector<Int> v(static_cast<std::size_t>(i_gens.rows()));
        for (const auto& [row, val] : i_gens.col(c)) v[row] = val;
        auto x = kb.express(std::move(v));
        if (!x)
            throw ValidationError("quotient_lattice: generator column " + std::to_string(c) +
                                  " is not inside the target lattice");
        for (int i = 0; i < r; ++i)
            if ((*x)[i] != 0) coeffs.set(i, c, (*x)[i]);
    }
    SNFResult s = snf(coeffs, false);
    FPAbelianGroup out;
    out.free_rank = r - s.rank();
    for (const auto& d : s.diag)
        if (d > 1) out.torsion.push_back(d);
    return out;
}

/**
 * A degree-window of a chain complex of finitely presented abelian groups.
 * Degree n holds Z^{gens[n]} modulo the column lattice of rels[n];
 * diffs[n] : Z^{gens[n]} -> Z^{gens[n-1]} descends to the quotients.
 * Degrees outside [lo, hi] are zero groups; the bottom of the window is a
 * genuine boundary (used for complexes concentrated in degrees >= lo), so
 * homology at lo treats degree lo-1 as zero.
 */
class FPComplex {
public:
    FPComplex(int lo, int hi) : lo_(lo), hi_(hi) {
        if (hi < lo) throw ValidationError("FPComplex window is empty");
        gens_.assign(static_cast<std::size_t>(hi - lo + 1), 0);
        rels_.resize(static_cast<std::size_t>(hi - lo + 1));
        diffs_.resize(static_cast<std::size_t>(hi - lo + 1));
        for (std::size_t i = 0; i < rels_.size(); ++i) rels_[i] = SparseIntMatrix(0, 0);
    }

    int lo() const { return lo_; }
    int hi() const { return hi_; }

    void set_group(int n, int gens, SparseIntMatrix rels) {
        if (rels.rows() != gens) throw ValidationError("relation matrix row count mismatch");
        at(n) = gens;
        rels_[idx(n)] = std::move(rels);
    }

    void set_free_group(int n, int gens) { set_group(n, gens, SparseIntMatrix(gens, 0)); }

    void set_diff(int n, SparseIntMatrix d) {
        if (n <= lo_ || n > hi_) throw ValidationError("differential degree outside window");
        if (d.rows() != gens(n - 1) || d.cols() != gens(n)) throw ValidationError("differential shape mismatch");
        diffs_[idx(n)] = std::move(d);
    }

    int gens(int n) const { return n < lo_ || n > hi_ ? 0 : gens_[idx(n)]; }
    const SparseIntMatrix& rels(int n) const { return rels_[idx(n)]; }
    const SparseIntMatrix& diff(int n) const { return diffs_[idx(n)]; }

    /// d composed with d lands in relations; d maps relations into
    /// relations. Throws with the failing degree on violation.
    void validate() const {
        for (int n = lo_ + 1; n <= hi_; ++n) {
            const SparseIntMatrix& d = diffs_[idx(n)];
            LatticeBasis target(gens(n - 1));
            target.insert_columns(rels_[idx(n - 1)]);
            SparseIntMatrix dr = d * rels_[idx(n)];
            for (int c = 0; c < dr.cols(); ++c)
                if (!target.contains_sparse(dr.col(c)))
                    throw ValidationError("d_" + std::to_string(n) + " does not preserve relations");
            if (n - 1 > lo_) {
                SparseIntMatrix dd = diffs_[idx(n - 1)] * d;
                LatticeBasis lower(gens(n - 2));
                lower.insert_columns(rels_[idx(n - 2)]);
                for (int c = 0; c < dd.cols(); ++c)
                    if (!lower.contains_sparse(dd.col(c)))
                        throw ValidationError("d^2 != 0 in presented groups at degree " + std::to_string(n));
            }
        }
    }

private:
    std::size_t idx(int n) const {
        if (n < lo_ || n > hi_) throw ValidationError("degree " + std::to_string(n) + " outside complex window");
        return static_cast<std::size_t>(n - lo_);
    }
    int& at(int n) { return gens_[idx(n)]; }

    int lo_, hi_;
    std::vector<int> gens_;
    std::vector<SparseIntMatrix> rels_;
    std::vector<SparseIntMatrix> diffs_;

    friend FPAbelianGroup homology_of_fp_complex(const FPComplex& c, int n);
};

/**
 * H_n = Z_n / B_n with Z_n = {x : d_n x in lattice(rels_{n-1})} and
 * B_n = lattice(d_{n+1}) + lattice(rels_n). Needs n and n+1 inside the
 * window (degree n-1 may sit at the zero boundary below it).
 */
inline FPAbelianGroup homology_of_fp_complex(const FPComplex& c, int n) {
    if (n < c.lo() || n + 1 > c.hi())
        throw ValidationError("homology degree " + std::to_string(n) + " needs window [" + std::to_string(n - 1) +
                              ", " + std::to_string(n + 1) + "] inside [" + std::to_string(c.lo()) + ", " +
                              std::to_string(c.hi()) + "]");
    const int kn = c.gens(n);
    if (kn == 0) return FPAbelianGroup{};

    // cycles
    SparseIntMatrix z_gens(kn, 0);
    const int km1 = c.gens(n - 1);
    if (n == c.lo() || km1 == 0) {
        z_gens = SparseIntMatrix::identity(kn);
    } else {
        const SparseIntMatrix& rel_below = c.rels(n - 1);
        SparseIntMatrix stacked = SparseIntMatrix::hcat(c.diff(n), -rel_below);
        auto kern = kernel_basis(stacked);
        LatticeBasis zb(kn);
        for (const auto& col : kern) {
            std::vector<Int> head(col.begin(), col.begin() + kn);
            zb.insert(std::move(head));
        }
        z_gens = zb.basis_matrix();
    }

    // boundaries plus relations
    SparseIntMatrix b_gens = SparseIntMatrix::hcat(c.diff(n + 1), c.rels(n));
    return quotient_lattice(z_gens, b_gens);
}

} // namespace maclane
