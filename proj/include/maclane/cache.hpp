#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "maclane/qcomplex.hpp"

namespace maclane {

constexpr const char* k_cache_version = "v1";

/// Literal spec with runs of whitespace collapsed; factor order is
/// preserved, so "Z/4 x Z/2" and "Z/2 x Z/4" stay distinct keys.
inline std::string normalize_spec(const std::string& spec) {
    std::istringstream in(spec);
    std::string tok, out;
    while (in >> tok) {
        if (!out.empty()) out += " ";
        out += tok;
    }
    return out;
}

inline std::string cache_file_name(const std::string& normalized_spec, int degree, const std::string& kind) {
    std::string safe;
    for (char c : normalized_spec) {
        if (c == '/')
            safe += '_';
        else if (c != ' ')
            safe += c;
    }
    return safe + "__deg" + std::to_string(degree) + "__" + kind + "__" + k_cache_version + ".cache";
}

namespace detail {

inline void write_atomic(const std::filesystem::path& path, const std::string& payload) {
    std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << payload;
        if (!out) return; // caching is best-effort
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
}

} // namespace detail

inline std::string serialize_qbasis(const QBasis& basis) {
    std::ostringstream out;
    out << "maclane-cache " << k_cache_version << "\nkind qbasis\ngroup " << basis.group().to_spec() << "\ndegree "
        << basis.degree() << "\nrank " << basis.rank() << "\n";
    for (const auto& f : basis.functions()) {
        for (std::size_t v = 0; v < f.values.size(); ++v) out << (v ? " " : "") << f.values[v];
        out << "\n";
    }
    out << "end\n";
    return out.str();
}

inline std::optional<QBasis> deserialize_qbasis(const std::string& payload, const FinAbGroup& group, int degree) {
    std::istringstream in(payload);
    std::string magic, version, key, value;
    if (!(in >> magic >> version) || magic != "maclane-cache" || version != k_cache_version) return std::nullopt;
    if (!(in >> key >> value) || key != "kind" || value != "qbasis") return std::nullopt;
    std::string line;
    std::getline(in, line);
    if (!std::getline(in, line) || line != "group " + group.to_spec()) return std::nullopt;
    int deg = -1, rank = -1;
    if (!(in >> key >> deg) || key != "degree" || deg != degree) return std::nullopt;
    if (!(in >> key >> rank) || key != "rank" || rank < 0) return std::nullopt;
    std::vector<CubeFunction> fns;
    fns.reserve(static_cast<std::size_t>(rank));
    const std::size_t table = std::size_t{1} << degree;
    for (int i = 0; i < rank; ++i) {
        CubeFunction f;
        f.values.resize(table);
        for (std::size_t v = 0; v < table; ++v) {
            long long x = -1;
            if (!(in >> x) || x < 0 || static_cast<std::uint64_t>(x) >= group.order()) return std::nullopt;
            f.values[v] = static_cast<std::uint32_t>(x);
        }
        fns.push_back(std::move(f));
    }
    if (!(in >> key) || key != "end") return std::nullopt;
    return QBasis(group, degree, std::move(fns));
}

inline std::string serialize_matrix(const SparseIntMatrix& m) {
    std::ostringstream out;
    out << "maclane-cache " << k_cache_version << "\nkind matrix\nrows " << m.rows() << " cols " << m.cols()
        << " nnz " << m.nnz() << "\n";
    for (int c = 0; c < m.cols(); ++c)
        for (const auto& [r, v] : m.col(c)) out << r << " " << c << " " << v << "\n";
    out << "end\n";
    return out.str();
}

inline std::optional<SparseIntMatrix> deserialize_matrix(const std::string& payload) {
    std::istringstream in(payload);
    std::string magic, version, key, value;
    if (!(in >> magic >> version) || magic != "maclane-cache" || version != k_cache_version) return std::nullopt;
    if (!(in >> key >> value) || key != "kind" || value != "matrix") return std::nullopt;
    long long rows = -1, cols = -1, nnz = -1;
    if (!(in >> key >> rows) || key != "rows" || rows < 0) return std::nullopt;
    if (!(in >> key >> cols) || key != "cols" || cols < 0) return std::nullopt;
    if (!(in >> key >> nnz) || key != "nnz" || nnz < 0) return std::nullopt;
    SparseIntMatrix m(static_cast<int>(rows), static_cast<int>(cols));
    for (long long i = 0; i < nnz; ++i) {
        long long r = -1, c = -1;
        std::string digits;
        if (!(in >> r >> c >> digits) || r < 0 || r >= rows || c < 0 || c >= cols) return std::nullopt;
        try {
            m.set(static_cast<int>(r), static_cast<int>(c), Int(digits));
        } catch (...) {
            return std::nullopt;
        }
    }
    if (!(in >> key) || key != "end") return std::nullopt;
    return m;
}

/**
 * Disk-backed store for Q bases and differentials, keyed by
 * (normalized group spec, degree, artifact kind, format version). A
 * corrupt or stale payload is treated as a miss: the artifact is
 * recomputed and the file overwritten. Writes go through a temp file and
 * a rename. An empty directory disables caching.
 */
class QCache {
public:
    explicit QCache(std::string dir = "") : dir_(std::move(dir)) {}

    const std::string& directory() const { return dir_; }
    bool enabled() const { return !dir_.empty(); }

    QBasis basis(const FinAbGroup& group, int n, std::uint64_t budget = k_default_budget) const {
        const std::string spec = normalize_spec(group.to_spec());
        if (enabled()) {
            if (auto payload = read(cache_file_name(spec, n, "qbasis"))) {
                if (auto basis = deserialize_qbasis(*payload, group, n)) return std::move(*basis);
            }
        }
        QBasis computed = q_basis(group, n, budget);
        if (enabled()) detail::write_atomic(path_of(cache_file_name(spec, n, "qbasis")), serialize_qbasis(computed));
        return computed;
    }

    SparseIntMatrix delta(const FinAbGroup& group, int n, std::uint64_t budget = k_default_budget) const {
        const std::string spec = normalize_spec(group.to_spec());
        if (enabled()) {
            if (auto payload = read(cache_file_name(spec, n, "delta"))) {
                if (auto m = deserialize_matrix(*payload)) return std::move(*m);
            }
        }
        SparseIntMatrix computed = delta_matrix(basis(group, n, budget), basis(group, n - 1, budget));
        if (enabled()) detail::write_atomic(path_of(cache_file_name(spec, n, "delta")), serialize_matrix(computed));
        return computed;
    }

private:
    std::filesystem::path path_of(const std::string& name) const { return std::filesystem::path(dir_) / name; }

    std::optional<std::string> read(const std::string& name) const {
        std::ifstream in(path_of(name), std::ios::binary);
        if (!in) return std::nullopt;
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    std::string dir_;
};

} // namespace maclane
