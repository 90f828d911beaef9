#include "clusterkit/repmod.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include <json.hpp>

namespace clusterkit {

namespace {

long long mod_pos(long long x, long long p) {
    long long r = x % p;
    return r < 0 ? r + p : r;
}

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

bool is_prime_ll(long long x) {
    if (x < 2) return false;
    for (long long d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

std::vector<long long> prime_ladder(long long first, int count) {
    std::vector<long long> out;
    long long x = std::max<long long>(2, first);
    while ((int)out.size() < count) {
        if (is_prime_ll(x)) out.push_back(x);
        ++x;
    }
    return out;
}

} // namespace

long long inv_mod(long long x, long long p) {
    x = mod_pos(x, p);
    if (x == 0) fail(errc::div_by_zero, "inverse of 0 mod " + std::to_string(p));
    long long a = x, b = p, u = 1, v = 0;
    while (b != 0) {
        long long t = a / b;
        a -= t * b;
        std::swap(a, b);
        u -= t * v;
        std::swap(u, v);
    }
    return mod_pos(u, p);
}

FpMat FpMat::mul(const FpMat& o) const {
    if (cols != o.rows || p != o.p) fail(errc::shape_mismatch, "FpMat product");
    FpMat r(rows, o.cols, p);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            long long x = at(i, k);
            if (x == 0) continue;
            for (int j = 0; j < o.cols; ++j)
                r.at(i, j) = mod_pos(r.at(i, j) + x * o.at(k, j), p);
        }
    return r;
}

int row_reduce(FpMat& m, std::vector<int>* pivot_cols) {
    int rank = 0;
    for (int col = 0; col < m.cols && rank < m.rows; ++col) {
        int sel = -1;
        for (int i = rank; i < m.rows; ++i)
            if (m.at(i, col) != 0) {
                sel = i;
                break;
            }
        if (sel == -1) continue;
        for (int j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(rank, j));
        long long inv = inv_mod(m.at(rank, col), m.p);
        for (int j = 0; j < m.cols; ++j) m.at(rank, j) = mod_pos(m.at(rank, j) * inv, m.p);
        for (int i = 0; i < m.rows; ++i) {
            if (i == rank) continue;
            long long f = m.at(i, col);
            if (f == 0) continue;
            for (int j = 0; j < m.cols; ++j)
                m.at(i, j) = mod_pos(m.at(i, j) - f * m.at(rank, j), m.p);
        }
        if (pivot_cols) pivot_cols->push_back(col);
        ++rank;
    }
    return rank;
}

int rank_fp(FpMat m) { return row_reduce(m); }

FpMat nullspace(const FpMat& m) {
    FpMat r = m;
    std::vector<int> piv;
    int rank = row_reduce(r, &piv);
    std::vector<char> is_piv(m.cols, 0);
    for (int c : piv) is_piv[c] = 1;
    FpMat ker(m.cols, m.cols - rank, m.p);
    int kcol = 0;
    for (int fc = 0; fc < m.cols; ++fc) {
        if (is_piv[fc]) continue;
        ker.at(fc, kcol) = 1;
        for (int r2 = 0; r2 < rank; ++r2) ker.at(piv[r2], kcol) = mod_pos(-r.at(r2, fc), m.p);
        ++kcol;
    }
    return ker;
}

std::optional<std::vector<long long>> solve_linear(const FpMat& m, const std::vector<long long>& rhs) {
    if ((int)rhs.size() != m.rows) fail(errc::shape_mismatch, "solve_linear rhs length");
    FpMat aug(m.rows, m.cols + 1, m.p);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = mod_pos(rhs[i], m.p);
    }
    std::vector<int> piv;
    int rank = row_reduce(aug, &piv);
    for (int r = 0; r < rank; ++r)
        if (piv[r] == m.cols) return std::nullopt; // pivot in the rhs column: inconsistent
    std::vector<long long> x(m.cols, 0);
    for (int r = 0; r < rank; ++r) x[piv[r]] = aug.at(r, m.cols);
    return x;
}

std::string Representation::to_json() const {
    nlohmann::json j;
    j["prime"] = prime;
    j["dims"] = dims;
    nlohmann::json ms = nlohmann::json::object();
    for (size_t k = 0; k < mats.size(); ++k) {
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < mats[k].rows; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int jj = 0; jj < mats[k].cols; ++jj) row.push_back(mats[k].at(i, jj));
            rows.push_back(std::move(row));
        }
        ms[std::to_string(k + 1)] = std::move(rows);
    }
    j["matrices"] = std::move(ms);
    return j.dump();
}

Representation Representation::from_json(const Quiver& q, const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(errc::parse_error, std::string("representation JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("prime") || !j.contains("dims") || !j.contains("matrices"))
        fail(errc::parse_error, "representation JSON needs {\"prime\", \"dims\", \"matrices\"}");
    Representation m;
    m.q = q;
    m.prime = j["prime"].get<long long>();
    if (!is_prime_ll(m.prime)) fail(errc::bad_parameters, "prime field order required");
    m.dims = j["dims"].get<DimVector>();
    if ((int)m.dims.size() != q.vertices) fail(errc::length_mismatch, "dims length");
    if (!is_nonneg(m.dims)) fail(errc::negative_dim, "dims must be nonnegative");
    for (size_t k = 0; k < q.arrows.size(); ++k) {
        auto [s, t] = q.arrows[k];
        FpMat mat(m.dims[t], m.dims[s], m.prime);
        auto key = std::to_string(k + 1);
        if (j["matrices"].contains(key)) {
            auto& rows = j["matrices"][key];
            if ((int)rows.size() != mat.rows) fail(errc::shape_mismatch, "matrix " + key + " rows");
            for (int i = 0; i < mat.rows; ++i) {
                if ((int)rows[i].size() != mat.cols)
                    fail(errc::shape_mismatch, "matrix " + key + " cols");
                for (int jj = 0; jj < mat.cols; ++jj)
                    mat.at(i, jj) = mod_pos(rows[i][jj].get<long long>(), m.prime);
            }
        } else if (mat.rows > 0 && mat.cols > 0) {
            fail(errc::parse_error, "missing matrix for arrow " + key);
        }
        m.mats.push_back(std::move(mat));
    }
    return m;
}

Representation zero_representation(const Quiver& q, const DimVector& d, long long p) {
    if ((int)d.size() != q.vertices) fail(errc::length_mismatch, "dims length");
    if (!is_nonneg(d)) fail(errc::negative_dim, "dims must be nonnegative");
    Representation m;
    m.q = q;
    m.prime = p;
    m.dims = d;
    for (auto [s, t] : q.arrows) m.mats.emplace_back(d[t], d[s], p);
    return m;
}

Representation random_representation(const Quiver& q, const DimVector& d, long long p,
                                     std::uint64_t seed) {
    Representation m = zero_representation(q, d, p);
    std::mt19937_64 rng(mix64(seed, (std::uint64_t)p));
    for (auto& mat : m.mats)
        for (auto& x : mat.a) x = (long long)(rng() % (std::uint64_t)p);
    return m;
}

int hom_dimension(const Representation& M, const Representation& N) {
    if (M.q.vertices != N.q.vertices || M.q.arrows != N.q.arrows)
        fail(errc::quiver_mismatch, "hom_dimension needs one quiver");
    if (M.prime != N.prime) fail(errc::prime_mismatch, "hom_dimension needs one prime");
    const int n = M.q.vertices;
    const long long p = M.prime;
    // unknowns: f_j (N.dims[j] x M.dims[j]), flattened row-major per vertex
    std::vector<int> off(n + 1, 0);
    for (int j = 0; j < n; ++j) off[j + 1] = off[j] + N.dims[j] * M.dims[j];
    int unknowns = off[n];
    int eqs = 0;
    for (size_t a = 0; a < M.q.arrows.size(); ++a) {
        auto [s, t] = M.q.arrows[a];
        eqs += N.dims[t] * M.dims[s];
    }
    if (unknowns == 0) return 0;
    FpMat sys(std::max(eqs, 1), unknowns, p);
    int row = 0;
    for (size_t a = 0; a < M.q.arrows.size(); ++a) {
        auto [s, t] = M.q.arrows[a];
        const FpMat& Ma = M.mats[a]; // M.dims[t] x M.dims[s]
        const FpMat& Na = N.mats[a]; // N.dims[t] x N.dims[s]
        // (f_t Ma - Na f_s)[r][c] = 0
        for (int r = 0; r < N.dims[t]; ++r)
            for (int c = 0; c < M.dims[s]; ++c) {
                for (int k = 0; k < M.dims[t]; ++k)
                    sys.at(row, off[t] + r * M.dims[t] + k) =
                        mod_pos(sys.at(row, off[t] + r * M.dims[t] + k) + Ma.at(k, c), p);
                for (int k = 0; k < N.dims[s]; ++k)
                    sys.at(row, off[s] + k * M.dims[s] + c) =
                        mod_pos(sys.at(row, off[s] + k * M.dims[s] + c) - Na.at(r, k), p);
                ++row;
            }
    }
    return unknowns - row_reduce(sys);
}

namespace {

// Row-reduced-echelon bases of all k-dimensional subspaces of GF(p)^d.
struct Subspace {
    std::vector<std::vector<long long>> rows;
    std::vector<int> pivots;
};

bool member(const Subspace& u, std::vector<long long> w, long long p) {
    for (size_t r = 0; r < u.rows.size(); ++r) {
        long long f = w[u.pivots[r]];
        if (f == 0) continue;
        for (size_t j = 0; j < w.size(); ++j) w[j] = mod_pos(w[j] - f * u.rows[r][j], p);
    }
    return std::all_of(w.begin(), w.end(), [](long long x) { return x == 0; });
}

void enumerate_subspaces(int d, int k, long long p, std::vector<Subspace>& out) {
    out.clear();
    if (k == 0) {
        out.push_back({});
        return;
    }
    std::vector<int> piv(k);
    for (int i = 0; i < k; ++i) piv[i] = i;
    while (true) {
        // free positions: (row r, col c) with c > piv[r], c not a pivot column
        std::vector<std::pair<int, int>> free_pos;
        std::vector<char> is_piv(d, 0);
        for (int c : piv) is_piv[c] = 1;
        for (int r = 0; r < k; ++r)
            for (int c = piv[r] + 1; c < d; ++c)
                if (!is_piv[c]) free_pos.emplace_back(r, c);
        std::vector<long long> vals(free_pos.size(), 0);
        while (true) {
            Subspace u;
            u.pivots = piv;
            u.rows.assign(k, std::vector<long long>(d, 0));
            for (int r = 0; r < k; ++r) u.rows[r][piv[r]] = 1;
            for (size_t f = 0; f < free_pos.size(); ++f)
                u.rows[free_pos[f].first][free_pos[f].second] = vals[f];
            out.push_back(std::move(u));
            size_t f = 0;
            while (f < vals.size() && vals[f] == p - 1) vals[f++] = 0;
            if (f == vals.size()) break;
            ++vals[f];
        }
        // next pivot combination in lexicographic order
        int i = k - 1;
        while (i >= 0 && piv[i] == d - k + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
    }
}

} // namespace

mpz_class count_subrepresentations(const Representation& M, const DimVector& e,
                                   const EnumCaps& caps) {
    const int n = M.q.vertices;
    if ((int)e.size() != n) fail(errc::length_mismatch, "subrepresentation dims length");
    for (int i = 0; i < n; ++i)
        if (e[i] < 0 || e[i] > M.dims[i]) fail(errc::bad_dims, "need 0 <= e <= dim M");
    if (total(M.dims) > caps.total)
        fail(errc::enum_cap_exceeded,
             "total dimension " + std::to_string(total(M.dims)) + " exceeds cap " +
                 std::to_string(caps.total));
    for (int i = 0; i < n; ++i)
        if (M.dims[i] > caps.per_vertex)
            fail(errc::enum_cap_exceeded, "vertex dimension exceeds cap");

    const long long p = M.prime;
    std::vector<std::vector<Subspace>> options(n);
    for (int i = 0; i < n; ++i) enumerate_subspaces(M.dims[i], e[i], p, options[i]);

    // arrows checked as soon as both endpoints are fixed
    std::vector<std::vector<int>> ready(n);
    for (size_t a = 0; a < M.q.arrows.size(); ++a)
        ready[std::max(M.q.arrows[a].first, M.q.arrows[a].second)].push_back((int)a);

    std::vector<const Subspace*> chosen(n, nullptr);
    mpz_class count = 0;
    std::function<void(int)> rec = [&](int v) {
        if (v == n) {
            ++count;
            return;
        }
        for (const auto& u : options[v]) {
            chosen[v] = &u;
            bool ok = true;
            for (int a : ready[v]) {
                auto [s, t] = M.q.arrows[a];
                const Subspace& us = *chosen[s];
                const Subspace& ut = *chosen[t];
                for (const auto& row : us.rows) {
                    std::vector<long long> img(M.dims[t], 0);
                    for (int r2 = 0; r2 < M.dims[t]; ++r2) {
                        long long acc = 0;
                        for (int c2 = 0; c2 < M.dims[s]; ++c2) acc += M.mats[a].at(r2, c2) * row[c2];
                        img[r2] = mod_pos(acc, p);
                    }
                    if (!member(ut, std::move(img), p)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
            if (ok) rec(v + 1);
        }
        chosen[v] = nullptr;
    };
    rec(0);
    return count;
}

mpz_class CountingPolynomial::at(long long q) const {
    mpz_class acc = 0, pw = 1;
    const mpz_class qz((long)q);
    for (const auto& c : coeffs) {
        acc += c * pw;
        pw *= qz;
    }
    return acc;
}

mpz_class CountingPolynomial::chi() const {
    mpz_class acc = 0;
    for (const auto& c : coeffs) acc += c;
    return acc;
}

CountingPolynomial counting_polynomial(const RepFamily& family, const DimVector& e,
                                       const CountOptions& opts) {
    std::vector<long long> ladder = opts.primes;
    Representation probe = family(ladder.empty() ? prime_ladder(opts.min_prime, 1)[0] : ladder[0]);
    const DimVector d = probe.dims;
    if (e.size() != d.size()) fail(errc::length_mismatch, "chi dims length");
    int bound = 0;
    for (size_t i = 0; i < d.size(); ++i) {
        if (e[i] < 0 || e[i] > d[i]) fail(errc::bad_dims, "need 0 <= e <= dim M");
        bound += e[i] * (d[i] - e[i]);
    }
    const int need = bound + 2; // bound+1 interpolation points and one held out
    if (ladder.empty()) {
        ladder = prime_ladder(opts.min_prime, need);
    } else {
        std::sort(ladder.begin(), ladder.end());
        ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
        for (long long p : ladder)
            if (!is_prime_ll(p)) fail(errc::bad_parameters, "non-prime in the prime ladder");
        if ((int)ladder.size() < need)
            fail(errc::bad_parameters, "prime ladder needs at least " + std::to_string(need) +
                                           " distinct primes for this dimension vector");
        ladder.resize(need);
    }

    std::vector<mpz_class> counts;
    for (long long p : ladder) {
        Representation rep = family(p);
        if (rep.dims != d) fail(errc::shape_mismatch, "family changed dimensions across primes");
        if (rep.prime != p) fail(errc::prime_mismatch, "family ignored the requested prime");
        counts.push_back(count_subrepresentations(rep, e, opts.caps));
    }

    // Newton interpolation through the first bound+1 samples.
    const int m = bound + 1;
    std::vector<mpq_class> dd(m);
    for (int i = 0; i < m; ++i) dd[i] = mpq_class(counts[i]);
    for (int level = 1; level < m; ++level)
        for (int i = m - 1; i >= level; --i) {
            mpq_class num = dd[i] - dd[i - 1];
            mpq_class den = mpq_class((long)(ladder[i] - ladder[i - level]));
            dd[i] = num / den;
            dd[i].canonicalize();
        }
    std::vector<mpq_class> coeffs(m, mpq_class(0));    // monomial basis
    std::vector<mpq_class> basis(m + 1, mpq_class(0)); // prod_{j<level} (q - x_j)
    basis[0] = 1;
    int basis_deg = 0;
    for (int level = 0; level < m; ++level) {
        for (int k = 0; k <= basis_deg; ++k) coeffs[k] += dd[level] * basis[k];
        // basis *= (q - x_level)
        for (int k = basis_deg + 1; k > 0; --k)
            basis[k] = basis[k] * mpq_class((long)(-ladder[level])) + basis[k - 1];
        basis[0] *= mpq_class((long)(-ladder[level]));
        ++basis_deg;
    }

    CountingPolynomial poly;
    poly.degree_bound = bound;
    poly.primes_used = ladder;
    for (int k = 0; k < m; ++k) {
        mpq_class c = coeffs[k];
        c.canonicalize();
        if (c.get_den() != 1)
            fail(errc::not_polynomial_count, "interpolated coefficient is not an integer");
        poly.coeffs.push_back(c.get_num());
    }
    while (poly.coeffs.size() > 1 && poly.coeffs.back() == 0) poly.coeffs.pop_back();
    if (poly.at(ladder[m]) != counts[m])
        fail(errc::not_polynomial_count,
             "held-out prime " + std::to_string(ladder[m]) + " disagrees with the fit");
    return poly;
}

mpz_class euler_characteristic(const RepFamily& family, const DimVector& e,
                               const CountOptions& opts) {
    return counting_polynomial(family, e, opts).chi();
}

Laurent cc_map_direct(const Quiver& q, const RepFamily& family, const CountOptions& opts) {
    validate_quiver(q);
    const int n = q.vertices;
    auto cache = std::make_shared<std::map<long long, Representation>>();
    RepFamily memo = [family, cache](long long p) -> Representation {
        auto it = cache->find(p);
        if (it == cache->end()) it = cache->emplace(p, family(p)).first;
        return it->second;
    };
    long long probe_p = opts.primes.empty() ? prime_ladder(opts.min_prime, 1)[0] : opts.primes[0];
    const DimVector d = memo(probe_p).dims;

    std::vector<std::vector<int>> R(n, std::vector<int>(n, 0));
    for (auto [s, t] : q.arrows) ++R[s][t];

    Laurent x = Laurent::zero(n);
    DimVector e(n, 0);
    while (true) {
        mpz_class chi = euler_characteristic(memo, e, opts);
        if (chi != 0) {
            Exp v(n, 0);
            for (int j = 0; j < n; ++j) {
                long long acc = -d[j];
                for (int i = 0; i < n; ++i) acc += e[i] * R[i][j] + (d[i] - e[i]) * R[j][i];
                v[j] = (int)acc;
            }
            x += Laurent::monomial(n, v, chi);
        }
        int i = 0;
        while (i < n && e[i] == d[i]) e[i++] = 0;
        if (i == (int)n) break;
        ++e[i];
    }
    return x;
}

RepFamily fixed_family(Representation rep) {
    for (const auto& m : rep.mats)
        for (long long x : m.a)
            if (x != 0 && x != 1)
                fail(errc::bad_parameters, "fixed_family needs 0/1 matrices");
    return [rep](long long p) {
        Representation r = rep;
        r.prime = p;
        for (auto& m : r.mats) m.p = p;
        return r;
    };
}

ModuleKind ModuleKind::projective_at(int v) {
    ModuleKind k;
    k.tag = Tag::projective;
    k.vertex = v;
    return k;
}
ModuleKind ModuleKind::injective_at(int v) {
    ModuleKind k;
    k.tag = Tag::injective;
    k.vertex = v;
    return k;
}
ModuleKind ModuleKind::exceptional(DimVector d) {
    ModuleKind k;
    k.tag = Tag::exceptional;
    k.d = std::move(d);
    return k;
}
ModuleKind ModuleKind::generic_delta() {
    ModuleKind k;
    k.tag = Tag::generic_delta;
    return k;
}
ModuleKind ModuleKind::tube_simple(std::string tube, int index) {
    ModuleKind k;
    k.tag = Tag::tube_simple;
    k.tube = std::move(tube);
    k.index = index;
    return k;
}
ModuleKind ModuleKind::tube_module(std::string tube, int index, int length) {
    ModuleKind k;
    k.tag = Tag::tube_module;
    k.tube = std::move(tube);
    k.index = index;
    k.length = length;
    return k;
}
ModuleKind ModuleKind::generic_regular(int n) {
    ModuleKind k;
    k.tag = Tag::generic_regular;
    k.n = n;
    return k;
}
ModuleKind ModuleKind::cyclic_tube(int rank, int index, int length) {
    ModuleKind k;
    k.tag = Tag::cyclic_tube;
    k.rank = rank;
    k.index = index;
    k.length = length;
    return k;
}

namespace {

// Enumerate all paths out of `from` (resp. into `from` on the reversed quiver),
// depth-first in arrow order: stable bases for projectives and injectives.
void collect_paths(const Quiver& q, int v, bool forward, std::vector<int>& cur,
                   std::vector<std::pair<int, std::vector<int>>>& out) {
    out.emplace_back(v, cur);
    for (size_t a = 0; a < q.arrows.size(); ++a) {
        auto [s, t] = q.arrows[a];
        if (forward ? (s == v) : (t == v)) {
            cur.push_back((int)a);
            collect_paths(q, forward ? t : s, forward, cur, out);
            cur.pop_back();
        }
    }
}

Representation projective_rep(const Quiver& q, int vertex0, long long p) {
    std::vector<int> cur;
    std::vector<std::pair<int, std::vector<int>>> paths;
    collect_paths(q, vertex0, true, cur, paths);
    const int n = q.vertices;
    std::vector<std::map<std::vector<int>, int>> index(n);
    DimVector d(n, 0);
    for (auto& [endv, pa] : paths) index[endv].emplace(pa, d[endv]++);
    Representation m = zero_representation(q, d, p);
    for (size_t a = 0; a < q.arrows.size(); ++a) {
        auto [s, t] = q.arrows[a];
        for (const auto& [pa, col] : index[s]) {
            std::vector<int> ext = pa;
            ext.push_back((int)a);
            m.mats[a].at(index[t].at(ext), col) = 1;
        }
    }
    return m;
}

Representation injective_rep(const Quiver& q, int vertex0, long long p) {
    // paths into vertex0, stored source-to-target; arrow a->b prepends to paths b->i
    std::vector<int> cur;
    std::vector<std::pair<int, std::vector<int>>> rev;
    collect_paths(q, vertex0, false, cur, rev);
    const int n = q.vertices;
    std::vector<std::map<std::vector<int>, int>> index(n);
    DimVector d(n, 0);
    for (auto& [startv, pa] : rev) {
        std::vector<int> fwd(pa.rbegin(), pa.rend());
        index[startv].emplace(fwd, d[startv]++);
    }
    Representation m = zero_representation(q, d, p);
    for (size_t a = 0; a < q.arrows.size(); ++a) {
        auto [s, t] = q.arrows[a];
        for (const auto& [pa, row] : index[t]) {
            std::vector<int> ext;
            ext.push_back((int)a);
            ext.insert(ext.end(), pa.begin(), pa.end());
            m.mats[a].at(row, index[s].at(ext)) = 1;
        }
    }
    return m;
}

// Block extension [[S, Z], [0, Q]] with a seeded random cocycle Z.
Representation extension_with_random_cocycle(const Representation& S, const Representation& Q,
                                             std::mt19937_64& rng) {
    const long long p = S.prime;
    Representation m = zero_representation(S.q, add(S.dims, Q.dims), p);
    for (size_t a = 0; a < S.q.arrows.size(); ++a) {
        auto [s, t] = S.q.arrows[a];
        const int ds_s = S.dims[s], ds_t = S.dims[t];
        const int dq_s = Q.dims[s];
        for (int i = 0; i < ds_t; ++i)
            for (int j = 0; j < ds_s; ++j) m.mats[a].at(i, j) = S.mats[a].at(i, j);
        for (int i = 0; i < Q.dims[t]; ++i)
            for (int j = 0; j < dq_s; ++j) m.mats[a].at(ds_t + i, ds_s + j) = Q.mats[a].at(i, j);
        for (int i = 0; i < ds_t; ++i)
            for (int j = 0; j < dq_s; ++j)
                m.mats[a].at(i, ds_s + j) = (long long)(rng() % (std::uint64_t)p);
    }
    return m;
}

const TubeShape& tube_of(const std::vector<TubeShape>& tubes, const std::string& label) {
    for (const auto& t : tubes)
        if (t.label == label) return t;
    fail(errc::unknown_tube, "no tube labelled " + label);
}

} // namespace

Representation cyclic_tube_model(int rank, int index, int length, long long p) {
    if (rank < 1 || length < 1) fail(errc::bad_parameters, "cyclic model needs rank,length >= 1");
    Quiver cyc;
    cyc.vertices = rank;
    for (int v = 0; v < rank; ++v) cyc.arrows.emplace_back(v, (v - 1 + rank) % rank);
    const int i0 = ((index - 1) % rank + rank) % rank;
    DimVector d(rank, 0);
    std::vector<int> vertex_of(length), pos(length);
    for (int k = 0; k < length; ++k) {
        vertex_of[k] = (i0 + k) % rank;
        pos[k] = d[vertex_of[k]]++;
    }
    Representation m;
    m.q = cyc;
    m.prime = p;
    m.dims = d;
    for (auto [s, t] : cyc.arrows) m.mats.emplace_back(d[t], d[s], p);
    for (int k = 1; k < length; ++k) {
        int v = vertex_of[k]; // arrow v -> v-1 carries b_k to b_{k-1}
        m.mats[v].at(pos[k - 1], pos[k]) = 1;
    }
    return m;
}

Representation construct_module(const Quiver& q, const ModuleKind& kind, long long p,
                                std::uint64_t seed) {
    if (!is_prime_ll(p)) fail(errc::bad_parameters, "prime field order required");
    switch (kind.tag) {
        case ModuleKind::Tag::projective: {
            validate_quiver(q);
            if (kind.vertex < 1 || kind.vertex > q.vertices) fail(errc::bad_index, "vertex");
            return projective_rep(q, kind.vertex - 1, p);
        }
        case ModuleKind::Tag::injective: {
            validate_quiver(q);
            if (kind.vertex < 1 || kind.vertex > q.vertices) fail(errc::bad_index, "vertex");
            return injective_rep(q, kind.vertex - 1, p);
        }
        case ModuleKind::Tag::cyclic_tube:
            return cyclic_tube_model(kind.rank, kind.index, kind.length, p);
        case ModuleKind::Tag::exceptional: {
            auto ed = euler_data(q);
            if ((int)kind.d.size() != q.vertices) fail(errc::length_mismatch, "dims length");
            if (!is_nonneg(kind.d) || is_zero_vec(kind.d) || ed.tits_q(kind.d) != 1)
                fail(errc::not_schur_root, "Exceptional needs a positive real Schur root");
            for (int attempt = 0; attempt < 32; ++attempt) {
                Representation m =
                    random_representation(q, kind.d, p, mix64(seed, 101 + attempt));
                if (hom_dimension(m, m) == 1) return m;
            }
            fail(errc::certification_failed, "no rigid representative after 32 seeds");
        }
        case ModuleKind::Tag::generic_delta:
        case ModuleKind::Tag::generic_regular: {
            auto ed = euler_data(q);
            if (!ed.cls.affine()) fail(errc::not_affine, "generic modules need an affine quiver");
            auto tubes = regular_simple_orbits(ed);
            std::vector<Representation> mouth;
            for (size_t ti = 0; ti < tubes.size(); ++ti)
                for (int s = 0; s < tubes[ti].rank; ++s)
                    mouth.push_back(construct_module(
                        q, ModuleKind::exceptional(tubes[ti].simples[s]), p,
                        mix64(seed, 7000 + 100 * ti + s)));
            Representation base;
            bool have_base = false;
            for (int attempt = 0; attempt < 32 && !have_base; ++attempt) {
                Representation m =
                    random_representation(q, ed.delta, p, mix64(seed, 3000 + attempt));
                if (hom_dimension(m, m) != 1) continue;
                bool clear = true;
                for (const auto& t : mouth)
                    if (hom_dimension(t, m) != 0 || hom_dimension(m, t) != 0) {
                        clear = false;
                        break;
                    }
                if (clear) {
                    base = std::move(m);
                    have_base = true;
                }
            }
            if (!have_base)
                fail(errc::certification_failed,
                     "no generic delta representative after 32 seeds (small prime?)");
            if (kind.tag == ModuleKind::Tag::generic_delta) return base;
            if (kind.n < 1) fail(errc::bad_parameters, "generic_regular multiplicity >= 1");
            Representation cur = base;
            for (int level = 2; level <= kind.n; ++level) {
                bool ok = false;
                for (int attempt = 0; attempt < 32 && !ok; ++attempt) {
                    std::mt19937_64 rng(mix64(seed, 9000 + 64 * level + attempt));
                    Representation cand = extension_with_random_cocycle(cur, base, rng);
                    if (hom_dimension(cand, cand) == level) {
                        cur = std::move(cand);
                        ok = true;
                    }
                }
                if (!ok) fail(errc::certification_failed, "generic regular extension step failed");
            }
            return cur;
        }
        case ModuleKind::Tag::tube_simple:
        case ModuleKind::Tag::tube_module: {
            auto ed = euler_data(q);
            if (!ed.cls.affine()) fail(errc::not_affine, "tube modules need an affine quiver");
            auto tubes = regular_simple_orbits(ed);
            const TubeShape& tube = tube_of(tubes, kind.tube);
            const int r = tube.rank;
            if (kind.index < 1 || kind.index > r) fail(errc::bad_index, "tube simple index");
            const int len = kind.tag == ModuleKind::Tag::tube_simple ? 1 : kind.length;
            if (len < 1) fail(errc::bad_length, "quasi-length >= 1");
            auto simple_at = [&](int s1based) {
                int s0 = ((s1based - 1) % r + r) % r;
                return construct_module(q, ModuleKind::exceptional(tube.simples[s0]), p,
                                        mix64(seed, 5000 + s0));
            };
            Representation cur = simple_at(kind.index);
            for (int level = 2; level <= len; ++level) {
                Representation top = simple_at(kind.index + level - 1);
                const int expected_end = (level - 1) / r + 1;
                bool ok = false;
                for (int attempt = 0; attempt < 32 && !ok; ++attempt) {
                    std::mt19937_64 rng(mix64(seed, 11000 + 64 * level + attempt));
                    Representation cand = extension_with_random_cocycle(cur, top, rng);
                    if (hom_dimension(cand, cand) == expected_end) {
                        cur = std::move(cand);
                        ok = true;
                    }
                }
                if (!ok) fail(errc::certification_failed, "tube extension step failed");
            }
            return cur;
        }
    }
    fail(errc::internal, "unhandled module kind");
}

RepFamily module_family(const Quiver& q, const ModuleKind& kind, std::uint64_t seed) {
    return [q, kind, seed](long long p) { return construct_module(q, kind, p, seed); };
}

} // namespace clusterkit
