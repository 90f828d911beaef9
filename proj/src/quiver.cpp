#include "clusterkit/quiver.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include <gmpxx.h>
#include <json.hpp>

namespace clusterkit {

DimVector add(const DimVector& a, const DimVector& b) {
    if (a.size() != b.size()) fail(errc::length_mismatch, "vector addition");
    DimVector r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

DimVector sub(const DimVector& a, const DimVector& b) {
    if (a.size() != b.size()) fail(errc::length_mismatch, "vector subtraction");
    DimVector r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

DimVector scale(const DimVector& a, int k) {
    DimVector r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = k * a[i];
    return r;
}

bool leq(const DimVector& a, const DimVector& b) {
    if (a.size() != b.size()) fail(errc::length_mismatch, "vector comparison");
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

bool strictly_less(const DimVector& a, const DimVector& b) { return leq(a, b) && a != b; }

bool is_nonneg(const DimVector& a) {
    return std::all_of(a.begin(), a.end(), [](int x) { return x >= 0; });
}

bool is_zero_vec(const DimVector& a) {
    return std::all_of(a.begin(), a.end(), [](int x) { return x == 0; });
}

int total(const DimVector& a) { return std::accumulate(a.begin(), a.end(), 0); }

std::string show(const DimVector& a) {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) os << ',';
        os << a[i];
    }
    os << ')';
    return os.str();
}

std::string Quiver::to_json() const {
    nlohmann::json j;
    j["vertices"] = vertices;
    auto arr = nlohmann::json::array();
    for (const auto& [s, t] : arrows) arr.push_back({s + 1, t + 1});
    j["arrows"] = std::move(arr);
    return j.dump();
}

Quiver Quiver::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(errc::parse_error, std::string("quiver JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j.contains("arrows"))
        fail(errc::parse_error, "quiver JSON needs {\"vertices\", \"arrows\"}");
    Quiver q;
    if (!j["vertices"].is_number_integer())
        fail(errc::parse_error, "\"vertices\" must be an integer");
    q.vertices = j["vertices"].get<int>();
    if (!j["arrows"].is_array()) fail(errc::parse_error, "\"arrows\" must be an array");
    for (const auto& a : j["arrows"]) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() ||
            !a[1].is_number_integer())
            fail(errc::parse_error, "each arrow must be a pair of integers");
        q.arrows.emplace_back(a[0].get<int>() - 1, a[1].get<int>() - 1);
    }
    validate_quiver(q);
    return q;
}

void validate_quiver(const Quiver& q) {
    const int n = q.vertices;
    if (n < 1) fail(errc::bad_index, "quiver needs at least one vertex");
    for (const auto& [s, t] : q.arrows)
        if (s < 0 || s >= n || t < 0 || t >= n)
            fail(errc::bad_index,
                 "arrow endpoint out of range: (" + std::to_string(s + 1) + "," +
                     std::to_string(t + 1) + ")");

    // Connectivity of the underlying graph.
    std::vector<std::vector<int>> adj(n);
    for (const auto& [s, t] : q.arrows) {
        adj[s].push_back(t);
        adj[t].push_back(s);
    }
    std::vector<char> seen(n, 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                bfs.push(w);
            }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        fail(errc::disconnected, "underlying graph is not connected");

    // Acyclicity via Kahn's algorithm.
    std::vector<int> indeg(n, 0);
    for (const auto& [s, t] : q.arrows) {
        (void)s;
        ++indeg[t];
    }
    std::queue<int> ready;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push(v);
    int done = 0;
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop();
        ++done;
        for (const auto& [s, t] : q.arrows)
            if (s == v && --indeg[t] == 0) ready.push(t);
    }
    if (done != n) fail(errc::cyclic_quiver, "quiver has an oriented cycle");
}

IMat IMat::identity(int n) {
    IMat m;
    m.n = n;
    m.a.assign((size_t)n * n, 0);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IMat IMat::mul(const IMat& o) const {
    if (n != o.n) fail(errc::length_mismatch, "matrix product");
    IMat r;
    r.n = n;
    r.a.assign((size_t)n * n, 0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            long long x = at(i, k);
            if (x == 0) continue;
            for (int j = 0; j < n; ++j) r.at(i, j) += x * o.at(k, j);
        }
    return r;
}

DimVector IMat::apply(const DimVector& d) const {
    if ((int)d.size() != n) fail(errc::length_mismatch, "matrix-vector product");
    DimVector r(n, 0);
    for (int i = 0; i < n; ++i) {
        long long acc = 0;
        for (int j = 0; j < n; ++j) acc += at(i, j) * d[j];
        r[i] = (int)acc;
    }
    return r;
}

std::string QuiverClass::name() const {
    switch (kind) {
        case QuiverKind::A_tilde: return "A_tilde(" + std::to_string(p) + "," + std::to_string(q) + ")";
        case QuiverKind::D_tilde: return "D_tilde(" + std::to_string(n) + ")";
        case QuiverKind::E_tilde: return "E_tilde(" + std::to_string(n) + ")";
        case QuiverKind::finite: return "finite";
        case QuiverKind::other: return "other";
    }
    return "other";
}

namespace {

// Branch lengths of a tree seen from vertex c (vertex counts of each arm).
std::vector<int> branch_lengths(const std::vector<std::vector<int>>& adj, int c) {
    std::vector<int> lens;
    for (int w0 : adj[c]) {
        int len = 0;
        int prev = c, cur = w0;
        while (true) {
            ++len;
            int next = -1;
            for (int x : adj[cur])
                if (x != prev) next = x;
            if (next == -1) break; // leaf
            prev = cur;
            cur = next;
        }
        lens.push_back(len);
    }
    std::sort(lens.begin(), lens.end());
    return lens;
}

} // namespace

QuiverClass classify(const Quiver& q) {
    const int n = q.vertices;
    const int m = (int)q.arrows.size();
    QuiverClass c;

    std::vector<std::vector<int>> adj(n); // undirected, parallel edges kept
    for (const auto& [s, t] : q.arrows) {
        adj[s].push_back(t);
        adj[t].push_back(s);
    }
    std::vector<int> deg(n);
    for (int v = 0; v < n; ++v) deg[v] = (int)adj[v].size();

    if (m == n && std::all_of(deg.begin(), deg.end(), [](int d) { return d == 2; })) {
        // Single cycle: count arrows along and against a traversal.
        std::vector<char> used(m, 0);
        std::vector<std::vector<int>> inc(n); // incident arrow ids
        for (int a = 0; a < m; ++a) {
            inc[q.arrows[a].first].push_back(a);
            inc[q.arrows[a].second].push_back(a);
        }
        int cur = 0, fwd = 0, bwd = 0;
        for (int step = 0; step < m; ++step) {
            int eid = -1;
            for (int a : inc[cur])
                if (!used[a]) {
                    eid = a;
                    break;
                }
            if (eid == -1) return c; // not a single cycle after all
            used[eid] = 1;
            if (q.arrows[eid].first == cur) {
                ++fwd;
                cur = q.arrows[eid].second;
            } else {
                ++bwd;
                cur = q.arrows[eid].first;
            }
        }
        if (cur != 0 || fwd + bwd != m || fwd == 0 || bwd == 0) return c;
        c.kind = QuiverKind::A_tilde;
        c.p = std::max(fwd, bwd);
        c.q = std::min(fwd, bwd);
        return c;
    }

    if (m != n - 1) return c; // neither cycle nor tree: wild
    // Tree shapes.
    std::vector<int> big; // vertices of degree >= 3
    for (int v = 0; v < n; ++v)
        if (deg[v] >= 3) big.push_back(v);

    if (big.empty()) {
        c.kind = QuiverKind::finite; // path = type A
        return c;
    }
    if (big.size() == 1) {
        int v = big[0];
        if (deg[v] == 4) {
            auto lens = branch_lengths(adj, v);
            if (lens == std::vector<int>{1, 1, 1, 1}) {
                c.kind = QuiverKind::D_tilde;
                c.n = 4;
            }
            return c;
        }
        if (deg[v] > 4) return c;
        auto lens = branch_lengths(adj, v);
        if (lens[0] == 1 && lens[1] == 1) {
            c.kind = QuiverKind::finite; // type D
            return c;
        }
        if (lens == std::vector<int>{1, 2, 2} || lens == std::vector<int>{1, 2, 3} ||
            lens == std::vector<int>{1, 2, 4}) {
            c.kind = QuiverKind::finite; // E6/E7/E8
            return c;
        }
        if (lens == std::vector<int>{2, 2, 2}) {
            c.kind = QuiverKind::E_tilde;
            c.n = 6;
        } else if (lens == std::vector<int>{1, 3, 3}) {
            c.kind = QuiverKind::E_tilde;
            c.n = 7;
        } else if (lens == std::vector<int>{1, 2, 5}) {
            c.kind = QuiverKind::E_tilde;
            c.n = 8;
        }
        return c;
    }
    if (big.size() == 2 && deg[big[0]] == 3 && deg[big[1]] == 3) {
        // D_tilde(n): each fork carries exactly two leaves.
        for (int v : big) {
            int leaves = 0;
            for (int w : adj[v])
                if (deg[w] == 1) ++leaves;
            if (leaves != 2) return c;
        }
        c.kind = QuiverKind::D_tilde;
        c.n = n - 1;
        return c;
    }
    return c;
}

long long EulerData::euler_form(const DimVector& d, const DimVector& e) const {
    if ((int)d.size() != n || (int)e.size() != n)
        fail(errc::length_mismatch, "euler_form expects vectors of length " + std::to_string(n));
    long long acc = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += d[i] * E.at(i, j) * e[j];
    return acc;
}

long long EulerData::sym_form(const DimVector& d, const DimVector& e) const {
    return euler_form(d, e) + euler_form(e, d);
}

long long EulerData::defect(const DimVector& d) const {
    if (delta.empty()) fail(errc::not_affine, "defect needs an affine quiver");
    return euler_form(delta, d);
}

DimVector EulerData::coxeter(const DimVector& d, long long power) const {
    if ((int)d.size() != n) fail(errc::length_mismatch, "coxeter expects length " + std::to_string(n));
    const IMat& M = power >= 0 ? Phi : PhiInv;
    DimVector r = d;
    for (long long k = std::llabs(power); k > 0; --k) r = M.apply(r);
    return r;
}

namespace {

// Reflection matrix at v for the underlying valued graph: identity except row v,
// where (S_v)_vv = -1 and (S_v)_vw = #edges v-w.
IMat reflection_matrix(const Quiver& q, int v) {
    IMat s = IMat::identity(q.vertices);
    s.at(v, v) = -1;
    for (const auto& [a, b] : q.arrows) {
        if (a == v && b != v) s.at(v, b) += 1;
        if (b == v && a != v) s.at(v, a) += 1;
    }
    return s;
}

std::vector<int> sinks_first_order(const Quiver& q) {
    const int n = q.vertices;
    std::vector<int> outdeg(n, 0);
    for (const auto& [s, t] : q.arrows) {
        (void)t;
        ++outdeg[s];
    }
    std::vector<char> peeled(n, 0);
    std::vector<int> order;
    for (int round = 0; round < n; ++round) {
        int pick = -1;
        for (int v = 0; v < n && pick == -1; ++v)
            if (!peeled[v] && outdeg[v] == 0) pick = v;
        if (pick == -1) fail(errc::internal, "no sink while peeling an acyclic quiver");
        peeled[pick] = 1;
        order.push_back(pick);
        for (const auto& [s, t] : q.arrows)
            if (t == pick && !peeled[s]) --outdeg[s];
    }
    return order;
}

// Primitive positive generator of the 1-dimensional kernel of S; empty if the
// kernel is not 1-dimensional or no strictly positive generator exists.
DimVector radical_generator(const IMat& S) {
    const int n = S.n;
    std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = mpq_class((long)S.at(i, j));

    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < n && row < n; ++col) {
        int sel = -1;
        for (int i = row; i < n; ++i)
            if (a[i][col] != 0) {
                sel = i;
                break;
            }
        if (sel == -1) continue;
        std::swap(a[sel], a[row]);
        mpq_class inv = a[row][col];
        for (int j = 0; j < n; ++j) a[row][j] /= inv;
        for (int i = 0; i < n; ++i) {
            if (i == row || a[i][col] == 0) continue;
            mpq_class f = a[i][col];
            for (int j = 0; j < n; ++j) a[i][j] -= f * a[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }
    if (row != n - 1) return {}; // kernel dimension != 1

    int free_col = 0;
    while (std::find(pivot_col.begin(), pivot_col.end(), free_col) != pivot_col.end()) ++free_col;
    std::vector<mpq_class> v(n, 0);
    v[free_col] = 1;
    for (int r = 0; r < row; ++r) v[pivot_col[r]] = -a[r][free_col];

    mpz_class lcm_den = 1;
    for (auto& x : v) {
        x.canonicalize();
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den().get_mpz_t());
        lcm_den = l;
    }
    std::vector<mpz_class> w(n);
    mpz_class g = 0;
    for (int i = 0; i < n; ++i) {
        w[i] = v[i].get_num() * (lcm_den / v[i].get_den());
        mpz_class gg;
        mpz_gcd(gg.get_mpz_t(), g.get_mpz_t(), w[i].get_mpz_t());
        g = gg;
    }
    if (g == 0) return {};
    bool all_pos = true, all_neg = true;
    for (auto& x : w) {
        if (x <= 0) all_pos = false;
        if (x >= 0) all_neg = false;
    }
    if (!all_pos && !all_neg) return {};
    DimVector d(n);
    for (int i = 0; i < n; ++i) {
        mpz_class e = w[i] / g;
        if (all_neg) e = -e;
        d[i] = (int)e.get_si();
    }
    return d;
}

} // namespace

EulerData euler_data(const Quiver& q) {
    validate_quiver(q);
    EulerData ed;
    ed.q = q;
    ed.n = q.vertices;
    ed.cls = classify(q);

    const int n = ed.n;
    ed.R.n = n;
    ed.R.a.assign((size_t)n * n, 0);
    for (const auto& [s, t] : q.arrows) ed.R.at(s, t) += 1;
    ed.E = IMat::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ed.E.at(i, j) -= ed.R.at(i, j);
    ed.S.n = n;
    ed.S.a.assign((size_t)n * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ed.S.at(i, j) = ed.E.at(i, j) + ed.E.at(j, i);

    ed.sink_first_order = sinks_first_order(q);
    ed.Phi = IMat::identity(n);
    ed.PhiInv = IMat::identity(n);
    for (int v : ed.sink_first_order) ed.Phi = reflection_matrix(q, v).mul(ed.Phi);
    for (auto it = ed.sink_first_order.rbegin(); it != ed.sink_first_order.rend(); ++it)
        ed.PhiInv = reflection_matrix(q, *it).mul(ed.PhiInv);
    if (!(ed.Phi.mul(ed.PhiInv).a == IMat::identity(n).a))
        fail(errc::internal, "Coxeter matrix is not invertible against its reverse product");

    if (ed.cls.affine()) {
        ed.delta = radical_generator(ed.S);
        if (ed.delta.empty())
            fail(errc::internal, "affine shape without a positive radical generator");
        if (ed.Phi.apply(ed.delta) != ed.delta)
            fail(errc::internal, "Coxeter transformation moved the radical generator");
    }
    return ed;
}

std::pair<Quiver, DimVector> reflect(const Quiver& q, const DimVector& d, int v) {
    validate_quiver(q);
    if (v < 0 || v >= q.vertices) fail(errc::bad_index, "reflection vertex out of range");
    if ((int)d.size() != q.vertices) fail(errc::length_mismatch, "reflect expects a full dim vector");
    bool is_sink = true, is_source = true;
    for (const auto& [s, t] : q.arrows) {
        if (s == v) is_sink = false;
        if (t == v) is_source = false;
    }
    if (!is_sink && !is_source)
        fail(errc::not_sink_or_source, "vertex " + std::to_string(v + 1) + " is neither sink nor source");
    Quiver r = q;
    for (auto& [s, t] : r.arrows)
        if (s == v || t == v) std::swap(s, t);
    DimVector e = d;
    long long acc = -(long long)d[v];
    for (const auto& [s, t] : q.arrows) {
        if (s == v) acc += d[t];
        if (t == v) acc += d[s];
    }
    e[v] = (int)acc;
    return {r, e};
}

std::string TubeShape::to_json() const {
    nlohmann::json j;
    j["label"] = label;
    j["rank"] = rank;
    auto arr = nlohmann::json::array();
    for (const auto& s : simples) arr.push_back(s);
    j["simples"] = std::move(arr);
    return j.dump();
}

std::vector<TubeShape> regular_simple_orbits(const EulerData& ed) {
    if (!ed.cls.affine() || ed.delta.empty()) fail(errc::not_affine, "tubes need an affine quiver");
    const int n = ed.n;
    const DimVector& delta = ed.delta;

    std::set<DimVector> roots; // defect-0 real roots 0 < d < delta
    DimVector d(n, 0);
    while (true) {
        if (!is_zero_vec(d) && d != delta && ed.tits_q(d) == 1 && ed.defect(d) == 0)
            roots.insert(d);
        int i = 0;
        while (i < n && d[i] == delta[i]) d[i++] = 0;
        if (i == n) break;
        ++d[i];
    }

    std::vector<TubeShape> tubes;
    while (!roots.empty()) {
        DimVector start = *roots.begin();
        std::vector<DimVector> orbit{start};
        roots.erase(roots.begin());
        DimVector cur = start;
        for (int guard = 0; guard <= n + 1; ++guard) {
            cur = ed.PhiInv.apply(cur);
            if (cur == start) break;
            auto it = roots.find(cur);
            if (it == roots.end())
                fail(errc::internal, "Coxeter orbit left the defect-0 root window");
            orbit.push_back(cur);
            roots.erase(it);
        }
        DimVector sum(n, 0);
        for (const auto& e : orbit) sum = add(sum, e);
        if (sum == delta) {
            TubeShape t;
            t.rank = (int)orbit.size();
            t.simples = std::move(orbit);
            tubes.push_back(std::move(t));
        }
    }
    std::sort(tubes.begin(), tubes.end(), [](const TubeShape& a, const TubeShape& b) {
        if (a.rank != b.rank) return a.rank > b.rank;
        return a.simples[0] < b.simples[0];
    });
    for (size_t i = 0; i < tubes.size(); ++i) tubes[i].label = "T" + std::to_string(i + 1);
    return tubes;
}

Quiver builtin_quiver(const std::string& name) {
    Quiver q;
    auto A = [&](int s, int t) { q.arrows.emplace_back(s - 1, t - 1); };
    if (name == "kronecker") {
        q.vertices = 2;
        A(1, 2);
        A(1, 2);
    } else if (name == "A22tilde") {
        q.vertices = 4;
        A(1, 2);
        A(3, 2);
        A(3, 4);
        A(1, 4);
    } else if (name == "A32tilde") {
        q.vertices = 5;
        A(1, 2);
        A(2, 3);
        A(3, 4);
        A(1, 5);
        A(5, 4);
    } else if (name == "D4tilde") {
        q.vertices = 5;
        A(2, 1);
        A(3, 1);
        A(4, 1);
        A(5, 1);
    } else if (name == "D5tilde") {
        q.vertices = 6;
        A(1, 3);
        A(2, 3);
        A(4, 3);
        A(4, 5);
        A(4, 6);
    } else {
        fail(errc::bad_parameters, "unknown builtin quiver: " + name);
    }
    validate_quiver(q);
    return q;
}

std::vector<std::string> builtin_quiver_names() {
    return {"kronecker", "A22tilde", "A32tilde", "D4tilde", "D5tilde"};
}

} // namespace clusterkit
