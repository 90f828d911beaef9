#include "clusterkit/cluster_vars.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace clusterkit {

namespace {

// Admissible vertex order: repeatedly peel the smallest-index vertex whose
// unprocessed out-degree (sinks) or in-degree (sources) is zero.
std::vector<int> peel_order(const Quiver& q, bool peel_sinks) {
    const int n = q.vertices;
    std::vector<int> deg(n, 0);
    for (auto [a, b] : q.arrows) ++deg[peel_sinks ? a : b];
    std::vector<bool> done(n, false);
    std::vector<int> order;
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int v = 0; v < n && pick < 0; ++v)
            if (!done[v] && deg[v] == 0) pick = v;
        if (pick < 0) fail(errc::internal, "no admissible vertex order");
        done[pick] = true;
        order.push_back(pick);
        for (auto [a, b] : q.arrows) {
            int far = peel_sinks ? b : a;
            int near = peel_sinks ? a : b;
            if (far == pick && !done[near]) --deg[near];
        }
    }
    return order;
}

int mod1(int s, int r) { return ((s - 1) % r + r) % r + 1; } // into 1..r

} // namespace

Indec Indec::preproj(int v, int k) {
    Indec m;
    m.kind = Kind::PreProj;
    m.v = v;
    m.k = k;
    return m;
}

Indec Indec::preinj(int v, int k) {
    Indec m;
    m.kind = Kind::PreInj;
    m.v = v;
    m.k = k;
    return m;
}

Indec Indec::shift(int v) {
    Indec m;
    m.kind = Kind::Shift;
    m.v = v;
    return m;
}

Indec Indec::tube(int t, int s, int len) {
    Indec m;
    m.kind = Kind::Tube;
    m.t = t;
    m.s = s;
    m.len = len;
    return m;
}

Indec Indec::generic_reg(int n) {
    Indec m;
    m.kind = Kind::GenericReg;
    m.n = n;
    return m;
}

static std::array<int, 7> key_of(const Indec& m) {
    // modules first, initial shifts last
    int rank = 5;
    switch (m.kind) {
        case Indec::Kind::PreProj: rank = 0; break;
        case Indec::Kind::PreInj: rank = 1; break;
        case Indec::Kind::Tube: rank = 2; break;
        case Indec::Kind::GenericReg: rank = 3; break;
        case Indec::Kind::Shift: rank = 4; break;
    }
    return {rank, m.v, m.k, m.t, m.s, m.len, m.n};
}

bool Indec::operator==(const Indec& o) const { return key_of(*this) == key_of(o); }
bool Indec::operator<(const Indec& o) const { return key_of(*this) < key_of(o); }

std::string Indec::show() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::PreProj:
            if (k > 0) out << "tau^-" << k << " ";
            out << "P(" << v << ")";
            break;
        case Kind::PreInj:
            if (k > 0) out << "tau^" << k << " ";
            out << "I(" << v << ")";
            break;
        case Kind::Shift:
            out << "shift(" << v << ")";
            break;
        case Kind::Tube:
            out << "T" << t << ":E(" << s << ")[" << len << "]";
            break;
        case Kind::GenericReg:
            out << "delta[" << n << "]";
            break;
    }
    return out.str();
}

std::string show_object(const ClusterObject& obj) {
    if (obj.empty()) return "0";
    ClusterObject sorted = obj;
    std::sort(sorted.begin(), sorted.end());
    std::ostringstream out;
    for (size_t i = 0; i < sorted.size();) {
        size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        if (i) out << " + ";
        out << sorted[i].show();
        if (j - i > 1) out << "^" << (j - i);
        i = j;
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Expression parser.

namespace {

struct Cursor {
    const std::string& text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(errc::parse_error, std::string("expected '") + c + "' in object expression");
    }
    bool eat_word(const std::string& w) {
        skip_ws();
        if (text.compare(pos, w.size(), w) == 0) {
            pos += w.size();
            return true;
        }
        return false;
    }
    int number() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
        if (pos == start) fail(errc::parse_error, "expected a number in object expression");
        if (pos - start > 6) fail(errc::parse_error, "number out of range");
        return std::stoi(text.substr(start, pos - start));
    }
    bool done() {
        skip_ws();
        return pos == text.size();
    }
};

Indec parse_atom(Cursor& c) {
    c.skip_ws();
    if (c.eat_word("tau")) {
        c.expect('^');
        bool neg = c.eat('-');
        int k = c.number();
        c.skip_ws();
        if (c.eat_word("P")) {
            if (!neg && k != 0) fail(errc::parse_error, "preprojectives use tau^-k P(i)");
            c.expect('(');
            int v = c.number();
            c.expect(')');
            return Indec::preproj(v, k);
        }
        if (c.eat_word("I")) {
            if (neg && k != 0) fail(errc::parse_error, "preinjectives use tau^k I(i)");
            c.expect('(');
            int v = c.number();
            c.expect(')');
            return Indec::preinj(v, k);
        }
        fail(errc::parse_error, "expected P(...) or I(...) after tau power");
    }
    if (c.eat_word("shift")) {
        c.expect('(');
        int v = c.number();
        c.expect(')');
        return Indec::shift(v);
    }
    if (c.eat_word("delta")) {
        c.expect('[');
        int n = c.number();
        c.expect(']');
        if (n < 1) fail(errc::parse_error, "delta[n] needs n >= 1");
        return Indec::generic_reg(n);
    }
    if (c.eat_word("P")) {
        c.expect('(');
        int v = c.number();
        c.expect(')');
        return Indec::preproj(v, 0);
    }
    if (c.eat_word("I")) {
        c.expect('(');
        int v = c.number();
        c.expect(')');
        return Indec::preinj(v, 0);
    }
    if (c.eat_word("T")) {
        int t = c.number();
        c.expect(':');
        if (!c.eat_word("E")) fail(errc::parse_error, "expected E(s)[l] after tube label");
        c.expect('(');
        int s = c.number();
        c.expect(')');
        c.expect('[');
        int len = c.number();
        c.expect(']');
        if (len < 1) fail(errc::parse_error, "tube quasi-length must be >= 1");
        return Indec::tube(t, s, len);
    }
    fail(errc::parse_error, "unrecognised object atom");
}

} // namespace

ClusterObject parse_object(const std::string& text) {
    Cursor c{text};
    ClusterObject obj;
    while (true) {
        Indec atom = parse_atom(c);
        int mult = 1;
        if (c.eat('^')) {
            mult = c.number();
            if (mult < 1) fail(errc::parse_error, "multiplicity must be >= 1");
            if (mult > 64) fail(errc::parse_error, "multiplicity out of range");
        }
        for (int i = 0; i < mult; ++i) obj.push_back(atom);
        if (c.done()) break;
        c.expect('+');
    }
    return obj;
}

std::string VerifyReport::to_json() const {
    std::ostringstream out;
    out << "{\"identity\":\"" << identity << "\",\"params\":" << params
        << ",\"pass\":" << (pass ? "true" : "false")
        << ",\"residual_terms\":" << residual_terms << "}";
    return out.str();
}

// ---------------------------------------------------------------------------
// CCContext.

CCContext::CCContext(const Quiver& q, CCOptions opts) : ed_(euler_data(q)), opts_(std::move(opts)) {
    cls_ = ed_.cls;
    if (!cls_.affine())
        fail(errc::not_affine, "cluster-variable context needs an affine quiver, got " + cls_.name());
    tubes_ = regular_simple_orbits(ed_);
    const int n = ed_.n;
    for (int v = 1; v <= n; ++v) {
        proj_dims_.push_back(construct_module(ed_.q, ModuleKind::projective_at(v), 2, 0).dims);
        inj_dims_.push_back(construct_module(ed_.q, ModuleKind::injective_at(v), 2, 0).dims);
    }
    source_first_order_ = peel_order(ed_.q, false);

    // Smallest h with Phi^h d = d + c(d) delta: kills the root-of-unity part of
    // the Coxeter matrix, so h more slices always clear any fixed box.
    IMat power = IMat::identity(n);
    for (int h = 1; h <= 512 && coxeter_period_ == 0; ++h) {
        power = ed_.Phi.mul(power);
        bool ok = true;
        for (int j = 0; j < n && ok; ++j) {
            DimVector col(n, 0);
            for (int i = 0; i < n; ++i) col[i] = (int)power.at(i, j);
            col[j] -= 1;
            long long c = col[0] / ed_.delta[0];
            for (int i = 0; i < n; ++i) ok = ok && col[i] == c * ed_.delta[i];
        }
        if (ok) coxeter_period_ = h;
    }
    if (coxeter_period_ == 0) fail(errc::internal, "Coxeter period not found");

    if (opts_.horizon > 0) {
        horizon_ = opts_.horizon;
    } else {
        DimVector box = opts_.box.empty() ? scale(ed_.delta, 2) : opts_.box;
        if ((int)box.size() != n) fail(errc::length_mismatch, "box length");
        std::vector<DimVector> dp = proj_dims_, di = inj_dims_;
        int k = 0;
        auto cleared = [&] {
            for (int v = 0; v < n; ++v)
                if (leq(dp[v], box) || leq(di[v], box)) return false;
            return true;
        };
        while (!cleared()) {
            if (++k > 1024) fail(errc::internal, "horizon search diverged");
            for (int v = 0; v < n; ++v) {
                dp[v] = ed_.PhiInv.apply(dp[v]);
                di[v] = ed_.Phi.apply(di[v]);
            }
        }
        horizon_ = k + coxeter_period_ + 1;
    }
    build_dims();
}

void CCContext::build_dims() {
    const int n = ed_.n;
    pp_.assign(horizon_, std::vector<Entry>(n));
    pi_.assign(horizon_, std::vector<Entry>(n));
    for (int k = 0; k < horizon_; ++k)
        for (int v = 0; v < n; ++v) {
            pp_[k][v].dim = k == 0 ? proj_dims_[v] : ed_.PhiInv.apply(pp_[k - 1][v].dim);
            pi_[k][v].dim = k == 0 ? inj_dims_[v] : ed_.Phi.apply(pi_[k - 1][v].dim);
            if (!is_nonneg(pp_[k][v].dim) || is_zero_vec(pp_[k][v].dim) ||
                !is_nonneg(pi_[k][v].dim) || is_zero_vec(pi_[k][v].dim))
                fail(errc::internal, "translation slice left the positive cone");
            auto put = [&](const DimVector& d, Indec m) {
                if (!by_dim_.emplace(d, m).second)
                    fail(errc::internal, "dimension collision between translation slices");
            };
            put(pp_[k][v].dim, Indec::preproj(v + 1, k));
            put(pi_[k][v].dim, Indec::preinj(v + 1, k));
        }
}

Laurent CCContext::oracle_x(const ModuleKind& kind) {
    CountOptions co;
    co.min_prime = opts_.min_prime;
    return cc_map_direct(ed_.q, module_family(ed_.q, kind, opts_.seed), co);
}

void CCContext::ensure_x(bool preproj, int slice) {
    auto& table = preproj ? pp_ : pi_;
    int& built = preproj ? pp_built_ : pi_built_;
    const auto& order = preproj ? ed_.sink_first_order : source_first_order_;
    while (built <= slice) {
        const int k = built;
        if (k == 0) {
            CountOptions co; // explicit 0/1 modules; any prime counts them
            for (int v = 0; v < ed_.n; ++v) {
                auto kind = preproj ? ModuleKind::projective_at(v + 1) : ModuleKind::injective_at(v + 1);
                table[0][v].x =
                    cc_map_direct(ed_.q, fixed_family(construct_module(ed_.q, kind, 2, 0)), co);
                table[0][v].have_x = true;
            }
        } else {
            for (int v : order) {
                Laurent mid = Laurent::constant(ed_.n, 1);
                DimVector midsum(ed_.n, 0);
                for (auto [a, b] : ed_.q.arrows) {
                    const Entry* f = nullptr;
                    if (preproj)
                        f = a == v ? &table[k][b] : b == v ? &table[k - 1][a] : nullptr;
                    else
                        f = b == v ? &table[k][a] : a == v ? &table[k - 1][b] : nullptr;
                    if (f) {
                        if (!f->have_x) fail(errc::internal, "mesh factor not ready");
                        mid *= f->x;
                        midsum = add(midsum, f->dim);
                    }
                }
                if (midsum != add(table[k - 1][v].dim, table[k][v].dim))
                    fail(errc::internal, "mesh middle dimension mismatch");
                try {
                    table[k][v].x =
                        (Laurent::constant(ed_.n, 1) + mid).exact_div(table[k - 1][v].x);
                } catch (const ck_error&) {
                    fail(errc::inexact_division, "mesh division failed at slice " + std::to_string(k));
                }
                table[k][v].have_x = true;
            }
        }
        for (int v = 0; v < ed_.n; ++v)
            if (table[k][v].x.denominator_vector() != table[k][v].dim)
                fail(errc::internal, "denominator drifted from the dimension vector");
        ++built;
    }
}

const Laurent& CCContext::slice_x(bool preproj, int v, int k) {
    if (v < 1 || v > ed_.n) fail(errc::bad_index, "vertex out of range");
    if (k < 0) fail(errc::bad_parameters, "negative translation power");
    if (k >= horizon_)
        fail(errc::horizon_too_small, "slice " + std::to_string(k) + " beyond horizon " +
                                          std::to_string(horizon_));
    ensure_x(preproj, k);
    return (preproj ? pp_ : pi_)[k][v - 1].x;
}

int CCContext::tube_index_checked(const Indec& m) const {
    if (m.t < 1 || m.t > (int)tubes_.size())
        fail(errc::unknown_tube, "no tube labelled T" + std::to_string(m.t));
    return m.t - 1;
}

DimVector CCContext::dim_of(const Indec& m) const {
    const int n = ed_.n;
    switch (m.kind) {
        case Indec::Kind::PreProj: {
            if (m.v < 1 || m.v > n) fail(errc::bad_index, "vertex out of range");
            if (m.k < 0) fail(errc::bad_parameters, "negative translation power");
            return ed_.coxeter(proj_dims_[m.v - 1], -m.k);
        }
        case Indec::Kind::PreInj: {
            if (m.v < 1 || m.v > n) fail(errc::bad_index, "vertex out of range");
            if (m.k < 0) fail(errc::bad_parameters, "negative translation power");
            return ed_.coxeter(inj_dims_[m.v - 1], m.k);
        }
        case Indec::Kind::Shift: {
            if (m.v < 1 || m.v > n) fail(errc::bad_index, "vertex out of range");
            DimVector d(n, 0);
            d[m.v - 1] = -1;
            return d;
        }
        case Indec::Kind::Tube: {
            const auto& tube = tubes_[tube_index_checked(m)];
            if (m.len < 0) fail(errc::bad_parameters, "negative quasi-length");
            const int s0 = mod1(m.s, tube.rank);
            DimVector d(n, 0);
            for (int a = 0; a < m.len; ++a) d = add(d, tube.simples[(s0 - 1 + a) % tube.rank]);
            return d;
        }
        case Indec::Kind::GenericReg:
            if (m.n < 1) fail(errc::bad_parameters, "generic quasi-length must be >= 1");
            return scale(ed_.delta, m.n);
    }
    fail(errc::internal, "unreachable");
}

DimVector CCContext::dim_of(const ClusterObject& obj) const {
    DimVector d(ed_.n, 0);
    for (const auto& m : obj) d = add(d, dim_of(m));
    return d;
}

Laurent CCContext::tube_x(int t, int s, int len) {
    if (t < 1 || t > (int)tubes_.size())
        fail(errc::unknown_tube, "no tube labelled T" + std::to_string(t));
    const auto& tube = tubes_[t - 1];
    const int r = tube.rank;
    if (len < 0) fail(errc::bad_parameters, "negative quasi-length");
    if (len == 0) return Laurent::constant(ed_.n, 1);
    s = mod1(s, r);
    auto it = tube_memo_.find({t, s, len});
    if (it != tube_memo_.end()) return it->second;
    Laurent x;
    if (len == 1) {
        x = oracle_x(ModuleKind::tube_simple(tube.label, s));
    } else {
        // X_{E_s[L]} = X_{E_s[L-1]} X_{E_{s+L-1}} - X_{E_s[L-2]}
        x = tube_x(t, s, len - 1) * tube_x(t, mod1(s + len - 1, r), 1) - tube_x(t, s, len - 2);
    }
    tube_memo_.emplace(std::array<int, 3>{t, s, len}, x);
    return x;
}

Laurent CCContext::x_ndelta(int n) {
    if (n < 0) fail(errc::bad_parameters, "negative quasi-length");
    if (ndelta_memo_.empty()) {
        ndelta_memo_.push_back(Laurent::constant(ed_.n, 1));
        ndelta_memo_.push_back(oracle_x(ModuleKind::generic_delta()));
    }
    while ((int)ndelta_memo_.size() <= n) {
        const int m = (int)ndelta_memo_.size() - 1;
        ndelta_memo_.push_back(ndelta_memo_[m] * ndelta_memo_[1] - ndelta_memo_[m - 1]);
    }
    return ndelta_memo_[n];
}

Laurent CCContext::x_of(const Indec& m) {
    switch (m.kind) {
        case Indec::Kind::PreProj:
            return slice_x(true, m.v, m.k);
        case Indec::Kind::PreInj:
            return slice_x(false, m.v, m.k);
        case Indec::Kind::Shift:
            if (m.v < 1 || m.v > ed_.n) fail(errc::bad_index, "vertex out of range");
            return Laurent::variable(ed_.n, m.v - 1);
        case Indec::Kind::Tube:
            return tube_x(m.t, m.s, m.len);
        case Indec::Kind::GenericReg:
            if (m.n < 1) fail(errc::bad_parameters, "generic quasi-length must be >= 1");
            return x_ndelta(m.n);
    }
    fail(errc::internal, "unreachable");
}

Laurent CCContext::x_of(const ClusterObject& obj) {
    Laurent x = Laurent::constant(ed_.n, 1);
    for (const auto& m : obj) x *= x_of(m);
    return x;
}

int CCContext::ext1_cc_dim(const Indec& a, const Indec& b) {
    using K = Indec::Kind;
    // Normalise so the case split below sees a fixed kind order.
    auto rank_of = [](K k) {
        switch (k) {
            case K::Shift: return 0;
            case K::PreProj: return 1;
            case K::PreInj: return 2;
            case K::Tube: return 3;
            case K::GenericReg: return 4;
        }
        return 5;
    };
    if (rank_of(a.kind) > rank_of(b.kind)) return ext1_cc_dim(b, a);

    auto dim_tau_reg = [&](const Indec& m) { // tau fixes GenericReg, shifts tube socles
        return m.kind == K::Tube ? dim_of(Indec::tube(m.t, mod1(m.s - 1, tubes_[m.t - 1].rank), m.len))
                                 : dim_of(m);
    };

    if (a.kind == K::Shift)
        return b.kind == K::Shift ? 0 : dim_of(b)[a.v - 1];

    if (a.kind == K::PreProj && b.kind == K::PreProj) {
        if (a.k == b.k) return 0;
        const Indec& early = a.k < b.k ? a : b;
        const Indec& late = a.k < b.k ? b : a;
        long long e = -ed_.euler_form(dim_of(late), dim_of(early));
        if (e < 0) fail(errc::internal, "negative Ext dimension");
        return (int)e;
    }
    if (a.kind == K::PreProj && b.kind == K::PreInj)
        return (int)ed_.euler_form(dim_of(a), ed_.Phi.apply(dim_of(b)));
    if (a.kind == K::PreProj) // b regular
        return (int)ed_.euler_form(dim_of(a), dim_tau_reg(b));

    if (a.kind == K::PreInj && b.kind == K::PreInj) {
        if (a.k == b.k) return 0;
        const Indec& early = a.k < b.k ? a : b;
        const Indec& late = a.k < b.k ? b : a;
        long long e = -ed_.euler_form(dim_of(early), dim_of(late));
        if (e < 0) fail(errc::internal, "negative Ext dimension");
        return (int)e;
    }
    if (a.kind == K::PreInj) // b regular
        return (int)ed_.euler_form(dim_of(b), ed_.Phi.apply(dim_of(a)));

    if (a.kind == K::Tube && b.kind == K::Tube) {
        if (a.t != b.t) return 0;
        if (a.len == 0 || b.len == 0) return 0;
        const int r = tubes_[tube_index_checked(a)].rank;
        const long long p = 5; // Hom dimensions in a tube are field independent
        auto model = [&](int s, int len) { return cyclic_tube_model(r, mod1(s, r), len, p); };
        int h1 = hom_dimension(model(b.s, b.len), model(a.s - 1, a.len)); // Hom(B, tau A)
        int h2 = hom_dimension(model(a.s, a.len), model(b.s - 1, b.len)); // Hom(A, tau B)
        return h1 + h2;
    }
    if (a.kind == K::Tube) return 0; // different tubes / generic vs non-homogeneous

    // both GenericReg: Hom(E[a], E[b]) = min(a,b) in a homogeneous tube
    return 2 * std::min(a.n, b.n);
}

ClusterObject CCContext::ar_mesh_middle(const Indec& m) const {
    using K = Indec::Kind;
    ClusterObject mid;
    switch (m.kind) {
        case K::PreProj: {
            if (m.k < 1) fail(errc::bad_parameters, "projective objects have no AR mesh");
            for (auto [a, b] : ed_.q.arrows) {
                if (a == m.v - 1) mid.push_back(Indec::preproj(b + 1, m.k));
                if (b == m.v - 1) mid.push_back(Indec::preproj(a + 1, m.k - 1));
            }
            return mid;
        }
        case K::PreInj: {
            for (auto [a, b] : ed_.q.arrows) {
                if (b == m.v - 1) mid.push_back(Indec::preinj(a + 1, m.k + 1));
                if (a == m.v - 1) mid.push_back(Indec::preinj(b + 1, m.k));
            }
            return mid;
        }
        case K::Tube: {
            if (m.len < 1) fail(errc::bad_parameters, "zero tube object has no AR mesh");
            const int r = tubes_[tube_index_checked(m)].rank;
            mid.push_back(Indec::tube(m.t, mod1(m.s - 1, r), m.len + 1));
            if (m.len > 1) mid.push_back(Indec::tube(m.t, m.s, m.len - 1));
            return mid;
        }
        case K::GenericReg: {
            mid.push_back(Indec::generic_reg(m.n + 1));
            if (m.n > 1) mid.push_back(Indec::generic_reg(m.n - 1));
            return mid;
        }
        case K::Shift:
            fail(errc::bad_parameters, "shift objects have no AR mesh");
    }
    fail(errc::internal, "unreachable");
}

VerifyReport CCContext::verify_ar(const Indec& m) {
    Indec tau_m = m;
    switch (m.kind) {
        case Indec::Kind::PreProj:
            if (m.k < 1) fail(errc::bad_parameters, "projective objects are not in the domain");
            tau_m.k = m.k - 1;
            break;
        case Indec::Kind::PreInj:
            tau_m.k = m.k + 1;
            break;
        case Indec::Kind::Tube:
            tau_m.s = mod1(m.s - 1, tubes_[tube_index_checked(m)].rank);
            break;
        case Indec::Kind::GenericReg:
            break;
        case Indec::Kind::Shift:
            fail(errc::bad_parameters, "shift objects are not in the domain");
    }
    Laurent lhs = x_of(m) * x_of(tau_m);
    Laurent rhs = Laurent::constant(ed_.n, 1) + x_of(ar_mesh_middle(m));
    VerifyReport rep;
    rep.identity = "ar_mesh";
    rep.params = "{\"object\":\"" + m.show() + "\"}";
    rep.pass = lhs == rhs;
    rep.residual_terms = (int)(lhs - rhs).term_count();
    return rep;
}

std::optional<Indec> CCContext::find_transjective(const DimVector& d) const {
    auto it = by_dim_.find(d);
    if (it == by_dim_.end()) return std::nullopt;
    return it->second;
}

} // namespace clusterkit
