#include "clusterkit/basis_builder.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <numeric>

namespace clusterkit {

namespace {

// Integer weights y with sum_j (r_ij - r_ji) y_j < 0 at every vertex i. An
// alternating orientation is handled by the +1/-1 source/sink pattern; other
// orientations fall back to a seeded search (the feasible cone is open, so
// integer points are dense once it is nonempty).
std::vector<long long> find_grading(const EulerData& ed) {
    const int n = ed.n;
    auto violates = [&](const std::vector<long long>& y) {
        for (int i = 0; i < n; ++i) {
            long long s = 0;
            for (int j = 0; j < n; ++j) s += (ed.R.at(i, j) - ed.R.at(j, i)) * y[j];
            if (s >= 0) return true;
        }
        return false;
    };

    std::vector<long long> y(n, 0);
    for (const auto& [a, b] : ed.q.arrows) {
        y[a] = 1;  // has an out-arrow: source candidate
        y[b] = -1; // has an in-arrow: sink candidate (mixed vertices end at -1)
    }
    if (!violates(y)) return y;

    std::uint64_t state = 0x2545F4914F6CDD1DULL;
    auto next = [&state]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    };
    for (long long bound : {3LL, 9LL, 27LL}) {
        for (int trial = 0; trial < 20000; ++trial) {
            for (int j = 0; j < n; ++j)
                y[j] = (long long)(next() % (2 * bound + 1)) - bound;
            if (!violates(y)) return y;
        }
    }
    fail(errc::internal, "no exponent grading found for this orientation");
}

bool in_signed_box(const DimVector& d, const DimVector& box) {
    for (size_t i = 0; i < d.size(); ++i)
        if (d[i] < -box[i] || d[i] > box[i]) return false;
    return true;
}

bool is_alternating(const Quiver& q) {
    std::vector<int> in(q.vertices, 0), out(q.vertices, 0);
    for (const auto& [a, b] : q.arrows) ++out[a], ++in[b];
    for (int v = 0; v < q.vertices; ++v)
        if (in[v] && out[v]) return false;
    return true;
}

// d == m*delta for some m >= 0? delta is strictly positive on affine classes.
bool is_delta_multiple(const DimVector& d, const DimVector& delta) {
    if (d[0] % delta[0] != 0) return false;
    int m = d[0] / delta[0];
    if (m < 0) return false;
    for (size_t i = 0; i < d.size(); ++i)
        if (d[i] != m * delta[i]) return false;
    return true;
}

nlohmann::json coef_json(const mpz_class& c) {
    if (c.fits_slong_p()) return nlohmann::json(c.get_si());
    return nlohmann::json(c.get_str());
}

// Length, sign, and volume checks happen before any context is built so a
// bad box fails fast with the right code.
void validate_box(int vertices, const DimVector& box) {
    if ((int)box.size() != vertices) fail(errc::bad_dims, "box bound has wrong length");
    if (!is_nonneg(box)) fail(errc::bad_parameters, "box bound must be nonnegative");
    unsigned long long volume = 1;
    for (int b : box) {
        volume *= 2ULL * b + 1;
        if (volume > 5'000'000ULL) fail(errc::bad_parameters, "box bound too large to enumerate");
    }
}

} // namespace

BasisCatalog::BasisCatalog(CCContext& cc, DimVector box, BasisFlavor flavor)
    : cc_(&cc), box_(std::move(box)), flavor_(flavor) {
    validate_box(cc.quiver().vertices, box_);
    enumerate();
    finalize();
}

BasisCatalog::BasisCatalog(const Quiver& q, DimVector box, BasisFlavor flavor, CCOptions opts)
    : box_(std::move(box)), flavor_(flavor) {
    validate_box(q.vertices, box_);
    opts.box = box_;
    owned_ = std::make_shared<CCContext>(q, opts);
    cc_ = owned_.get();
    enumerate();
    finalize();
}

const Quiver& BasisCatalog::quiver() const { return cc_->quiver(); }

void BasisCatalog::enumerate() {
    CCContext& cc = *cc_;
    const int n = quiver().vertices;
    const DimVector& delta = cc.euler().delta;

    unsigned long long volume = 1;
    for (int b : box_) volume *= 2ULL * b + 1;

    struct Cand {
        Indec ind;
        DimVector dim;
    };
    std::vector<Cand> cands;
    auto module_fits = [&](const DimVector& d) { return leq(d, box_); };
    for (int comp = 0; comp < 2; ++comp)
        for (int k = 0; k < cc.horizon(); ++k)
            for (int v = 1; v <= n; ++v) {
                Indec m = comp ? Indec::preinj(v, k) : Indec::preproj(v, k);
                DimVector d = cc.dim_of(m);
                if (module_fits(d)) cands.push_back({m, d});
            }
    for (size_t t = 0; t < cc.tubes().size(); ++t) {
        int r = cc.tubes()[t].rank;
        for (int s = 1; s <= r; ++s)
            for (int len = 1; len < r; ++len) {
                Indec m = Indec::tube((int)t + 1, s, len);
                DimVector d = cc.dim_of(m);
                if (module_fits(d)) cands.push_back({m, d});
            }
    }
    for (int v = 1; v <= n; ++v)
        if (box_[v - 1] >= 1) cands.push_back({Indec::shift(v), cc.dim_of(Indec::shift(v))});
    for (int k = 1; module_fits(scale(delta, k)); ++k)
        cands.push_back({Indec::generic_reg(k), scale(delta, k)});
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.ind < b.ind; });

    const int m = (int)cands.size();
    std::vector<std::vector<int>> ext(m, std::vector<int>(m, 0));
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            ext[i][j] = ext[j][i] = cc.ext1_cc_dim(cands[i].ind, cands[j].ind);

    std::map<DimVector, BasisElement> table;
    DimVector cur(n, 0);
    std::vector<int> active, count(m, 0);
    auto emit = [&]() {
        BasisElement el;
        el.dim = cur;
        for (int idx : active) {
            for (int c = 0; c < count[idx]; ++c) el.object.push_back(cands[idx].ind);
            el.delta_family |= cands[idx].ind.kind == Indec::Kind::GenericReg;
        }
        auto [it, fresh] = table.emplace(el.dim, std::move(el));
        if (!fresh)
            fail(errc::duplicate_dimension, "two catalog elements share dimension " +
                                                show(cur) + ": " + show_object(it->second.object));
    };
    auto can_add = [&](int i) {
        for (int c = 0; c < n; ++c) {
            int v = cur[c] + cands[i].dim[c];
            if (v < -box_[c] || v > box_[c]) return false;
        }
        return true;
    };
    std::function<void(int)> rec = [&](int i) {
        if (i == m) {
            emit();
            return;
        }
        rec(i + 1);
        for (int j : active)
            if (ext[i][j] != 0) return;
        int added = 0;
        active.push_back(i);
        while (can_add(i) && (added == 0 || ext[i][i] == 0)) {
            cur = add(cur, cands[i].dim);
            count[i] = ++added;
            rec(i + 1);
        }
        for (; added > 0; --added) cur = sub(cur, cands[i].dim);
        count[i] = 0;
        active.pop_back();
    };
    rec(0);

    if (table.size() != volume) {
        DimVector probe(n);
        for (int c = 0; c < n; ++c) probe[c] = -box_[c];
        while (true) {
            if (!table.count(probe))
                fail(errc::incomplete_box, "no catalog element realizes " + show(probe));
            int c = 0;
            while (c < n && probe[c] == box_[c]) probe[c++] = -box_[c];
            if (c == n) break;
            ++probe[c];
        }
        fail(errc::internal, "catalog size disagrees with box volume");
    }

    elements_.reserve(table.size());
    for (auto& [d, el] : table) {
        index_.emplace(d, (int)elements_.size());
        elements_.push_back(std::move(el));
    }
}

Exp BasisCatalog::pivot_of_key(const DimVector& d) const {
    const IMat& R = cc_->euler().R;
    const int n = (int)d.size();
    Exp p(n, 0);
    for (int j = 0; j < n; ++j) {
        long long s = d[j] < 0 ? -d[j] : 0; // shift copies keep bare positive exponents
        for (int i = 0; i < n; ++i)
            if (d[i] > 0) s += R.at(j, i) * d[i];
        if (d[j] > 0) s -= d[j];
        p[j] = (int)s;
    }
    return p;
}

long long BasisCatalog::weight(const Exp& e) const {
    long long s = 0;
    for (size_t j = 0; j < e.size(); ++j) s += grading_[j] * e[j];
    return s;
}

void BasisCatalog::finalize() {
    CCContext& cc = *cc_;
    grading_ = find_grading(cc.euler());
    const bool alternating = is_alternating(quiver());
    const DimVector& delta = cc.euler().delta;

    values_.reserve(elements_.size());
    for (size_t idx = 0; idx < elements_.size(); ++idx) {
        const BasisElement& el = elements_[idx];
        Laurent val = Laurent::constant(quiver().vertices, 1);
        for (const Indec& s : el.object)
            val *= (flavor_ == BasisFlavor::Bg && s.kind == Indec::Kind::GenericReg)
                       ? cc.x_ndelta(1).pow((unsigned)s.n)
                       : cc.x_of(s);

        if (val.denominator_vector() != el.dim)
            fail(errc::internal, "catalog value denominator differs from key at " + show(el.dim));
        if (alternating && val.numerator_constant_term() != 1)
            fail(errc::internal, "alternating corner coefficient != 1 at " + show(el.dim));
        if (el.delta_family && el.object.size() > 1 && is_delta_multiple(el.dim, delta))
            fail(errc::internal, "delta family with nonempty tube part lands on a delta multiple");

        Exp pivot = pivot_of_key(el.dim);
        if (val.coeff(pivot) != 1)
            fail(errc::internal, "pivot coefficient != 1 at " + show(el.dim));
        const long long pw = weight(pivot);
        for (const auto& [e, c] : val.terms())
            if (weight(e) > pw || (weight(e) == pw && e > pivot))
                fail(errc::internal, "pivot is not the grading-maximal exponent at " + show(el.dim));
        if (!pivots_.emplace(std::move(pivot), (int)idx).second)
            fail(errc::internal, "two catalog elements share a pivot exponent");
        values_.push_back(std::move(val));
    }
}

bool BasisCatalog::contains(const DimVector& d) const { return index_.count(d) != 0; }

const BasisElement& BasisCatalog::element_from_dimension(const DimVector& d) const {
    if ((int)d.size() != quiver().vertices) fail(errc::bad_dims, "dimension vector length");
    if (!in_signed_box(d, box_)) fail(errc::out_of_box, "dimension " + show(d) + " outside box");
    auto it = index_.find(d);
    if (it == index_.end()) fail(errc::internal, "box vector missing from complete catalog");
    return elements_[it->second];
}

const Laurent& BasisCatalog::value(const DimVector& d) const {
    element_from_dimension(d);
    return values_[index_.at(d)];
}

BasisExpansion BasisCatalog::expand(const Laurent& f) const {
    if (f.nvars() != quiver().vertices) fail(errc::length_mismatch, "variable count mismatch");
    Laurent r = f;
    std::map<DimVector, mpz_class> acc;
    size_t guard = elements_.size() + 8;
    while (!r.is_zero()) {
        if (guard-- == 0) fail(errc::internal, "basis expansion failed to terminate");
        const Exp* best = nullptr;
        long long bw = 0;
        for (const auto& [e, c] : r.terms()) {
            long long w = weight(e);
            if (!best || w > bw || (w == bw && e > *best)) {
                best = &e;
                bw = w;
            }
        }
        auto it = pivots_.find(*best);
        if (it == pivots_.end())
            fail(errc::not_in_span,
                 "leading exponent matches no catalog pivot inside box " + show(box_));
        mpz_class a = r.coeff(*best);
        r -= values_[it->second] * a;
        acc[elements_[it->second].dim] += a;
    }
    BasisExpansion out;
    out.reserve(acc.size());
    for (auto& [d, c] : acc)
        if (c != 0) out.push_back({d, std::move(c)});
    std::sort(out.begin(), out.end(), [](const BasisExpansionTerm& a, const BasisExpansionTerm& b) {
        int sa = total(a.dim), sb = total(b.dim);
        if (sa != sb) return sa > sb;
        return a.dim > b.dim;
    });
    return out;
}

std::string BasisCatalog::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& el : elements_) {
        nlohmann::json j;
        j["dim"] = el.dim;
        j["kind"] = el.delta_family ? "delta_family" : "rigid";
        auto summands = nlohmann::json::array();
        for (const Indec& s : el.object) summands.push_back(s.show());
        j["summands"] = std::move(summands);
        arr.push_back(std::move(j));
    }
    return arr.dump();
}

std::string expansion_to_json(const BasisExpansion& e) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : e) {
        nlohmann::json j;
        j["dim"] = t.dim;
        j["coef"] = coef_json(t.coef);
        arr.push_back(std::move(j));
    }
    return arr.dump();
}

BasisCatalog build_catalog(const Quiver& q, const DimVector& box, BasisFlavor flavor) {
    return BasisCatalog(q, box, flavor);
}

const BasisElement& element_from_dimension(const BasisCatalog& cat, const DimVector& d) {
    return cat.element_from_dimension(d);
}

BasisExpansion expand(const Laurent& f, const BasisCatalog& cat) { return cat.expand(f); }

std::string TransitionMatrix::to_json() const {
    nlohmann::json j;
    j["keys"] = keys;
    auto rws = nlohmann::json::array();
    for (const auto& row : rows) {
        auto r = nlohmann::json::array();
        for (const auto& t : row) {
            nlohmann::json term;
            term["dim"] = t.dim;
            term["coef"] = coef_json(t.coef);
            r.push_back(std::move(term));
        }
        rws.push_back(std::move(r));
    }
    j["rows"] = std::move(rws);
    return j.dump();
}

TransitionMatrix transition_matrix(const Quiver& q, const DimVector& box) {
    CCOptions opts;
    opts.box = box;
    CCContext cc(q, opts);
    BasisCatalog bp(cc, box, BasisFlavor::Bprime);
    BasisCatalog bg(cc, box, BasisFlavor::Bg);

    TransitionMatrix tm;
    tm.keys.reserve(bg.size());
    tm.rows.reserve(bg.size());
    for (const BasisElement& el : bg.elements()) {
        int k = 0;
        for (const Indec& s : el.object)
            if (s.kind == Indec::Kind::GenericReg) k = s.n;
        BasisExpansion row;
        if (k < 2) {
            // same value in both flavors (X_delta^1 is the generic quasi-simple)
            row.push_back({el.dim, 1});
        } else {
            row = bp.expand(bg.value(el.dim));
            bool diagonal = false;
            for (const auto& t : row) {
                if (t.dim == el.dim) {
                    if (t.coef != 1) fail(errc::internal, "transition diagonal != 1");
                    diagonal = true;
                } else if (!strictly_less(t.dim, el.dim)) {
                    fail(errc::internal, "transition support not strictly below diagonal");
                }
            }
            if (!diagonal) fail(errc::internal, "transition row misses its diagonal");
        }
        tm.keys.push_back(el.dim);
        tm.rows.push_back(std::move(row));
    }
    return tm;
}

BasisExpansion monomial_expand(const Quiver& q, const BasisCatalog& cat, const DimVector& d) {
    if (q.vertices != cat.quiver().vertices) fail(errc::quiver_mismatch, "catalog is for another quiver");
    if ((int)d.size() != q.vertices) fail(errc::bad_dims, "dimension vector length");
    const int n = q.vertices;
    Laurent f = Laurent::constant(n, 1);
    for (int i = 0; i < n; ++i) {
        if (d[i] > 0) {
            DimVector ei(n, 0);
            ei[i] = 1;
            Laurent xs = cc_map_direct(q, fixed_family(zero_representation(q, ei, 2)));
            f *= xs.pow((unsigned)d[i]);
        } else if (d[i] < 0) {
            f *= Laurent::variable(n, i).pow((unsigned)-d[i]);
        }
    }
    BasisExpansion out = cat.expand(f);
    bool lead = false;
    for (const auto& t : out) {
        if (t.dim == d) {
            if (t.coef != 1) fail(errc::identity_failed, "monomial leading coefficient != 1");
            lead = true;
        } else if (!strictly_less(t.dim, d)) {
            fail(errc::identity_failed, "monomial expansion key not dominated by " + show(d));
        }
    }
    if (!lead) fail(errc::identity_failed, "monomial expansion misses leading key " + show(d));
    return out;
}

} // namespace clusterkit
