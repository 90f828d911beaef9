#include "clusterkit/laurent.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <sstream>

namespace clusterkit {

const char* errc_name(errc c) {
    switch (c) {
    case errc::cyclic_quiver: return "CyclicQuiver";
    case errc::disconnected: return "Disconnected";
    case errc::bad_index: return "BadIndex";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::not_affine: return "NotAffine";
    case errc::not_sink_or_source: return "NotSinkOrSource";
    case errc::zero_polynomial: return "ZeroPolynomial";
    case errc::div_by_zero: return "DivByZero";
    case errc::not_divisible: return "NotDivisible";
    case errc::negative_dim: return "NegativeDim";
    case errc::bad_dims: return "BadDims";
    case errc::prime_mismatch: return "PrimeMismatch";
    case errc::quiver_mismatch: return "QuiverMismatch";
    case errc::shape_mismatch: return "ShapeMismatch";
    case errc::enum_cap_exceeded: return "EnumCapExceeded";
    case errc::not_polynomial_count: return "NotPolynomialCount";
    case errc::certification_failed: return "CertificationFailed";
    case errc::not_schur_root: return "NotSchurRoot";
    case errc::inexact_division: return "InexactDivision";
    case errc::horizon_too_small: return "HorizonTooSmall";
    case errc::unknown_tube: return "UnknownTube";
    case errc::bad_parameters: return "BadParameters";
    case errc::identity_failed: return "IdentityFailed";
    case errc::bad_length: return "BadLength";
    case errc::duplicate_dimension: return "DuplicateDimension";
    case errc::incomplete_box: return "IncompleteBox";
    case errc::out_of_box: return "OutOfBox";
    case errc::not_in_span: return "NotInSpan";
    case errc::non_integer_leading: return "NonIntegerLeading";
    case errc::parse_error: return "ParseError";
    case errc::usage: return "Usage";
    case errc::internal: return "Internal";
    }
    return "Unknown";
}

Laurent Laurent::constant(int nvars, const mpz_class& c) {
    Laurent r(nvars);
    if (c != 0) r.terms_[Exp(nvars, 0)] = c;
    return r;
}

Laurent Laurent::monomial(int nvars, const Exp& e, const mpz_class& c) {
    if ((int)e.size() != nvars) fail(errc::length_mismatch, "monomial exponent size");
    Laurent r(nvars);
    if (c != 0) r.terms_[e] = c;
    return r;
}

Laurent Laurent::variable(int nvars, int i) {
    if (i < 0 || i >= nvars) fail(errc::bad_index, "variable index");
    Exp e(nvars, 0);
    e[i] = 1;
    return monomial(nvars, e, 1);
}

bool Laurent::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first == Exp(nvars_, 0) &&
           terms_.begin()->second == 1;
}

mpz_class Laurent::coeff(const Exp& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? mpz_class(0) : it->second;
}

void Laurent::set_coeff(const Exp& e, const mpz_class& c) {
    if ((int)e.size() != nvars_) fail(errc::length_mismatch, "set_coeff exponent size");
    if (c == 0)
        terms_.erase(e);
    else
        terms_[e] = c;
}

void Laurent::check_vars(const Laurent& o) const {
    if (nvars_ != o.nvars_) fail(errc::length_mismatch, "mixed variable counts");
}

Laurent& Laurent::operator+=(const Laurent& o) {
    check_vars(o);
    for (const auto& [e, c] : o.terms_) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

Laurent& Laurent::operator-=(const Laurent& o) {
    check_vars(o);
    for (const auto& [e, c] : o.terms_) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, -c);
        } else {
            it->second -= c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

Laurent Laurent::operator+(const Laurent& o) const {
    Laurent r = *this;
    r += o;
    return r;
}

Laurent Laurent::operator-(const Laurent& o) const {
    Laurent r = *this;
    r -= o;
    return r;
}

Laurent Laurent::operator-() const {
    Laurent r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
}

Laurent Laurent::operator*(const Laurent& o) const {
    check_vars(o);
    Laurent r(nvars_);
    Exp e(nvars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
            auto it = r.terms_.find(e);
            if (it == r.terms_.end()) {
                mpz_class prod = ca * cb;
                if (prod != 0) r.terms_.emplace(e, std::move(prod));
            } else {
                it->second += ca * cb;
                if (it->second == 0) r.terms_.erase(it);
            }
        }
    }
    return r;
}

Laurent& Laurent::operator*=(const Laurent& o) {
    *this = *this * o;
    return *this;
}

Laurent Laurent::operator*(const mpz_class& c) const {
    Laurent r(nvars_);
    if (c == 0) return r;
    for (const auto& [e, a] : terms_) r.terms_[e] = a * c;
    return r;
}

Laurent Laurent::pow(unsigned k) const {
    Laurent acc = constant(nvars_, 1);
    Laurent base = *this;
    while (k) {
        if (k & 1u) acc *= base;
        base = (k >>= 1) ? base * base : base;
    }
    return acc;
}

Laurent Laurent::exact_div(const Laurent& d) const {
    check_vars(d);
    if (d.is_zero()) fail(errc::div_by_zero, "division by zero polynomial");
    Laurent q(nvars_);
    if (is_zero()) return q;

    // Lex corners of a product never cancel, so the exact quotient's lex range is pinned:
    // lexmax(q) = lexmax(a) - lexmax(d), lexmin(q) = lexmin(a) - lexmin(d).
    const Exp& amax = terms_.rbegin()->first;
    const Exp& amin = terms_.begin()->first;
    const Exp& dmax = d.terms_.rbegin()->first;
    const Exp& dmin = d.terms_.begin()->first;
    Exp qmin(nvars_);
    for (int i = 0; i < nvars_; ++i) qmin[i] = amin[i] - dmin[i];
    (void)amax;

    Laurent r = *this;
    const mpz_class& dlead = d.terms_.rbegin()->second;
    Exp t(nvars_);
    long steps = 0, max_steps = 1000000;
    while (!r.is_zero()) {
        if (++steps > max_steps) fail(errc::not_divisible, "division step cap exceeded");
        const auto& [rexp, rc] = *r.terms_.rbegin();
        for (int i = 0; i < nvars_; ++i) t[i] = rexp[i] - dmax[i];
        if (t < qmin) fail(errc::not_divisible, "remainder below quotient support");
        if (!mpz_divisible_p(rc.get_mpz_t(), dlead.get_mpz_t()))
            fail(errc::not_divisible, "leading coefficient does not divide");
        mpz_class qc = rc / dlead;
        q.terms_[t] = qc;
        r -= d * monomial(nvars_, t, qc);
    }
    return q;
}

Exp Laurent::denominator_vector() const {
    if (is_zero()) fail(errc::zero_polynomial, "denominator_vector of 0");
    Exp m(nvars_, std::numeric_limits<int>::min());
    for (const auto& [e, c] : terms_)
        for (int i = 0; i < nvars_; ++i) m[i] = std::max(m[i], -e[i]);
    return m;
}

mpz_class Laurent::numerator_constant_term() const {
    Exp m = denominator_vector();
    for (auto& v : m) v = -v;
    return coeff(m);
}

std::string Laurent::pretty(const std::vector<std::string>& names) const {
    if (is_zero()) return "0";
    auto var = [&](int i) {
        if (i < (int)names.size()) return names[i];
        return "x" + std::to_string(i + 1);
    };
    Exp den = denominator_vector();
    // display uses the monomial-cleared form, so only true denominators count
    for (int& m : den)
        if (m < 0) m = 0;
    // numerator terms, lex-descending
    std::vector<std::pair<Exp, mpz_class>> num;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        Exp e = it->first;
        for (int i = 0; i < nvars_; ++i) e[i] += den[i];
        num.emplace_back(e, it->second);
    }
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : num) {
        mpz_class a = c;
        if (first) {
            if (a < 0) { os << "-"; a = -a; }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool any_var = std::any_of(e.begin(), e.end(), [](int k) { return k != 0; });
        std::vector<std::string> factors;
        if (a != 1 || !any_var) factors.push_back(a.get_str());
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            std::string f = var(i);
            if (e[i] != 1) f += "^" + std::to_string(e[i]);
            factors.push_back(std::move(f));
        }
        for (size_t i = 0; i < factors.size(); ++i) {
            if (i) os << "*";
            os << factors[i];
        }
    }
    bool has_den = std::any_of(den.begin(), den.end(), [](int k) { return k != 0; });
    if (!has_den) return os.str();
    std::ostringstream d;
    d << "(" << os.str() << ") / (";
    bool firstv = true;
    for (int i = 0; i < nvars_; ++i) {
        if (den[i] == 0) continue;
        if (!firstv) d << "*";
        firstv = false;
        d << var(i);
        if (den[i] != 1) d << "^" << den[i];
    }
    d << ")";
    return d.str();
}

std::string Laurent::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [e, c] : terms_) {
        nlohmann::json t;
        t["exp"] = e;
        t["coef"] = c.get_str();
        arr.push_back(std::move(t));
    }
    return arr.dump();
}

Laurent Laurent::from_json(const std::string& text, int expected_nvars) {
    nlohmann::json arr = nlohmann::json::parse(text);
    if (!arr.is_array()) fail(errc::parse_error, "laurent json must be an array");
    int nv = expected_nvars;
    Laurent r(std::max(nv, 0));
    for (const auto& t : arr) {
        Exp e = t.at("exp").get<Exp>();
        if (nv < 0) {
            nv = (int)e.size();
            r = Laurent(nv);
        }
        if ((int)e.size() != nv) fail(errc::length_mismatch, "laurent json exponent size");
        mpz_class c(t.at("coef").get<std::string>());
        r.set_coeff(e, r.coeff(e) + c);
    }
    return r;
}

} // namespace clusterkit
