#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "clusterkit/errors.hpp"

namespace clusterkit {

using Exp = std::vector<int>; // exponent vector, one entry per variable

// Multivariate Laurent polynomial with arbitrary-precision integer coefficients.
// Terms are kept in a lex-ordered map (std::less on vector<int> is lexicographic),
// invariant: no zero coefficients stored.
class Laurent {
public:
    Laurent() : nvars_(0) {}
    explicit Laurent(int nvars) : nvars_(nvars) {}

    static Laurent zero(int nvars) { return Laurent(nvars); }
    static Laurent constant(int nvars, const mpz_class& c);
    static Laurent monomial(int nvars, const Exp& e, const mpz_class& c = 1);
    static Laurent variable(int nvars, int i); // x_{i+1}, 0-based index

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    size_t term_count() const { return terms_.size(); }
    const std::map<Exp, mpz_class>& terms() const { return terms_; }

    mpz_class coeff(const Exp& e) const;
    void set_coeff(const Exp& e, const mpz_class& c);

    Laurent& operator+=(const Laurent& o);
    Laurent& operator-=(const Laurent& o);
    Laurent operator+(const Laurent& o) const;
    Laurent operator-(const Laurent& o) const;
    Laurent operator-() const;
    Laurent operator*(const Laurent& o) const;
    Laurent& operator*=(const Laurent& o);
    Laurent operator*(const mpz_class& c) const;
    bool operator==(const Laurent& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const Laurent& o) const { return !(*this == o); }

    Laurent pow(unsigned k) const;

    // Exact quotient *this / d. Throws not_divisible when the quotient is not a
    // Laurent polynomial over Z, div_by_zero when d == 0.
    Laurent exact_div(const Laurent& d) const;

    // m_i = -(min exponent of x_i over the support); negative entries mean the
    // variable only appears with positive exponents. Error on the zero polynomial.
    Exp denominator_vector() const;
    // Coefficient at exponent -denominator_vector(); the corner term of the numerator.
    mpz_class numerator_constant_term() const;

    // Human form "P(x) / x1^a x2^b": numerator in lex-descending term order.
    std::string pretty(const std::vector<std::string>& names = {}) const;
    std::string to_json() const;                      // [{"exp":[...],"coef":"..."}]
    static Laurent from_json(const std::string& text, int expected_nvars = -1);

private:
    void check_vars(const Laurent& o) const;
    int nvars_;
    std::map<Exp, mpz_class> terms_;
};

} // namespace clusterkit
