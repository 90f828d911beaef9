#pragma once

#include <string>
#include <utility>
#include <vector>

#include "clusterkit/cluster_vars.hpp"

namespace clusterkit {

// A view of one non-homogeneous tube of a CCContext.  Values are memoized in
// the underlying context, so several TubeContexts over the same CCContext
// share work; the context is single-writer during evaluation, multi-reader
// afterwards.
class TubeContext {
public:
    // `tube` is 1-based, matching CCContext::tube_x.
    TubeContext(CCContext& cc, int tube);

    CCContext& context() const { return cc_; }
    const TubeShape& shape() const;
    int index() const { return tube_; }
    int rank() const { return rank_; }

    // X_{E_s[len]};  s is cyclic (any integer), len >= 0, length 0 gives 1.
    Laurent x(int s, int len);

    // Tube module of quasi-socle E_s and quasi-length len as an object.
    Indec module(int s, int len) const;

private:
    CCContext& cc_;
    int tube_;
    int rank_;
};

// One summand of a product expansion: an object (interpreted as the direct
// sum of its factors, so its value is the product of theirs) with an integer
// multiplicity.
using Expansion = std::vector<std::pair<ClusterObject, int>>;

// Labels of the product-formula case predicates that hold for the given
// parameters; "1.1", "1.2" when j <= i, "2.1", "2.2" when j > i.  The empty
// vector means the split-free fallback case ("1.3" / "2.3") applies.  The
// predicates of a branch are mutually exclusive; tests sweep this.
std::vector<std::string> product_cases(int r, int i, int k, int j, int m, int l);

// Expands X_{E_i[k]} * X_{E_j[m*r+l]} into the two-term (or direct-sum)
// closed form of the in-tube multiplication theorem, evaluates both sides
// exactly and throws IdentityFailed (with both polynomials) on any mismatch.
// Requires 1 <= i,j <= r, m >= 0, 0 <= l < r, 1 <= k <= m*r+l.
Expansion tube_product(TubeContext& ctx, int i, int k, int j, int m, int l);

// Checks the quasi-length-n difference form for the simple E_i:
//   n == rank:     X_{E_i[n]} = X_delta + X_{E_{i+1}[n-2]}
//   n == rank + 2: X_{E_i[n]} = X_delta * X_{E_i[2]} - (rank == 2 ? 1 : 0)
// Other lengths are unsupported and throw BadLength.
VerifyReport difference_check(TubeContext& ctx, int i, int n);

// Verifies X_{M[m]} X_{M[n]} = sum_{i=0..n} X_{M[(m-n)+2i]} for the generic
// quasi-simple M, over all 1 <= n <= m with m + n <= max_total.
std::vector<VerifyReport> chebyshev_sweep(CCContext& cc, int max_total);

// X_{n delta} for an affine quiver; verifies the Chebyshev product sweep up
// to total quasi-length 6 before returning.
Laurent x_ndelta(const Quiver& q, int n);

// Runs tube_product over all i, j in 1..rank, 1 <= k <= max_k, 0 <= m <=
// max_m, 0 <= l < rank with k <= m*rank + l, recording one report per tuple
// (including which case fired) and flagging any overlapping predicates.
std::vector<VerifyReport> product_case_sweep(TubeContext& ctx, int max_k, int max_m);

// Closed forms of the long products X_{E_{1+offset}[3m+a]} X_{E_1[n]} on a
// rank-3 tube (offset 0 or 1, a in {1,2,3}, n >= 3m+a).  With congruent set,
// uses the sharper forms available when n == 1 (mod 3); they require
// offset 1.  Returns the checked report.
VerifyReport long_product_check(TubeContext& ctx, int offset, int a, int m, int n,
                                bool congruent = false);

// Every tube carries modules of dimension n*delta (quasi-length n*rank, any
// quasi-socle); their values differ from each other and from X_{n delta}
// only below n*delta.  Expands each pairwise difference and each socle-1 vs
// generic difference in the basis catalog on box n*delta and reports, per
// comparison, whether all surviving keys sit strictly below n*delta
// (residual_terms counts the offending keys).
std::vector<VerifyReport> compare_delta_variants(CCContext& cc, int n);

} // namespace clusterkit
