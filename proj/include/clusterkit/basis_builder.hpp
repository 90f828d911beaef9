#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "clusterkit/cluster_vars.hpp"

namespace clusterkit {

enum class BasisFlavor { Bprime, Bg };

// One catalog element: an ext-orthogonal multiset of indecomposables. A
// GenericReg summand marks a delta family (generic quasi-length-k regular
// glued with a rigid tube part); everything else is a rigid object.
struct BasisElement {
    ClusterObject object;      // sorted summands; empty = unit element
    DimVector dim;             // signed key; Shift summands contribute -e_v
    bool delta_family = false; // exactly one GenericReg summand present
};

struct BasisExpansionTerm {
    DimVector dim;
    mpz_class coef;
};
// Sorted by coordinate sum descending, then lex descending, so a key that
// componentwise dominates another always comes first.
using BasisExpansion = std::vector<BasisExpansionTerm>;

std::string expansion_to_json(const BasisExpansion& e);

// Box-truncated basis catalog of an affine quiver: exactly one element per
// dimension vector in [-B, B]^n. Values are exact Laurent polynomials with
// denominator vector equal to the key. Build verifies key uniqueness, box
// completeness, and the pivot structure used by expand; all three are
// internal invariants, so failures throw.
class BasisCatalog {
public:
    BasisCatalog(CCContext& cc, DimVector box, BasisFlavor flavor);
    BasisCatalog(const Quiver& q, DimVector box, BasisFlavor flavor, CCOptions opts = {});

    const Quiver& quiver() const;
    CCContext& context() const { return *cc_; }
    const DimVector& box() const { return box_; }
    BasisFlavor flavor() const { return flavor_; }
    std::size_t size() const { return elements_.size(); }

    // Elements in lex order of their keys.
    const std::vector<BasisElement>& elements() const { return elements_; }
    bool contains(const DimVector& d) const;
    const BasisElement& element_from_dimension(const DimVector& d) const; // out_of_box
    const Laurent& value(const DimVector& d) const;

    // Integer vertex weights y with (R - R^T) y < 0 componentwise. Weighing
    // exponents by y makes every catalog value carry a unique maximal
    // exponent (its pivot) with coefficient 1; pivots determine keys, so a
    // combination of catalog values is peeled off one leading pivot at a
    // time regardless of orientation.
    const std::vector<long long>& grading() const { return grading_; }

    // Rewrites f as an integer combination of catalog values. not_in_span
    // when a leading exponent matches no catalog pivot (key escapes the box
    // or f is outside the spanned lattice).
    BasisExpansion expand(const Laurent& f) const;

    std::string to_json() const; // array of {"dim", "kind", "summands"}

private:
    Exp pivot_of_key(const DimVector& d) const;
    long long weight(const Exp& e) const;
    void enumerate();
    void finalize();

    CCContext* cc_ = nullptr;
    std::shared_ptr<CCContext> owned_;
    DimVector box_;
    BasisFlavor flavor_ = BasisFlavor::Bprime;
    std::vector<long long> grading_;
    std::vector<BasisElement> elements_;
    std::vector<Laurent> values_;     // parallel to elements_
    std::map<DimVector, int> index_;  // key -> element position
    std::map<Exp, int> pivots_;       // pivot exponent -> element position
};

BasisCatalog build_catalog(const Quiver& q, const DimVector& box, BasisFlavor flavor);
const BasisElement& element_from_dimension(const BasisCatalog& cat, const DimVector& d);
BasisExpansion expand(const Laurent& f, const BasisCatalog& cat);

// Row i expands the B_g element at keys[i] in the B' catalog over the same
// box. Rigid elements and one-copy delta families have identical values in
// both flavors and produce identity rows without a solve; the remaining rows
// are checked to be unitriangular: diagonal 1, off-diagonal keys strictly
// dominated by the row key.
struct TransitionMatrix {
    std::vector<DimVector> keys;
    std::vector<BasisExpansion> rows;
    std::string to_json() const;
};
TransitionMatrix transition_matrix(const Quiver& q, const DimVector& box);

// Expands prod_i X_{S_i}^{d_i^+} x_i^{d_i^-} in the catalog; the simple
// modules' values come from the definitional map on the one-dimensional
// representations. Checks that the leading key is d with coefficient 1 and
// every other key strictly dominated; identity_failed otherwise.
BasisExpansion monomial_expand(const Quiver& q, const BasisCatalog& cat, const DimVector& d);

} // namespace clusterkit
