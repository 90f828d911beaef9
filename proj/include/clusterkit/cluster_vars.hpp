#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clusterkit/laurent.hpp"
#include "clusterkit/quiver.hpp"
#include "clusterkit/repmod.hpp"

namespace clusterkit {

// One indecomposable object of the cluster category of an affine quiver:
// preprojective/preinjective slices, shifted projectives, non-homogeneous tube
// modules, and quasi-length-n modules in a generic homogeneous tube.
struct Indec {
    enum class Kind { PreProj, PreInj, Shift, Tube, GenericReg };

    Kind kind = Kind::Shift;
    int v = 1;   // vertex, 1-based (PreProj/PreInj/Shift)
    int k = 0;   // translation power: tau^-k P_v / tau^k I_v
    int t = 1;   // tube number, 1-based (Tube)
    int s = 1;   // quasi-socle index, 1-based (Tube)
    int len = 1; // quasi-length (Tube), >= 0
    int n = 1;   // quasi-length in the generic tube (GenericReg), >= 1

    static Indec preproj(int v, int k = 0);
    static Indec preinj(int v, int k = 0);
    static Indec shift(int v);
    static Indec tube(int t, int s, int len);
    static Indec generic_reg(int n);

    bool operator==(const Indec& o) const;
    bool operator<(const Indec& o) const; // canonical display order
    std::string show() const;             // grammar token, e.g. "tau^-2 P(1)"
};

// A finite multiset of indecomposables (direct sum); empty means the zero object.
using ClusterObject = std::vector<Indec>;

// Object-expression grammar: `P(i)`, `tau^-k P(i)`, `I(i)`, `tau^k I(i)`,
// `shift(i)`, `T<t>:E(s)[l]`, `delta[n]`, joined by `+`, repeated by `^m`.
// Purely syntactic; range errors surface later against a concrete quiver.
ClusterObject parse_object(const std::string& text);
std::string show_object(const ClusterObject& obj); // sorted, repeats folded into ^m

struct VerifyReport {
    std::string identity;
    std::string params; // JSON object
    bool pass = false;
    int residual_terms = 0; // term count of lhs - rhs
    std::string to_json() const;
};

struct CCOptions {
    int horizon = 0;        // slice count per translation component; 0 = derive from box
    DimVector box;          // bounding box for the derived horizon; empty = 2*delta
    std::uint64_t seed = 0; // seed for the sampled tube/generic base modules
    int min_prime = 5;      // sampling field floor for those modules
};

// Evaluation context for one affine quiver: the knitted preprojective and
// preinjective slices, tube caches, and the generic-tube cache. Values are
// exact Laurent polynomials; every stored value has denominator vector equal
// to its dimension vector, and every knitting division is exact.
class CCContext {
public:
    explicit CCContext(const Quiver& q, CCOptions opts = {}); // not_affine otherwise

    const Quiver& quiver() const { return ed_.q; }
    const EulerData& euler() const { return ed_; }
    const std::vector<TubeShape>& tubes() const { return tubes_; }
    int horizon() const { return horizon_; }
    const CCOptions& options() const { return opts_; }

    DimVector dim_of(const Indec& m) const;
    DimVector dim_of(const ClusterObject& obj) const; // sum; Shift contributes -e_v

    Laurent x_of(const Indec& m);
    Laurent x_of(const ClusterObject& obj); // product over summands; empty -> 1

    // X_{E_s[len]} inside tube t and X_{n delta} in the generic tube, via the
    // one-step recursions off oracle-certified base modules.
    Laurent tube_x(int t, int s, int len);
    Laurent x_ndelta(int n);

    // dim Ext^1 of the cluster category, symmetric in A and B.
    int ext1_cc_dim(const Indec& a, const Indec& b);

    // X_M X_{tau M} = 1 + X_E with E the AR mesh middle; M non-projective.
    VerifyReport verify_ar(const Indec& m);
    ClusterObject ar_mesh_middle(const Indec& m) const;

    // Scan both translation components (within the horizon) for a slice with
    // the given dimension vector.
    std::optional<Indec> find_transjective(const DimVector& d) const;

private:
    struct Entry {
        DimVector dim;
        Laurent x;
        bool have_x = false;
    };

    void build_dims();
    void ensure_x(bool preproj, int slice);
    const Laurent& slice_x(bool preproj, int v, int k);
    Laurent oracle_x(const ModuleKind& kind);
    int tube_index_checked(const Indec& m) const;

    EulerData ed_;
    QuiverClass cls_;
    CCOptions opts_;
    std::vector<TubeShape> tubes_;
    std::vector<DimVector> proj_dims_, inj_dims_;
    std::vector<int> source_first_order_;
    int horizon_ = 0;
    int coxeter_period_ = 0;
    std::vector<std::vector<Entry>> pp_, pi_; // [slice][vertex]
    int pp_built_ = 0, pi_built_ = 0;         // slices with X values
    std::map<DimVector, Indec> by_dim_;
    std::map<std::array<int, 3>, Laurent> tube_memo_;
    std::vector<Laurent> ndelta_memo_;
};

} // namespace clusterkit
