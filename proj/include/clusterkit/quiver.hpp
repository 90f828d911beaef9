#pragma once

#include <string>
#include <utility>
#include <vector>

#include "clusterkit/errors.hpp"

namespace clusterkit {

// Dimension vectors share the exponent representation so CC denominators compare directly.
using DimVector = std::vector<int>;

DimVector add(const DimVector& a, const DimVector& b);
DimVector sub(const DimVector& a, const DimVector& b);
DimVector scale(const DimVector& a, int k);
bool leq(const DimVector& a, const DimVector& b);       // componentwise <=
bool strictly_less(const DimVector& a, const DimVector& b); // <= and !=
bool is_nonneg(const DimVector& a);
bool is_zero_vec(const DimVector& a);
int total(const DimVector& a);
std::string show(const DimVector& a);

struct Quiver {
    int vertices = 0;
    std::vector<std::pair<int, int>> arrows; // 0-based endpoints

    std::string to_json() const; // 1-based on the wire
    static Quiver from_json(const std::string& text);
};

// Throws cyclic_quiver / disconnected / bad_index.
void validate_quiver(const Quiver& q);

struct IMat {
    int n = 0;
    std::vector<long long> a; // row-major n x n
    static IMat identity(int n);
    long long& at(int i, int j) { return a[(size_t)i * n + j]; }
    long long at(int i, int j) const { return a[(size_t)i * n + j]; }
    IMat mul(const IMat& o) const;
    DimVector apply(const DimVector& d) const; // column-vector convention
};

enum class QuiverKind { A_tilde, D_tilde, E_tilde, finite, other };

struct QuiverClass {
    QuiverKind kind = QuiverKind::other;
    int p = 0, q = 0; // A_tilde(p,q), p >= q >= 1
    int n = 0;        // D_tilde(n) / E_tilde(n)
    bool affine() const {
        return kind == QuiverKind::A_tilde || kind == QuiverKind::D_tilde ||
               kind == QuiverKind::E_tilde;
    }
    std::string name() const; // "A_tilde(3,2)", "D_tilde(4)", "E_tilde(6)", "finite", "other"
};

QuiverClass classify(const Quiver& q);

struct TubeShape {
    std::string label; // "T1", "T2", ...
    int rank = 0;
    std::vector<DimVector> simples; // simples[s], 0-based; Phi(simples[s]) = simples[s-1 mod r]
    std::string to_json() const;
};

struct EulerData {
    Quiver q;
    int n = 0;
    QuiverClass cls;
    IMat R;      // r_ij = #arrows i->j = dim Ext^1(S_i, S_j)
    IMat E;      // I - R; <d,e> = d E e^T
    IMat S;      // E + E^T, symmetrized form
    IMat Phi;    // dim tau M = Phi dim M for non-projective M
    IMat PhiInv;
    DimVector delta;                   // primitive positive radical generator; empty unless affine
    std::vector<int> sink_first_order; // admissible ordering behind Phi

    long long euler_form(const DimVector& d, const DimVector& e) const;
    long long sym_form(const DimVector& d, const DimVector& e) const;
    long long tits_q(const DimVector& d) const { return euler_form(d, d); }
    long long defect(const DimVector& d) const; // throws not_affine when delta is empty
    DimVector coxeter(const DimVector& d, long long power) const;
};

// Validates, classifies and computes R/E/S/Phi; delta is filled for affine classes
// and left empty otherwise.
EulerData euler_data(const Quiver& q);

// Named example quivers shared by the CLI and the tests.
Quiver builtin_quiver(const std::string& name); // bad_parameters for unknown names
std::vector<std::string> builtin_quiver_names();

// Simple reflection at a sink or source vertex v (0-based): returns the reflected
// quiver and s_v(d). Throws not_sink_or_source otherwise.
std::pair<Quiver, DimVector> reflect(const Quiver& q, const DimVector& d, int v);

// Non-homogeneous tubes: Phi-orbits of defect-0 real roots below delta whose orbit
// sums to delta, ordered rank-descending then lex, simples rotated to start lex-minimal.
std::vector<TubeShape> regular_simple_orbits(const EulerData& ed);

} // namespace clusterkit
