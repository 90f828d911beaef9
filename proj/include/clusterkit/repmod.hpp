#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "clusterkit/laurent.hpp"
#include "clusterkit/quiver.hpp"

namespace clusterkit {

// Dense matrix over GF(p). rows x cols, row-major, entries in [0, p).
struct FpMat {
    int rows = 0, cols = 0;
    long long p = 2;
    std::vector<long long> a;

    FpMat() = default;
    FpMat(int r, int c, long long prime) : rows(r), cols(c), p(prime), a((size_t)r * c, 0) {}
    long long& at(int i, int j) { return a[(size_t)i * cols + j]; }
    long long at(int i, int j) const { return a[(size_t)i * cols + j]; }
    FpMat mul(const FpMat& o) const;
};

long long inv_mod(long long x, long long p);
// In-place row reduction; returns rank. When pivot_cols != nullptr the pivot
// column indices are appended in order.
int row_reduce(FpMat& m, std::vector<int>* pivot_cols = nullptr);
int rank_fp(FpMat m);
// Basis of {x : m x = 0} as columns.
FpMat nullspace(const FpMat& m);
// Least-squares-free exact solve: returns any x with m x = rhs, or nullopt.
std::optional<std::vector<long long>> solve_linear(const FpMat& m, const std::vector<long long>& rhs);

struct Representation {
    Quiver q;
    long long prime = 2;
    DimVector dims;
    std::vector<FpMat> mats; // parallel to q.arrows; mats[k] is d_target x d_source

    std::string to_json() const;
    static Representation from_json(const Quiver& q, const std::string& text);
};

// Zero-filled representation with consistent shapes.
Representation zero_representation(const Quiver& q, const DimVector& d, long long p);
Representation random_representation(const Quiver& q, const DimVector& d, long long p, std::uint64_t seed);

// dim over GF(p) of the intertwiner space {f : f M_a = N_a f for all arrows a}.
int hom_dimension(const Representation& M, const Representation& N);

struct EnumCaps {
    int total = 8;      // cap on sum of dims(M)
    int per_vertex = 3; // cap on each dims(M)[i]
};

// Exact number of subrepresentation tuples of dimension e, by brute enumeration
// of row-reduced subspace bases at every vertex.
mpz_class count_subrepresentations(const Representation& M, const DimVector& e,
                                   const EnumCaps& caps = {});

// A module given uniformly over varying primes (same isomorphism class pattern).
using RepFamily = std::function<Representation(long long prime)>;

struct CountOptions {
    std::vector<long long> primes; // explicit ladder; auto-generated when empty
    long long min_prime = 2;       // first prime of the auto ladder
    EnumCaps caps;
};

struct CountingPolynomial {
    std::vector<mpz_class> coeffs; // coeffs[k] is the q^k coefficient
    int degree_bound = 0;
    std::vector<long long> primes_used; // last one is the held-out check prime
    mpz_class at(long long q) const;
    mpz_class chi() const; // value at q = 1
};

CountingPolynomial counting_polynomial(const RepFamily& family, const DimVector& e,
                                       const CountOptions& opts = {});
mpz_class euler_characteristic(const RepFamily& family, const DimVector& e,
                               const CountOptions& opts = {});

// The definitional map: X_M = sum_e chi(Gr_e(M)) x^{e R + (dim M - e) R^tr - dim M}.
Laurent cc_map_direct(const Quiver& q, const RepFamily& family, const CountOptions& opts = {});

// Family that replays a 0/1-matrix representation verbatim over every prime
// (projectives, injectives, nilpotent tube models). bad_parameters otherwise.
RepFamily fixed_family(Representation rep);

struct ModuleKind {
    enum class Tag {
        projective,      // vertex
        injective,       // vertex
        exceptional,     // dim vector d (real Schur root)
        generic_delta,   // generic module of dimension delta
        tube_simple,     // tube label + simple index (1-based)
        tube_module,     // tube label + simple index + quasi-length
        generic_regular, // generic homogeneous E[n], dimension n*delta
        cyclic_tube,     // standalone nilpotent model on the cyclic quiver
    };
    Tag tag;
    int vertex = 0; // 1-based, projective/injective
    DimVector d;
    std::string tube;   // "T1", ...
    int index = 1;      // 1-based simple index within the tube
    int length = 1;     // quasi-length
    int rank = 1;       // cyclic_tube only
    int n = 1;          // generic_regular multiplicity

    static ModuleKind projective_at(int v);
    static ModuleKind injective_at(int v);
    static ModuleKind exceptional(DimVector d);
    static ModuleKind generic_delta();
    static ModuleKind tube_simple(std::string tube, int index);
    static ModuleKind tube_module(std::string tube, int index, int length);
    static ModuleKind generic_regular(int n);
    static ModuleKind cyclic_tube(int rank, int index, int length);
};

// Builds and certifies one representation over GF(p). Seeded kinds retry with
// derived seeds up to 32 times before certification_failed.
Representation construct_module(const Quiver& q, const ModuleKind& kind, long long p,
                                std::uint64_t seed);

// Family wrapper: same kind and seed, prime varying.
RepFamily module_family(const Quiver& q, const ModuleKind& kind, std::uint64_t seed);

// The cyclic-quiver nilpotent model E_index[length] on `rank` vertices, used for
// within-tube Hom dimensions. Vertex v of the cyclic quiver carries arrows
// v -> v-1 (mod rank); basis vector b_k of E_i[len] sits at vertex i+k (mod rank)
// and maps to b_{k-1}.
Representation cyclic_tube_model(int rank, int index, int length, long long p);

} // namespace clusterkit
