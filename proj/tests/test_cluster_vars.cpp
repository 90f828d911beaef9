#include <doctest.h>

#include <functional>

#include "clusterkit/cluster_vars.hpp"

using namespace clusterkit;

namespace {

Laurent direct_x(const Quiver& q, const ModuleKind& kind, std::uint64_t seed = 0) {
    CountOptions co;
    co.min_prime = 5;
    return cc_map_direct(q, module_family(q, kind, seed), co);
}

errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ck_error& e) {
        return e.code();
    }
    return errc::internal;
}

} // namespace

TEST_SUITE("cluster_vars") {

TEST_CASE("initial cluster variables and the empty object") {
    CCContext ctx(builtin_quiver("kronecker"));
    CHECK(ctx.x_of(Indec::shift(1)) == Laurent::variable(2, 0));
    CHECK(ctx.x_of(Indec::shift(2)) == Laurent::variable(2, 1));
    CHECK(ctx.dim_of(Indec::shift(1)) == DimVector{-1, 0});
    CHECK(ctx.x_of(ClusterObject{}).is_one());
    CHECK(ctx.dim_of(parse_object("P(1) + shift(2)")) == DimVector{1, 1});
}

TEST_CASE("kronecker projectives match hand values") {
    CCContext ctx(builtin_quiver("kronecker"));

    Laurent p2 = Laurent::monomial(2, {2, -1}) + Laurent::monomial(2, {0, -1});
    CHECK(ctx.x_of(Indec::preproj(2)) == p2);

    Laurent p1 = Laurent::monomial(2, {3, -2}) + Laurent::monomial(2, {1, -2}, 2) +
                 Laurent::monomial(2, {-1, -2}) + Laurent::monomial(2, {-1, 0});
    CHECK(ctx.x_of(Indec::preproj(1)) == p1);

    CHECK(ctx.x_of(Indec::preproj(2, 1)).denominator_vector() == DimVector{2, 3});
    for (Indec m : {Indec::preproj(1), Indec::preproj(2, 1), Indec::preinj(2, 1)}) {
        CHECK(ctx.x_of(m).denominator_vector() == ctx.dim_of(m));
        CHECK(ctx.x_of(m).numerator_constant_term() == 1);
    }
}

TEST_CASE("knitted slices agree with the counting oracle") {
    for (const char* name : {"kronecker", "D4tilde"}) {
        CAPTURE(name);
        Quiver q = builtin_quiver(name);
        CCContext ctx(q);
        int checked = 0;
        for (int k = 0; k < ctx.horizon(); ++k)
            for (int v = 1; v <= q.vertices; ++v)
                for (Indec m : {Indec::preproj(v, k), Indec::preinj(v, k)}) {
                    DimVector d = ctx.dim_of(m);
                    if (total(d) > 6) continue;
                    CAPTURE(m.show());
                    CHECK(ctx.x_of(m) == direct_x(q, ModuleKind::exceptional(d)));
                    ++checked;
                }
        CHECK(checked >= 6);
    }
}

TEST_CASE("tube and generic-tube recursions agree with the counting oracle") {
    Quiver q = builtin_quiver("D4tilde");
    CCContext ctx(q);
    REQUIRE(ctx.tubes().size() == 3);
    for (const auto& tube : ctx.tubes()) REQUIRE(tube.rank == 2);

    for (int t = 1; t <= 3; ++t) {
        const auto& shape = ctx.tubes()[t - 1];
        for (int s = 1; s <= 2; ++s) {
            CAPTURE(t);
            CAPTURE(s);
            CHECK(ctx.tube_x(t, s, 1) == direct_x(q, ModuleKind::tube_simple(shape.label, s)));
            CHECK(ctx.tube_x(t, s, 2) == direct_x(q, ModuleKind::tube_module(shape.label, s, 2)));
        }
    }
    CHECK(ctx.x_ndelta(1) == direct_x(q, ModuleKind::generic_delta()));

    // The sampled base modules wash out of the values.
    CCOptions other;
    other.seed = 20260814;
    CCContext ctx2(q, other);
    CHECK(ctx2.tube_x(1, 1, 1) == ctx.tube_x(1, 1, 1));
    CHECK(ctx2.x_ndelta(1) == ctx.x_ndelta(1));
}

TEST_CASE("generic quasi-lengths agree with the counting oracle") {
    Quiver q = builtin_quiver("kronecker");
    CCContext ctx(q);
    for (int n = 1; n <= 3; ++n) {
        CAPTURE(n);
        CHECK(ctx.x_ndelta(n) == direct_x(q, ModuleKind::generic_regular(n)));
    }
}

TEST_CASE("mesh identities certify the tables") {
    CCContext kron(builtin_quiver("kronecker"));
    for (Indec m : {Indec::preproj(2, 1), Indec::preproj(1, 1), Indec::preinj(1, 1),
                    Indec::generic_reg(1), Indec::generic_reg(2)}) {
        VerifyReport rep = kron.verify_ar(m);
        CAPTURE(m.show());
        CHECK(rep.pass);
        CHECK(rep.residual_terms == 0);
        CHECK(rep.to_json().find("\"pass\":true") != std::string::npos);
    }

    CCContext star(builtin_quiver("D4tilde"));
    for (Indec m : {Indec::tube(1, 2, 1), Indec::tube(2, 1, 2), Indec::tube(3, 1, 3)})
        CHECK(star.verify_ar(m).pass);

    // Rank-two tube mesh, written out: X_{E_2} X_{E_1} = 1 + X_{E_1[2]}.
    Laurent lhs = star.tube_x(1, 2, 1) * star.tube_x(1, 1, 1);
    CHECK(lhs == Laurent::constant(5, 1) + star.tube_x(1, 1, 2));

    CHECK_THROWS_AS(kron.verify_ar(Indec::preproj(1, 0)), ck_error);
    CHECK_THROWS_AS(kron.verify_ar(Indec::shift(1)), ck_error);
}

TEST_CASE("extension dimensions in the cluster category") {
    CCContext kron(builtin_quiver("kronecker"));
    CHECK(kron.ext1_cc_dim(Indec::preproj(1), Indec::preproj(1)) == 0);
    CHECK(kron.ext1_cc_dim(Indec::preproj(1), Indec::preproj(2)) == 0);
    CHECK(kron.ext1_cc_dim(Indec::preproj(2), Indec::preproj(2, 1)) == 1);
    CHECK(kron.ext1_cc_dim(Indec::preproj(1), Indec::preinj(1)) == 3);
    CHECK(kron.ext1_cc_dim(Indec::preinj(1), Indec::preproj(1)) == 3);
    CHECK(kron.ext1_cc_dim(Indec::generic_reg(1), Indec::generic_reg(1)) == 2);
    CHECK(kron.ext1_cc_dim(Indec::generic_reg(1), Indec::generic_reg(2)) == 2);
    CHECK(kron.ext1_cc_dim(Indec::shift(1), Indec::preproj(1)) == 1);
    CHECK(kron.ext1_cc_dim(Indec::shift(1), Indec::preproj(2, 1)) == 2);
    CHECK(kron.ext1_cc_dim(Indec::shift(1), Indec::shift(2)) == 0);

    CCContext star(builtin_quiver("D4tilde"));
    CHECK(star.ext1_cc_dim(Indec::tube(1, 1, 1), Indec::tube(1, 1, 1)) == 0);
    CHECK(star.ext1_cc_dim(Indec::tube(1, 1, 1), Indec::tube(1, 2, 1)) == 2);
    CHECK(star.ext1_cc_dim(Indec::tube(1, 1, 2), Indec::tube(1, 1, 2)) == 2);
    CHECK(star.ext1_cc_dim(Indec::tube(1, 1, 1), Indec::tube(2, 1, 1)) == 0);
    CHECK(star.ext1_cc_dim(Indec::tube(1, 1, 1), Indec::generic_reg(1)) == 0);
    CHECK(star.ext1_cc_dim(Indec::preproj(2), Indec::tube(1, 1, 1)) ==
          star.ext1_cc_dim(Indec::tube(1, 1, 1), Indec::preproj(2)));
}

TEST_CASE("an exchange pair on the central-source star") {
    Quiver q;
    q.vertices = 5;
    q.arrows = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
    CCContext ctx(q);

    auto found = ctx.find_transjective({2, 0, 1, 1, 1});
    REQUIRE(found.has_value());
    CHECK(found->kind == Indec::Kind::PreInj);
    CHECK(ctx.ext1_cc_dim(*found, Indec::preproj(2)) == 2);
}

TEST_CASE("horizon control and failure modes") {
    Quiver kron = builtin_quiver("kronecker");
    CCContext ctx(kron);
    CHECK(ctx.horizon() == 3);

    CCOptions tight;
    tight.horizon = 2;
    CCContext small(kron, tight);
    CHECK(code_of([&] { small.x_of(Indec::preproj(1, 5)); }) == errc::horizon_too_small);

    CHECK(code_of([&] { ctx.x_of(Indec::preproj(9, 0)); }) == errc::bad_index);
    CHECK(code_of([&] { ctx.x_of(Indec::generic_reg(0)); }) == errc::bad_parameters);
    CHECK(code_of([&] { ctx.dim_of(Indec::preproj(1, -1)); }) == errc::bad_parameters);
    CHECK(code_of([&] { ctx.tube_x(1, 1, 1); }) == errc::unknown_tube);

    Quiver a2;
    a2.vertices = 2;
    a2.arrows = {{0, 1}};
    CHECK(code_of([&] { CCContext bad(a2); }) == errc::not_affine);
}

TEST_CASE("object expressions round-trip") {
    ClusterObject obj = parse_object("tau^-2 P(1) + I(3)^2 + T1:E(2)[3] + delta[2] + shift(4)");
    CHECK(obj.size() == 6);
    CHECK(show_object(obj) == "tau^-2 P(1) + I(3)^2 + T1:E(2)[3] + delta[2] + shift(4)");
    CHECK(show_object(parse_object("P(2)+P(2) + tau^0 P(2)")) == "P(2)^3");
    CHECK(show_object(parse_object(" tau^1  I(2) ")) == "tau^1 I(2)");
    CHECK(show_object(ClusterObject{}) == "0");

    for (const char* bad : {"", "Q(1)", "P(1", "P(1) + ", "tau^2 P(1)", "tau^-1 I(1)",
                            "delta[0]", "T1:E(1)[0]", "P(1)^0", "P(x)"})
        CHECK(code_of([&] { parse_object(bad); }) == errc::parse_error);
}

TEST_CASE("values stay normalized across builtins") {
    for (const char* name : {"A22tilde", "A32tilde", "D5tilde"}) {
        CAPTURE(name);
        Quiver q = builtin_quiver(name);
        CCContext ctx(q);
        const bool alternating = std::string(name) != "A32tilde";
        for (int v = 1; v <= q.vertices; ++v) {
            Indec m = Indec::preproj(v, 1);
            CHECK(ctx.x_of(m).denominator_vector() == ctx.dim_of(m));
            // the corner coefficient is 1 whenever every vertex is a sink or a source
            if (alternating) CHECK(ctx.x_of(m).numerator_constant_term() == 1);
        }
        for (int t = 1; t <= (int)ctx.tubes().size(); ++t) {
            const int r = ctx.tubes()[t - 1].rank;
            for (int s = 1; s <= r; ++s) {
                CHECK(ctx.x_of(Indec::tube(t, s, 1)).denominator_vector() ==
                      ctx.dim_of(Indec::tube(t, s, 1)));
                CHECK(ctx.verify_ar(Indec::tube(t, s, 1)).pass);
            }
            CHECK(ctx.x_of(Indec::tube(t, 1, r + 1)).denominator_vector() ==
                  ctx.dim_of(Indec::tube(t, 1, r + 1)));
        }
        CHECK(ctx.x_ndelta(1).denominator_vector() == ctx.euler().delta);
    }

    CCContext a32(builtin_quiver("A32tilde"));
    REQUIRE(a32.tubes().size() == 2);
    CHECK(a32.tubes()[0].rank == 3);
    CHECK(a32.tubes()[1].rank == 2);
}

TEST_CASE("transjective lookup by dimension vector") {
    CCContext kron(builtin_quiver("kronecker"));
    auto hit = kron.find_transjective({2, 3});
    REQUIRE(hit.has_value());
    CHECK(*hit == Indec::preproj(2, 1));
    CHECK(!kron.find_transjective({1, 1}).has_value());

    CCContext star(builtin_quiver("D4tilde"));
    auto inj = star.find_transjective({1, 1, 1, 1, 1});
    REQUIRE(inj.has_value());
    CHECK(*inj == Indec::preinj(1, 0));
}

} // TEST_SUITE
