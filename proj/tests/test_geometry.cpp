#include <doctest.h>

#include "invmet/geometry.hpp"

using namespace invmet;

TEST_SUITE_BEGIN("geometry");

namespace {
NearestConfig fast_cfg() {
    NearestConfig c;
    c.coarse_directions = 3000;
    c.refine_evals = 2500;
    return c;
}
} // namespace

TEST_CASE("nearest boundary point on the ball and the disk") {
    ModelDomain b2 = ModelDomain::ball(2, 1.0);
    BoundaryFrame f = nearest_boundary_frame(b2, ComplexVector{cplx(0.5, 0), cplx(0, 0)});
    CHECK(f.foot[0].real() == doctest::Approx(1.0));
    CHECK(std::abs(f.foot[1]) == doctest::Approx(0.0));
    CHECK(f.distance == doctest::Approx(0.5));
    CHECK(f.inward_normal[0].real() == doctest::Approx(-1.0));

    ModelDomain disk = ModelDomain::unit_disk();
    BoundaryFrame g = nearest_boundary_frame(disk, ComplexVector{cplx(0.9, 0)});
    CHECK(g.foot[0].real() == doctest::Approx(1.0));
    CHECK(g.distance == doctest::Approx(0.1));
}

TEST_CASE("nearest boundary point on G from the normal segment") {
    // From (-delta, 0) the squared distance to the boundary point with
    // |w|^2 = s is (s + delta)^2 + s, increasing in s, so the minimum sits
    // at the origin with distance delta.
    ModelDomain g = ModelDomain::half_parab();
    double delta = 0.01;
    BoundaryFrame f =
        nearest_boundary_frame(g, ComplexVector{cplx(-delta, 0), cplx(0, 0)}, fast_cfg());
    CHECK(std::abs(f.foot[0]) < 1e-6);
    CHECK(std::abs(f.foot[1]) < 1e-4);
    CHECK(f.distance == doctest::Approx(delta).epsilon(1e-6));
    CHECK(f.gradient[0].real() == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("frame invariants") {
    ModelDomain g = ModelDomain::half_parab();
    Rng rng(23);
    for (int i = 0; i < 5; ++i) {
        ComplexVector z = random_interior(g, rng, 0.05);
        BoundaryFrame f = nearest_boundary_frame(g, z, fast_cfg());
        CHECK(std::abs(f.inward_normal.norm() - 1.0) < 1e-12);
        CHECK(std::abs(distance(z, f.foot) - f.distance) < 1e-9);
        CHECK(std::abs(defining_value(g, f.foot)) < 1e-6);
    }
}

TEST_CASE("nearest-point minimality against random boundary samples") {
    ModelDomain g = ModelDomain::half_parab();
    Rng rng(29);
    ComplexVector z = random_interior(g, rng, 0.05);
    BoundaryFrame f = nearest_boundary_frame(g, z, fast_cfg());
    for (int i = 0; i < 1000; ++i) {
        ComplexVector y = random_boundary_point(g, rng);
        CHECK(f.distance <= distance(z, y) + 1e-7);
    }
}

TEST_CASE("non-convergent refinement carries the best frame") {
    ModelDomain g = ModelDomain::half_parab();
    NearestConfig starved;
    starved.coarse_directions = 200;
    starved.refine_evals = 3; // cannot possibly reach tolerance
    ComplexVector z{cplx(-0.13, 0.02), cplx(0.1, -0.05)};
    try {
        (void)nearest_boundary_frame(g, z, starved);
        FAIL("expected frame_convergence_error");
    } catch (const frame_convergence_error& e) {
        CHECK(e.best_frame.distance > 0.0);
        CHECK(std::abs(e.best_frame.inward_normal.norm() - 1.0) < 1e-12);
        CHECK(std::abs(distance(z, e.best_frame.foot) - e.best_frame.distance) < 1e-9);
    }
}

TEST_CASE("outside points are rejected") {
    ModelDomain b2 = ModelDomain::ball(2, 1.0);
    CHECK_THROWS_AS((void)nearest_boundary_frame(b2, ComplexVector{cplx(2, 0), cplx(0, 0)}),
                    geometry_error);
    CHECK_THROWS_AS((void)nearest_boundary_frame(b2, ComplexVector{cplx(1, 0), cplx(0, 0)}),
                    geometry_error);
}

TEST_CASE("normal decomposition examples") {
    BoundaryFrame f;
    f.inward_normal = ComplexVector{cplx(1, 0), cplx(0, 0)};
    auto [np, tang] = normal_decompose(f, ComplexVector{cplx(3, 0), cplx(4, 0)});
    CHECK(np == cplx(3, 0));
    CHECK(tang[0] == cplx(0, 0));
    CHECK(tang[1] == cplx(4, 0));

    auto [np2, tang2] = normal_decompose(f, ComplexVector{cplx(0, 0), cplx(1, 0)});
    CHECK(np2 == cplx(0, 0));
    CHECK(tang2[1] == cplx(1, 0));

    double s = 1.0 / std::sqrt(2.0);
    BoundaryFrame f2;
    f2.inward_normal = ComplexVector{cplx(s, 0), cplx(s, 0)};
    auto [np3, tang3] = normal_decompose(f2, ComplexVector{cplx(1, 0), cplx(0, 0)});
    CHECK(np3.real() == doctest::Approx(s));
    CHECK(tang3[0].real() == doctest::Approx(0.5));
    CHECK(tang3[1].real() == doctest::Approx(-0.5));
}

TEST_CASE("decomposition reconstructs the vector and is orthogonal") {
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        BoundaryFrame f;
        f.inward_normal = rng.unit_vector(3);
        ComplexVector x = rng.gaussian_vector(3);
        auto [np, tang] = normal_decompose(f, x);
        ComplexVector rebuilt = np * f.inward_normal + tang;
        CHECK(distance(rebuilt, x) < 1e-10);
        CHECK(std::abs(hermitian_inner(f.inward_normal, tang)) < 1e-10);
    }
}

TEST_SUITE_END();
