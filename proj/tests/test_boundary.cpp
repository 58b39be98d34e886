#include <doctest.h>

#include "solvdiff/boundary.hpp"
#include "solvdiff/errors.hpp"
#include "solvdiff/transform.hpp"

#include <cmath>

using namespace solvdiff;
using namespace solvdiff::proc;
using namespace solvdiff::bnd;

namespace {

// CIR process with a prescribed alpha (sigma = 1, b = 1 => theta = 2).
CIR cir_alpha(double alpha) { return CIR{(alpha + 1.0) / 2.0, 1.0, 1.0}; }

// Jacobi process on [0,2] with prescribed (alpha, beta), sigma = 1.
Jacobi jacobi_ab(double alpha, double beta) {
    double A = 2.0;
    double a = (beta + 1.0) * A / 2.0;
    double b = (alpha + beta + 2.0) / 2.0;
    return Jacobi{a, b, 1.0, A};
}

} // namespace

TEST_CASE("CIR boundary table at the origin") {
    CHECK(classify_endpoint(BaseProcess{cir_alpha(0.0)}, Side::Lo) == BoundaryClass::Entrance);
    CHECK(classify_endpoint(BaseProcess{cir_alpha(1.5)}, Side::Lo) == BoundaryClass::Entrance);
    CHECK(classify_endpoint(BaseProcess{cir_alpha(-0.5)}, Side::Lo) == BoundaryClass::Regular);
    CHECK(classify_endpoint(BaseProcess{cir_alpha(-0.25)}, Side::Lo) == BoundaryClass::Regular);
    CHECK(classify_endpoint(BaseProcess{cir_alpha(-1.5)}, Side::Lo) == BoundaryClass::Exit);
    CHECK(classify_endpoint(BaseProcess{cir_alpha(-1.0)}, Side::Lo) == BoundaryClass::Exit);
}

TEST_CASE("CIR upper boundary is natural") {
    CHECK(classify_endpoint(BaseProcess{cir_alpha(0.5)}, Side::Hi) == BoundaryClass::Natural);
    CHECK(classify_endpoint(BaseProcess{cir_alpha(-0.5)}, Side::Hi) == BoundaryClass::Natural);
}

TEST_CASE("Jacobi boundary tables on both sides") {
    // left endpoint classified by beta
    CHECK(classify_endpoint(BaseProcess{jacobi_ab(1.0, 0.5)}, Side::Lo) ==
          BoundaryClass::Entrance);
    CHECK(classify_endpoint(BaseProcess{jacobi_ab(1.0, 2.0)}, Side::Lo) ==
          BoundaryClass::Entrance);
    CHECK(classify_endpoint(BaseProcess{jacobi_ab(1.0, -0.5)}, Side::Lo) ==
          BoundaryClass::Regular);
    CHECK(classify_endpoint(BaseProcess{jacobi_ab(1.0, -0.25)}, Side::Lo) ==
          BoundaryClass::Regular);
    CHECK(classify_endpoint(BaseProcess{jacobi_ab(1.0, -1.5)}, Side::Lo) == BoundaryClass::Exit);
    CHECK(classify_endpoint(BaseProcess{jacobi_ab(1.0, -1.0)}, Side::Lo) == BoundaryClass::Exit);
    // right endpoint classified by alpha
    CHECK(classify_endpoint(BaseProcess{jacobi_ab(0.5, 1.0)}, Side::Hi) ==
          BoundaryClass::Entrance);
    CHECK(classify_endpoint(BaseProcess{jacobi_ab(2.0, 1.0)}, Side::Hi) ==
          BoundaryClass::Entrance);
    CHECK(classify_endpoint(BaseProcess{jacobi_ab(-0.5, 1.0)}, Side::Hi) ==
          BoundaryClass::Regular);
    CHECK(classify_endpoint(BaseProcess{jacobi_ab(-0.25, 1.0)}, Side::Hi) ==
          BoundaryClass::Regular);
    CHECK(classify_endpoint(BaseProcess{jacobi_ab(-1.5, 1.0)}, Side::Hi) == BoundaryClass::Exit);
    CHECK(classify_endpoint(BaseProcess{jacobi_ab(-1.0, 1.0)}, Side::Hi) == BoundaryClass::Exit);
}

TEST_CASE("BM and OU are natural at both ends; Bessel entrance/natural") {
    ClassifyDetail detail;
    CHECK(classify_endpoint(BaseProcess{BM{}}, Side::Lo, &detail) == BoundaryClass::Natural);
    CHECK_FALSE(detail.q_integrable);
    CHECK_FALSE(detail.r_integrable);
    CHECK(classify_endpoint(BaseProcess{BM{}}, Side::Hi) == BoundaryClass::Natural);
    CHECK(classify_endpoint(BaseProcess{OU{0.0, 1.0, 1.0}}, Side::Lo) == BoundaryClass::Natural);
    CHECK(classify_endpoint(BaseProcess{OU{0.5, 2.0, 0.7}}, Side::Hi) == BoundaryClass::Natural);
    CHECK(classify_endpoint(BaseProcess{Bessel{1.5, 1.0}}, Side::Lo) == BoundaryClass::Entrance);
    CHECK(classify_endpoint(BaseProcess{Bessel{1.5, 1.0}}, Side::Hi) == BoundaryClass::Natural);
}

TEST_CASE("transformed-process classes per the lemmas") {
    // CIR, both c1 and c2 positive
    auto t_half = xform::build_transform(BaseProcess{cir_alpha(0.5)}, 1.0, 1.0, 1.0, 0.0, 1.0);
    CHECK(classify_transformed(t_half, Side::Lo).cls == TransformedClass::Killing);
    CHECK(classify_transformed(t_half, Side::Hi).cls == TransformedClass::Natural);

    auto t_big = xform::build_transform(BaseProcess{cir_alpha(1.5)}, 1.0, 1.0, 1.0, 0.0, 1.0);
    CHECK(classify_transformed(t_big, Side::Lo).cls == TransformedClass::Exit);

    // Jacobi with beta = 0.5 at the left end, alpha = 1.5 at the right
    auto t_jac =
        xform::build_transform(BaseProcess{jacobi_ab(1.5, 0.5)}, 1.0, 1.0, 1.0, 0.0, 1.0);
    CHECK(classify_transformed(t_jac, Side::Lo).cls == TransformedClass::Killing);
    CHECK(classify_transformed(t_jac, Side::Hi).cls == TransformedClass::Exit);

    // OU family stays natural on both sides
    auto t_ou = xform::build_transform(BaseProcess{OU{0.0, 1.0, 1.0}}, 1.0, 1.0, 1.0, 1.0, -1.0);
    CHECK(classify_transformed(t_ou, Side::Lo).cls == TransformedClass::Natural);
    CHECK(classify_transformed(t_ou, Side::Hi).cls == TransformedClass::Natural);
}

TEST_CASE("generic fallback agrees with the lemma answers") {
    struct Case {
        BaseProcess p;
        Side side;
        TransformedClass want;
    };
    std::vector<Case> cases = {
        {BaseProcess{cir_alpha(0.5)}, Side::Lo, TransformedClass::Killing},
        {BaseProcess{cir_alpha(0.75)}, Side::Lo, TransformedClass::Killing},
        {BaseProcess{cir_alpha(1.5)}, Side::Lo, TransformedClass::Exit},
        {BaseProcess{cir_alpha(2.5)}, Side::Lo, TransformedClass::Exit},
        {BaseProcess{cir_alpha(0.5)}, Side::Hi, TransformedClass::Natural},
        {BaseProcess{jacobi_ab(1.5, 0.5)}, Side::Lo, TransformedClass::Killing},
        {BaseProcess{jacobi_ab(1.5, 0.5)}, Side::Hi, TransformedClass::Exit},
        {BaseProcess{jacobi_ab(0.5, 1.5)}, Side::Lo, TransformedClass::Exit},
        {BaseProcess{jacobi_ab(0.5, 1.5)}, Side::Hi, TransformedClass::Killing},
    };
    for (const auto& c : cases) {
        auto t = xform::build_transform(c.p, 1.0, 1.0, 1.0, 0.0, 1.0);
        auto fb = classify_transformed_generic(t, c.side);
        CHECK(fb.cls == c.want);
        CHECK(fb.via_fallback);
    }
}

TEST_CASE("edge coefficient configurations take the flagged fallback") {
    // c2 = 0 on a CIR base: no killing mass at the origin, h stays bounded
    auto t = xform::build_transform(BaseProcess{cir_alpha(0.5)}, 1.0, 1.0, 0.0, 0.0, 1.0);
    auto res = classify_transformed(t, Side::Lo);
    CHECK(res.via_fallback);
    CHECK(res.cls == TransformedClass::Natural); // inaccessible (entrance under Feller)
    CHECK(res.feller.has_value());
    CHECK(*res.feller == BoundaryClass::Entrance);
}
