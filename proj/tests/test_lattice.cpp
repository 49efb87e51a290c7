#include <doctest.h>

#include <cmath>

#include "bvolterra/errors.hpp"
#include "bvolterra/lattice.hpp"
#include "bvolterra/matrix.hpp"
#include "support/generators.hpp"

using namespace bvolterra;

TEST_CASE("scalar parsing") {
  CHECK(parse_scalar("3/6") == Scalar(1, 2));
  CHECK(parse_scalar("-4") == Scalar(-4));
  CHECK(parse_scalar("+2/3") == Scalar(2, 3));
  CHECK(to_string(parse_scalar("10/4")) == "5/2");
  CHECK(to_string(parse_scalar("-0")) == "0");
  CHECK_THROWS_AS(parse_scalar("1/0"), ParseError);
  CHECK_THROWS_AS(parse_scalar("1.5"), ParseError);
  CHECK_THROWS_AS(parse_scalar(""), ParseError);
  CHECK_THROWS_AS(parse_scalar("2/"), ParseError);
}

TEST_CASE("lattice operations") {
  CHECK(sup(Vector{1, -2}, Vector{0, 5}) == Vector{1, 5});
  CHECK(abs(Vector{0, -3}) == Vector{0, 3});
  const Vector y{0, 5};
  CHECK(lattice_eval(LatticeOp::inf, Vector{1, -2}, &y) == Vector{0, -2});
  CHECK(pos_part(Vector{2, -3}) == Vector{2, 0});
  CHECK(neg_part(Vector{2, -3}) == Vector{0, 3});
  CHECK_THROWS_AS(sup(Vector{1}, Vector{1, 2}), DimensionMismatch);
  CHECK_THROWS_AS(lattice_eval(LatticeOp::sup, Vector{1}), PreconditionError);
}

TEST_CASE("disjointness") {
  CHECK(disjoint(Vector{1, 0}, Vector{0, -2}));
  CHECK_FALSE(disjoint(Vector{1, 1}, Vector{0, 1}));
  CHECK(disjoint(Vector{4, -1}, Vector{0, 0}));
}

TEST_CASE("norms") {
  CHECK(std::get<Scalar>(norm(Vector{3, -4}, kNorm1)) == 7);
  CHECK(std::abs(std::get<double>(norm(Vector{3, -4}, kNorm2)) - 5.0) < 1e-9);
  CHECK(std::get<Scalar>(norm(Vector(3), kNormInf)) == 0);
  CHECK_THROWS_AS(exact_norm(Vector{1}, kNorm2), Unsupported);
  CHECK(parse_norm_kind("infinity") == NormKind::inf);
  CHECK_FALSE(parse_norm_kind("3").has_value());
}

TEST_CASE("lattice invariants on random pairs") {
  gen::Rng rng(11);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = gen::uniform(rng, 1, 6);
    const Vector x = gen::vector(rng, n, -5, 5);
    const Vector y = gen::vector(rng, n, -5, 5);
    CHECK(sup(x, y) + inf(x, y) == x + y);
    CHECK(inf(x, x) == x);
    CHECK(abs(x) == pos_part(x) + neg_part(x));
    CHECK(disjoint(pos_part(x), neg_part(x)));
    for (NormTag tag : {kNorm1, kNormInf}) {
      CHECK((exact_norm(x, tag) == 0) == x.is_zero());
      CHECK(exact_norm(x + y, tag) <= exact_norm(x, tag) + exact_norm(y, tag));
    }
    const double a = std::get<double>(norm(x + y, kNorm2));
    const double b = std::get<double>(norm(x, kNorm2)) + std::get<double>(norm(y, kNorm2));
    CHECK(a <= b * (1 + kNorm2Tolerance));
  }
}

TEST_CASE("matrix basics") {
  const Matrix t{{2, 0}, {3, 1}};
  CHECK(t.apply(Vector{5, 7}) == Vector{10, 22});
  CHECK(t.pow(0) == Matrix::identity(2));
  CHECK(t.pow(2) == t * t);
  CHECK(t.transpose() == Matrix{{2, 3}, {0, 1}});
  CHECK(entrywise_leq(Matrix::zero(2), t));
  CHECK(Matrix::diagonal(Vector{1, 2}).is_diagonal());
}
