#include <doctest.h>

#include "bvolterra/errors.hpp"
#include "bvolterra/limits.hpp"
#include "support/generators.hpp"

using namespace bvolterra;

namespace {
OrderProjection P(std::size_t n, std::initializer_list<std::size_t> c) { return OrderProjection::from_coords(n, c); }
ForwardFiltration chain(std::size_t n, std::vector<OrderProjection> prefix) {
  return {BooleanSubalgebra::discrete(n), std::move(prefix)};
}
SectionalMap swap2() {
  return SectionalMap::from_function(BooleanSubalgebra::discrete(2), [](const OrderProjection& p) {
    const std::uint64_t m = p.mask();
    return OrderProjection(2, ((m & 1u) << 1) | ((m >> 1) & 1u));
  });
}
}  // namespace

TEST_CASE("germ equality in the endo system") {
  const auto one = chain(2, {OrderProjection::one(2)});
  const auto nil = DirectedSystem::endo(PositiveOperator(Matrix{{0, 0}, {1, 0}}), one);
  const Germ a{0, from_tail(one, Vector{1, 0})};
  const Germ b{0, from_tail(one, Vector{1, 5})};
  const auto eq = germ_equal(nil, a, b);
  CHECK(eq.equal);
  CHECK(eq.stage == 1);
  CHECK(germ_equal(nil, a, a).stage == 0);
  const auto twice = DirectedSystem::endo(PositiveOperator(2 * Matrix::identity(2)), one, 16);
  CHECK_FALSE(germ_equal(twice, a, b).equal);
  CHECK_THROWS_AS(germ_equal(twice, Germ{17, a.rep}, b), PreconditionError);
  const Germ late{3, from_tail(one, Vector{8, 0})};
  CHECK(germ_equal(twice, a, late).stage == 3);
}

TEST_CASE("germ equality in the shift system") {
  const auto xi = chain(3, {P(3, {1}), P(3, {1, 2}), OrderProjection::one(3)});
  const auto sys = DirectedSystem::shift(xi, 8);
  CHECK(sys.space(1) == shift_L(xi));
  const Germ a{0, from_tail(xi, Vector{1, 2, 3})};
  const Germ b{2, from_tail(shift_L(xi, 2), Vector{1, 2, 3})};
  CHECK(germ_equal(sys, a, b).equal);
  CHECK(germ_equal(sys, a, b).stage == 2);
  const Germ c{0, from_tail(xi, Vector{1, 2, 4})};
  CHECK_FALSE(germ_equal(sys, a, c).equal);
  CHECK_THROWS_AS(sys.forward(a.rep, 1, 2), PreconditionError);
}

TEST_CASE("germ equality is an equivalence on samples") {
  gen::Rng rng(41);
  const auto one = chain(2, {OrderProjection::one(2)});
  const auto sys = DirectedSystem::endo(PositiveOperator(Matrix{{0, 0}, {1, 0}}), one, 8);
  for (int it = 0; it < 50; ++it) {
    std::vector<Germ> g;
    for (int i = 0; i < 3; ++i) g.push_back({gen::uniform(rng, 0, 2), from_tail(one, gen::vector(rng, 2, -1, 1))});
    CHECK(germ_equal(sys, g[0], g[0]).equal);
    CHECK(germ_equal(sys, g[0], g[1]).equal == germ_equal(sys, g[1], g[0]).equal);
    if (germ_equal(sys, g[0], g[1]) && germ_equal(sys, g[1], g[2])) CHECK(germ_equal(sys, g[0], g[2]).equal);
  }
}

TEST_CASE("induced shift on germs") {
  const auto xi = chain(2, {P(2, {1}), P(2, {1, 2})});
  const auto t = PositiveOperator(Matrix{{2, 0}, {3, 1}});
  const Germ g{0, from_tail(xi, Vector{5, 7})};
  const auto image = colimit_shift_map(t, xi, 1, g);
  CHECK(image.stage == 0);
  CHECK(image.rep == from_tail(shift_L(xi), Vector{5, 7}));
  CHECK(colimit_shift_map(t, xi, 1, Germ{2, Martingale::zero(xi)}).rep.is_zero());
  CHECK_THROWS_AS(colimit_shift_map(t, xi, 0, g), PreconditionError);
  CHECK_THROWS_AS(colimit_shift_map(t, xi, 2, g), PreconditionError);

  const auto one = chain(2, {OrderProjection::one(2)});
  const auto nil = PositiveOperator(Matrix{{0, 0}, {1, 0}});
  const Germ a{0, from_tail(one, Vector{1, 0})};
  const Germ b{0, from_tail(one, Vector{1, 5})};
  const auto sys = DirectedSystem::endo(nil, shift_L(one));
  CHECK(germ_equal(sys, colimit_shift_map(nil, one, 1, a), colimit_shift_map(nil, one, 1, b)).equal);
}

TEST_CASE("induced T on the shift colimit") {
  const auto xi = chain(2, {P(2, {1}), P(2, {1, 2})});
  const auto t = PositiveOperator(Matrix{{2, 0}, {3, 1}});
  const Vector v{5, 7};
  const Germ g{0, iota(xi, v)};
  CHECK(colimit_T_map(t, xi, g).rep == iota(xi, t.apply(v)));
  CHECK(colimit_T_map(PositiveOperator::identity(2), xi, g).rep == g.rep);
  CHECK(colimit_T_map(t, xi, Germ{1, Martingale::zero(shift_L(xi))}).rep.is_zero());
  CHECK_THROWS_AS(colimit_T_map(t, xi, Germ{1, g.rep}), PreconditionError);
  gen::Rng rng(42);
  for (int it = 0; it < 40; ++it) {
    const auto b = gen::algebra(rng, gen::uniform(rng, 1, 4), 4);
    const auto f = gen::filtration(rng, b, gen::uniform(rng, 1, 4));
    const auto r = gen::regular_operator(rng, f);
    const auto sys = DirectedSystem::shift(f, 8);
    const auto x = gen::martingale(rng, f);
    const Germ g0{0, x};
    const Germ g1{1, shift_s(x)};
    REQUIRE(germ_equal(sys, g0, g1).equal);
    const auto i0 = colimit_T_map(r, f, g0);
    const auto i1 = colimit_T_map(r, f, g1);
    CHECK(germ_equal(sys, i0, i1).equal);
  }
}

TEST_CASE("coercion and the induced sectional map") {
  const auto b = BooleanSubalgebra::discrete(2);
  const ForwardFiltration xi(b, {P(2, {1})});
  const ForwardFiltration big(b, {OrderProjection::one(2)});
  CHECK(coerce_martingale(Martingale(big, {Vector{4, 0}}), xi).value(1) == Vector{4, 0});
  CHECK_THROWS_AS(coerce_martingale(Martingale(big, {Vector{4, 1}}), xi), PreconditionError);

  const auto x = from_tail(xi, Vector{3, 0});
  CHECK(induced_S_hat(SectionalMap::identity(b), xi, 0, x) == x);
  CHECK(induced_S_hat(SectionalMap::identity(b), xi, 2, x) == x);
  CHECK_THROWS_AS(induced_S_hat(swap2(), xi, 0, from_tail(ForwardFiltration(b, {P(2, {2})}), Vector{0, 1})),
                  PreconditionError);
  const auto join2 = SectionalMap::from_function(b, [](const OrderProjection& p) { return join(p, P(2, {2})); });
  CHECK(is_inflationary(join2));
  CHECK_THROWS_AS(induced_S_hat(join2, xi, 0, x), PreconditionError);
  try {
    induced_S_hat(swap2(), xi, 0, x);
    FAIL("swap accepted");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("inflationary") != std::string::npos);
  }
}

TEST_CASE("germ norms") {
  const auto one = chain(2, {OrderProjection::one(2)});
  const auto nil = DirectedSystem::endo(PositiveOperator(Matrix{{0, 0}, {1, 0}}), one, 8);
  CHECK(germ_norm(nil, Germ{0, from_tail(one, Vector{1, 5})}, kNormInf) == NormValue(Scalar(0)));
  const auto id = DirectedSystem::endo(PositiveOperator::identity(2), one, 8);
  CHECK(germ_norm(id, Germ{0, from_tail(one, Vector{1, -5})}, kNormInf) == NormValue(Scalar(5)));
  const auto grow = DirectedSystem::endo(PositiveOperator(2 * Matrix::identity(2)), one, 8);
  CHECK_FALSE(germ_norm(grow, Germ{0, from_tail(one, Vector{1, 0})}, kNormInf).has_value());
  const auto xi = chain(2, {P(2, {1}), OrderProjection::one(2)});
  const auto sh = DirectedSystem::shift(xi, 8);
  CHECK(germ_norm(sh, Germ{0, from_tail(xi, Vector{1, -3})}, kNorm1) == NormValue(Scalar(4)));
}
