#include <doctest.h>

#include "bvolterra/errors.hpp"
#include "bvolterra/martingale.hpp"
#include "support/generators.hpp"

using namespace bvolterra;

namespace {
OrderProjection P(std::size_t n, std::initializer_list<std::size_t> c) { return OrderProjection::from_coords(n, c); }
ForwardFiltration chain(std::size_t n, std::vector<OrderProjection> prefix) {
  return {BooleanSubalgebra::discrete(n), std::move(prefix)};
}
const ForwardFiltration& xi12() {
  static const ForwardFiltration xi = chain(2, {P(2, {1}), P(2, {1, 2})});
  return xi;
}
std::vector<Scalar> grid_upto(int top) {
  std::vector<Scalar> g;
  for (int i = 0; i <= top; ++i) g.emplace_back(i);
  return g;
}
std::vector<oracle::Vec> raw_prefix(const Martingale& x) {
  std::vector<oracle::Vec> out;
  for (const auto& v : x.prefix()) out.push_back(gen::raw(v));
  return out;
}
}  // namespace

TEST_CASE("martingale law") {
  const std::vector<Vector> good{Vector{5, 0}, Vector{5, 7}};
  CHECK(validate_martingale(xi12(), good).ok);
  const std::vector<Vector> bad{Vector{5, 1}, Vector{5, 7}};
  const auto v = validate_martingale(xi12(), bad);
  CHECK_FALSE(v.ok);
  CHECK(v.n == 1);
  CHECK(v.m == 2);
  CHECK(validate_martingale(chain(2, {P(2, {2})}), std::vector<Vector>{Vector{0, 3}}).ok);
  CHECK_FALSE(validate_martingale(chain(2, {P(2, {2})}), std::vector<Vector>{Vector{1, 3}}).ok);
  CHECK_FALSE(validate_martingale(xi12(), std::vector<Vector>{Vector{5, 0}}).ok);
  CHECK_THROWS_AS(Martingale(xi12(), bad), PreconditionError);
}

TEST_CASE("random martingales agree with the oracle law") {
  gen::Rng rng(3);
  for (int it = 0; it < 200; ++it) {
    const auto b = gen::algebra(rng, gen::uniform(rng, 1, 5), 4);
    const auto xi = gen::filtration(rng, b, gen::uniform(rng, 0, 4));
    std::vector<Vector> prefix;
    for (std::size_t n = 1; n <= xi.length(); ++n) {
      Vector v = gen::vector(rng, b.dim(), -2, 2);
      prefix.push_back(gen::coin(rng, 50) ? xi.level(n).apply(v) : v);
    }
    std::vector<oracle::Vec> raw;
    for (const auto& v : prefix) raw.push_back(gen::raw(v));
    CHECK(validate_martingale(xi, prefix).ok == oracle::martingale_law(gen::level_masks(xi), raw));
  }
}

TEST_CASE("tails, iota and values") {
  const auto x = from_tail(xi12(), Vector{5, 7});
  CHECK(x.prefix()[0] == Vector{5, 0});
  CHECK(x.prefix()[1] == Vector{5, 7});
  CHECK(tail_value(x) == Vector{5, 7});
  CHECK(x.value(9) == Vector{5, 7});
  CHECK_THROWS_AS(x.value(0), PreconditionError);
  CHECK(iota(xi12(), Vector{5, 7}) == x);
  CHECK(iota(xi12(), Vector(2)).is_zero());
  const auto deg = chain(2, {});
  CHECK(iota(deg, Vector{1, 2}).is_zero());
  CHECK(iota(deg, Vector{1, 2}).length() == 0);
  CHECK(tail_value(Martingale::zero(deg)) == Vector(2));
  const auto ones = chain(2, {OrderProjection::one(2)});
  CHECK(iota(ones, Vector{3, -1}).value(4) == Vector{3, -1});
  const auto partial = chain(2, {P(2, {1})});
  CHECK_THROWS_AS(from_tail(partial, Vector{1, 1}), PreconditionError);
  CHECK(iota(partial, Vector{1, 1}).value(1) == Vector{1, 0});
  gen::Rng rng(4);
  for (int it = 0; it < 50; ++it) {
    const auto b = gen::algebra(rng, gen::uniform(rng, 1, 5), 4);
    const auto f = gen::filtration(rng, b, gen::uniform(rng, 1, 4));
    const Vector v = f.stabilized().apply(gen::vector(rng, b.dim(), -3, 3));
    CHECK(tail_value(from_tail(f, v)) == v);
    const auto m = gen::martingale(rng, f);
    CHECK(from_tail(f, tail_value(m)) == m);
  }
}

TEST_CASE("vector space operations") {
  const auto x = from_tail(xi12(), Vector{5, 7});
  const auto y = from_tail(xi12(), Vector{1, -1});
  CHECK(tail_value(x + y) == Vector{6, 6});
  CHECK(tail_value(x - y) == Vector{4, 8});
  CHECK(tail_value(Scalar(1, 2) * x) == Vector{Scalar(5, 2), Scalar(7, 2)});
  CHECK(x.is_nonnegative());
  CHECK_FALSE(y.is_nonnegative());
  CHECK_THROWS_AS(x + Martingale::zero(chain(2, {P(2, {1})})), PreconditionError);
}

TEST_CASE("shift s") {
  const auto x = from_tail(xi12(), Vector{5, 7});
  const auto s = shift_s(x);
  CHECK(s.filtration() == shift_L(xi12()));
  CHECK(s.length() == 1);
  CHECK(s.value(1) == Vector{5, 7});
  const auto c = chain(2, {OrderProjection::one(2), OrderProjection::one(2)});
  const auto k = from_tail(c, Vector{2, 3});
  CHECK(tail_value(shift_s(k)) == Vector{2, 3});
  CHECK(shift_s(k, 5).length() == 1);
  gen::Rng rng(6);
  for (int it = 0; it < 50; ++it) {
    const auto b = gen::algebra(rng, gen::uniform(rng, 1, 5), 4);
    const auto f = gen::filtration(rng, b, gen::uniform(rng, 1, 5));
    const auto m = gen::martingale(rng, f);
    const std::size_t j = gen::uniform(rng, 0, 3);
    CHECK(shift_s(m, j).value(1) == m.value(1 + j));
    CHECK(shift_s(shift_s(m, j)) == shift_s(m, j + 1));
  }
}

TEST_CASE("basis") {
  const auto basis = martingale_basis(chain(3, {P(3, {1}), P(3, {1, 3})}));
  REQUIRE(basis.size() == 2);
  CHECK(basis[0].value(1) == Vector{1, 0, 0});
  CHECK(basis[1].value(1) == Vector(3));
  CHECK(basis[1].value(2) == Vector{0, 0, 1});
  CHECK(martingale_basis(chain(3, {})).empty());
}

TEST_CASE("maps between martingale spaces") {
  const auto x = from_tail(xi12(), Vector{5, 7});
  CHECK(MartingaleMap::identity(xi12())(x) == x);
  const auto s = MartingaleMap::shift(xi12());
  CHECK(s(x) == shift_s(x));
  CHECK_THROWS_AS(s(Martingale::zero(chain(2, {P(2, {1})}))), PreconditionError);
  const auto twice = compose(MartingaleMap::shift(shift_L(xi12())), s);
  CHECK(twice(x) == shift_s(x, 2));
  CHECK_THROWS_AS(compose(s, s), PreconditionError);
}

TEST_CASE("lifting operators") {
  const auto t = PositiveOperator(Matrix{{2, 0}, {3, 1}});
  const auto lifted = lift_T_hat(t, xi12());
  const auto y = lifted.apply(from_tail(xi12(), Vector{5, 7}));
  CHECK(y.prefix()[0] == Vector{10, 0});
  CHECK(y.prefix()[1] == Vector{10, 22});
  const auto half = chain(2, {P(2, {1})});
  const auto pi2 = lift_T_hat(PositiveOperator(Matrix{{Scalar(1, 2), 0}, {0, 0}}), half);
  gen::Rng rng(10);
  for (int it = 0; it < 20; ++it) {
    const auto m = gen::martingale(rng, half);
    CHECK(pi2.apply(m) == Scalar(1, 2) * m);
  }
  CHECK_THROWS_AS(lift_T_hat(PositiveOperator(Matrix{{1, 1}, {0, 1}}), half), PreconditionError);
  for (int it = 0; it < 50; ++it) {
    const auto b = gen::algebra(rng, gen::uniform(rng, 1, 5), 4);
    const auto f = gen::filtration(rng, b, gen::uniform(rng, 0, 4));
    const auto m = gen::martingale(rng, f);
    CHECK(lift_T_hat(PositiveOperator::identity(b.dim()), f).apply(m) == m);
    const auto r = gen::regular_operator(rng, f);
    const auto image = lift_T_hat(r, f).apply(m);
    for (std::size_t n = 1; n <= f.length(); ++n) CHECK(image.value(n) == f.level(n).apply(r.apply(m.value(n))));
    CHECK(apply_power(lift_T_hat(r, f), m, 2) == lift_T_hat(r, f).apply(image));
  }
}

TEST_CASE("coordinatewise operators") {
  const auto half = chain(2, {P(2, {1})});
  const CoordwiseOperator bad(half, half, {Matrix{{1, 1}, {1, 1}}});
  CHECK_FALSE(bad.maps_into_target());
  const CoordwiseOperator doubling(xi12(), xi12(), {2 * Matrix::identity(2)});
  CHECK(doubling.maps_into_target());
  CHECK(doubling.stage(5) == 2 * Matrix::identity(2));
  CHECK(doubling.horizon() == 2);
  CHECK(doubling.as_map()(from_tail(xi12(), Vector{1, 1})) == from_tail(xi12(), Vector{2, 2}));
  CHECK_THROWS_AS(CoordwiseOperator(half, half, {Matrix{{1, 1}, {1, 1}}}).apply(from_tail(half, Vector{1, 0})),
                  PreconditionError);
}

TEST_CASE("regular norm") {
  const Martingale x(xi12(), {Vector{5, 0}, Vector{5, -7}});
  CHECK(regular_norm(x, kNormInf) == NormValue(Scalar(7)));
  CHECK(regular_norm(x, kNorm1) == NormValue(Scalar(12)));
  CHECK(regular_norm(Martingale::zero(xi12()), kNormInf) == NormValue(Scalar(0)));
  const auto grid = grid_upto(7);
  const auto brute = regular_norm_bruteforce(x, kNormInf, grid, Execution::serial);
  REQUIRE(brute.value);
  CHECK(*brute.value == NormValue(Scalar(7)));
  CHECK(brute.candidates == 64 * 64);
  const auto one = regular_norm_bruteforce(x, kNorm1, grid, Execution::serial);
  REQUIRE(one.value);
  CHECK(*one.value == NormValue(Scalar(12)));
  CHECK_FALSE(regular_norm_bruteforce(x, kNormInf, grid_upto(6), Execution::serial).value);
  const std::vector<Scalar> negative{Scalar(-1), Scalar(1)};
  CHECK_THROWS_AS(regular_norm_bruteforce(x, kNormInf, negative), PreconditionError);
  const auto ones = chain(2, {OrderProjection::one(2)});
  for (const Vector& v : {Vector{3, -4}, Vector{1, 1}, Vector{0, 0}}) {
    CHECK(to_double(regular_norm(iota(xi12(), v), kNormInf)) <= to_double(norm(v, kNormInf)));
    CHECK(regular_norm(iota(ones, v), kNorm1) == norm(v, kNorm1));
  }
}

TEST_CASE("brute-force norm agrees with the recursive oracle") {
  gen::Rng rng(77);
  const auto grid = grid_upto(3);
  std::vector<oracle::Q> raw_grid(grid.begin(), grid.end());
  for (int it = 0; it < 40; ++it) {
    const auto b = gen::algebra(rng, gen::uniform(rng, 1, 3), 3);
    const auto f = gen::filtration(rng, b, gen::uniform(rng, 1, 2));
    const auto m = gen::martingale(rng, f, -2, 2);
    for (const NormTag tag : {kNormInf, kNorm1}) {
      const auto brute = regular_norm_bruteforce(m, tag, grid, Execution::serial);
      const auto ref = oracle::regular_norm_search(gen::level_masks(f), raw_prefix(m), raw_grid, tag == kNorm1);
      REQUIRE(brute.value.has_value() == ref.has_value());
      if (ref) CHECK(*brute.value == NormValue(*ref));
      const auto par = regular_norm_bruteforce(m, tag, grid, Execution::parallel);
      CHECK(par.value == brute.value);
      CHECK(par.admissible == brute.admissible);
      CHECK(par.candidates == brute.candidates);
    }
  }
}

TEST_CASE("backward filtrations and the dual space") {
  const auto eta = dual(xi12());
  const std::vector<Vector> good{Vector{5, 0}, Vector{5, 7}};
  CHECK(validate_backward_m1(eta, good).ok);
  CHECK_FALSE(validate_backward_m1(eta, std::vector<Vector>{Vector{5, 1}, Vector{5, 7}}).ok);
  const BackwardFiltration full(BooleanSubalgebra::discrete(2), {OrderProjection::one(2), OrderProjection::one(2)});
  CHECK(validate_backward_m1(full, std::vector<Vector>{Vector(2), Vector(2)}).ok);
  CHECK_FALSE(validate_backward_m1(full, std::vector<Vector>{Vector(2), Vector{1, 0}}).ok);
  gen::Rng rng(12);
  for (int it = 0; it < 50; ++it) {
    const auto b = gen::algebra(rng, gen::uniform(rng, 1, 5), 4);
    const auto f = gen::filtration(rng, b, gen::uniform(rng, 0, 4));
    const auto m = gen::martingale(rng, f);
    CHECK(validate_backward_m1(dual(f), m.prefix()).ok);
  }
}

TEST_CASE("commuting squares") {
  const auto t = PositiveOperator(Matrix{{2, 0}, {3, 1}});
  const auto v = check_square(t, xi12(), 3, Execution::serial);
  CHECK(v.holds);
  CHECK(v.checked > 0);
  const auto x = from_tail(xi12(), Vector{5, 7});
  CHECK(shift_s(lift_T_hat(t, xi12()).apply(x)).prefix()[0] == Vector{10, 22});
  CHECK(lift_T_hat(t, shift_L(xi12())).apply(shift_s(x)).prefix()[0] == Vector{10, 22});
  CHECK(check_square(PositiveOperator::identity(3), chain(3, {P(3, {2}), P(3, {2, 3})}), 4).holds);
  CHECK(check_square(PositiveOperator(Matrix{{1, 1}, {1, 1}}), chain(2, {}), 3).holds);
  CHECK_THROWS_AS(check_square(PositiveOperator(Matrix{{1, 1}, {0, 1}}), xi12(), 2), PreconditionError);
  gen::Rng rng(13);
  for (int it = 0; it < 30; ++it) {
    const auto b = gen::algebra(rng, gen::uniform(rng, 1, 5), 4);
    const auto f = gen::filtration(rng, b, gen::uniform(rng, 0, 4));
    const auto r = gen::regular_operator(rng, f);
    const auto serial = check_square(r, f, 4, Execution::serial);
    const auto parallel = check_square(r, f, 4, Execution::parallel);
    CHECK(serial.holds);
    CHECK(parallel.holds == serial.holds);
    CHECK(parallel.checked == serial.checked);
  }
}

TEST_CASE("bang operator") {
  const auto t = PositiveOperator(Matrix{{2, 0}, {3, 1}});
  const auto x = from_tail(xi12(), Vector{5, 7});
  const auto tuple = MartTuple::diagonal(x, 2);
  CHECK(tuple.kmax() == 2);
  const auto image = bang_operator(t, xi12(), 1, tuple);
  const auto tx = lift_T_hat(t, xi12()).apply(x);
  CHECK(image.entries()[0] == tx);
  CHECK(image.entries()[1] == shift_s(tx));
  CHECK(image.entries()[2] == shift_s(tx, 2));
  CHECK(bang_operator(t, xi12(), 2, tuple).entries()[0] == lift_T_hat(t, xi12()).apply(tx));
  CHECK(MartTuple::diagonal(x).kmax() == MartTuple::kDefaultKmax);
  CHECK_THROWS_AS(MartTuple(xi12(), {x, x}), PreconditionError);
  CHECK_THROWS_AS(bang_operator(t, shift_L(xi12()), 1, tuple), PreconditionError);
}
