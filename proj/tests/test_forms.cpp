#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "sheargeo/forms.hpp"
#include "sheargeo/rng.hpp"

using namespace sheargeo;

namespace {

Form random_form(SplitMix64& rng, int dim, int deg) {
  Form f(dim, deg);
  for (double& v : f.data()) v = rng.uniform(-1.0, 1.0);
  f.antisymmetrize();
  return f;
}

// form field with polynomial coefficients c0 + c1 x_a + c2 x_b x_c
FormField polynomial_field(int dim, int deg, SplitMix64& rng) {
  struct Gen {
    double c0, c1, c2;
    int a, b, c;
  };
  auto dims = static_cast<std::size_t>(1);
  for (int i = 0; i < deg; ++i) dims *= dim;
  auto gens = std::make_shared<std::vector<Gen>>();
  for (std::size_t i = 0; i < dims; ++i)
    gens->push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                     static_cast<int>(rng.next() % dim),
                     static_cast<int>(rng.next() % dim),
                     static_cast<int>(rng.next() % dim)});
  return FormField{dim, deg, [dim, deg, gens](const Vec& x) {
                     Form f(dim, deg);
                     for (std::size_t i = 0; i < f.data().size(); ++i) {
                       const auto& g = (*gens)[i];
                       f.data()[i] = g.c0 + g.c1 * x[g.a] + g.c2 * x[g.b] * x[g.c];
                     }
                     f.antisymmetrize();
                     return f;
                   }};
}

}  // namespace

TEST_CASE("antisymmetrize enforces the storage invariant") {
  Form f(3, 2);
  f.at({0, 1}) = 2.0;  // deliberately not antisymmetric
  f.at({1, 0}) = 0.0;
  f.antisymmetrize();
  CHECK(f.at({0, 1}) == doctest::Approx(1.0));
  CHECK(f.at({1, 0}) == doctest::Approx(-1.0));
  CHECK(f.at({0, 0}) == 0.0);
}

TEST_CASE("wedge of covectors") {
  Vec a(3), b(3);
  a << 1, 0, 0;
  b << 0, 2, 0;
  const Form w = wedge(Form::covector(a), Form::covector(b));
  CHECK(w.at({0, 1}) == doctest::Approx(2.0));
  CHECK(w.at({1, 0}) == doctest::Approx(-2.0));
  // x ^ x = 0
  CHECK(wedge(Form::covector(a), Form::covector(a)).max_abs() == 0.0);
}

TEST_CASE("exterior derivative of a constant form vanishes") {
  FormField w{4, 1, [](const Vec&) {
                Vec c(4);
                c << 1, -2, 3, 0.5;
                return Form::covector(c);
              }};
  Vec p = Vec::Zero(4);
  CHECK(exterior_derivative(w, p, DiffScheme::central()).max_abs() < 1e-12);
}

TEST_CASE("d(theta) on the contact form of the round sphere chart") {
  // theta = du + (1/lambda0) cos(psi) dphi on (u, psi, phi)
  const double lambda0 = 1.0;
  FormField theta{3, 1, [lambda0](const Vec& x) {
                    Vec c(3);
                    c << 1.0, 0.0, std::cos(x[1]) / lambda0;
                    return Form::covector(c);
                  }};
  Vec p(3);
  p << 0.3, 1.1, 0.4;
  const Form dth = exterior_derivative(theta, p, DiffScheme::central());
  CHECK(dth.at({1, 2}) ==
        doctest::Approx(-std::sin(1.1) / lambda0).epsilon(1e-9));
  CHECK(std::abs(dth.at({0, 1})) < 1e-10);
  CHECK(std::abs(dth.at({0, 2})) < 1e-10);
}

TEST_CASE("d o d = 0 on random polynomial form fields") {
  SplitMix64 rng(23);
  for (int dim : {3, 4}) {
    for (int deg : {0, 1, 2}) {
      FormField w = polynomial_field(dim, deg, rng);
      FormField dw{dim, deg + 1, [&w](const Vec& x) {
                     return exterior_derivative(w, x, DiffScheme::central());
                   }};
      Vec p(dim);
      for (int k = 0; k < dim; ++k) p[k] = rng.uniform(-0.5, 0.5);
      CHECK(exterior_derivative(dw, p, DiffScheme::central()).max_abs() < 1e-6);
    }
  }
}

TEST_CASE("hodge star in the euclidean plane: *dx = dy, *1 = vol") {
  const Mat g = Mat::Identity(2, 2);
  Vec dx(2);
  dx << 1, 0;
  const Form s = hodge_star(Form::covector(dx), g);
  CHECK(s.at({0}) == doctest::Approx(0.0));
  CHECK(s.at({1}) == doctest::Approx(1.0));
  Form one(2, 0);
  one.data()[0] = 1.0;
  const Form v = hodge_star(one, g);
  CHECK(v.at({0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("hodge star agrees with the defining-identity linear system") {
  Mat mink = Mat::Zero(4, 4);
  mink.diagonal() << -1, 1, 1, 1;
  Form dxdy(4, 2);
  dxdy.at({1, 2}) = 1.0;
  dxdy.at({2, 1}) = -1.0;
  const Form s = hodge_star(dxdy, mink);
  // *(dx^dy) = dt^dz in this signature and orientation
  CHECK(s.at({0, 3}) == doctest::Approx(1.0));
  CHECK(s.at({0, 1}) == doctest::Approx(0.0));
  const Form so = oracle::hodge_star_linear_system(dxdy, mink);
  CHECK((s - so).max_abs() < 1e-12);

  SplitMix64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    Mat A(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) A(i, j) = rng.uniform(-0.2, 0.2);
    const Mat g = mink + A + A.transpose();
    for (int k : {1, 2, 3}) {
      const Form w = random_form(rng, 4, k);
      CHECK((hodge_star(w, g) - oracle::hodge_star_linear_system(w, g))
                .max_abs() < 1e-10);
    }
  }
}

TEST_CASE("double hodge star identity, all degrees, random metrics") {
  SplitMix64 rng(17);
  int checked = 0;
  for (int trial = 0; trial < 250; ++trial) {
    Mat A(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) A(i, j) = rng.uniform(-0.2, 0.2);
    Mat g = Mat::Zero(4, 4);
    g.diagonal() << (trial % 2 ? -1 : 1), 1, 1, 1;  // both signatures
    g += A + A.transpose();
    if (std::abs(g.determinant()) < 1e-6) continue;
    const double sg = g.determinant() > 0 ? 1.0 : -1.0;
    const int orient = (trial % 3 == 0) ? -1 : +1;
    for (int k = 0; k <= 4; ++k) {
      const Form w = random_form(rng, 4, k);
      const Form ss = hodge_star(hodge_star(w, g, orient), g, orient);
      const double expected_sign = ((k * (4 - k)) % 2 ? -1.0 : 1.0) * sg;
      Form target = w;
      target *= expected_sign;
      CHECK((ss - target).max_abs() < 1e-12 * std::max(1.0, w.max_abs() * 64));
      ++checked;
    }
  }
  CHECK(checked >= 1000);
}

TEST_CASE("contraction and inner product") {
  SplitMix64 rng(29);
  const Form w = random_form(rng, 4, 2);
  Vec v(4), u(4);
  for (int i = 0; i < 4; ++i) {
    v[i] = rng.uniform(-1, 1);
    u[i] = rng.uniform(-1, 1);
  }
  // (v . w)(u) = w(v, u)
  const Form cv = contract(v, w);
  double direct = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) direct += v[i] * u[j] * w.at({i, j});
  double via = 0.0;
  for (int j = 0; j < 4; ++j) via += cv.at({j}) * u[j];
  CHECK(via == doctest::Approx(direct).epsilon(1e-12));
  // g(w, w) >= 0 for a riemannian metric
  CHECK(form_inner(w, w, Mat::Identity(4, 4)) >= 0.0);
}

TEST_CASE("cartan formula lie derivative on a t-independent field") {
  FormField w{3, 1, [](const Vec& x) {
                Vec c(3);
                c << 0.0, x[2], x[1] * x[1];
                return Form::covector(c);
              }};
  VectorField X = fixtures::coordinate_field(3, 0);
  Vec p(3);
  p << 0.4, 0.2, -0.7;
  CHECK(lie_derivative_form(X, w, p, DiffScheme::central()).max_abs() < 1e-10);
}
