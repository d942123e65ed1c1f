#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sheargeo/chart.hpp"
#include "sheargeo/metric.hpp"
#include "sheargeo/stencil.hpp"

namespace sheargeo {

// Fully antisymmetric degree-k form value at a point, stored dense (dim^k,
// row-major). Dense storage beats sparse bookkeeping for dim <= 8.
class Form {
 public:
  Form() = default;
  Form(int dim, int deg);

  int dim() const { return dim_; }
  int deg() const { return deg_; }

  double at(std::span<const int> idx) const { return c_[offset(idx)]; }
  double& at(std::span<const int> idx) { return c_[offset(idx)]; }
  double at(std::initializer_list<int> idx) const {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }
  double& at(std::initializer_list<int> idx) {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }

  const std::vector<double>& data() const { return c_; }
  std::vector<double>& data() { return c_; }

  // Overwrite with the antisymmetrization of the current contents.
  void antisymmetrize();

  double max_abs() const;
  Form& operator+=(const Form& o);
  Form& operator*=(double s);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator*(double s, Form a) { return a *= s; }
  friend Form operator-(Form a, const Form& b) {
    Form nb = b;
    nb *= -1.0;
    return a += nb;
  }

  // Visit every strictly increasing multi-index once.
  void for_each_increasing(
      const std::function<void(std::span<const int>, double)>& fn) const;

  static Form covector(const Vec& v);  // degree-1 form from components

 private:
  std::size_t offset(std::span<const int> idx) const;
  int dim_ = 0, deg_ = 0;
  std::vector<double> c_;
};

struct FormField {
  int dim = 0, deg = 0;
  std::function<Form(const Vec&)> comp;
  Form operator()(const Vec& p) const { return comp(p); }
};

int perm_sign(std::span<const int> idx);  // 0 on repeats

Form wedge(const Form& a, const Form& b);
Form contract(const Vec& v, const Form& w);  // interior product v . w
// Pointwise inner product of k-forms: g(a,b) = (1/k!) a_I b^I.
double form_inner(const Form& a, const Form& b, const Mat& g_inv);

// Exterior derivative of a form field at p (degree k -> k+1).
Form exterior_derivative(const FormField& w, const Vec& p,
                         const DiffScheme& scheme);

// Hodge star of the defining identity  alpha ^ *beta = g(alpha,beta) vol,
// with vol = sqrt|det g| * orientation * e^1^...^e^n in chart coordinate
// order. Throws SingularMetric.
Form hodge_star(const Form& w, const Mat& g, int orientation = +1);
Form volume_form(const Mat& g, int orientation = +1);

// Cartan formula L_X w = d(X . w) + X . dw for a form field along a vector
// field with analytic components.
Form lie_derivative_form(const VectorField& X, const FormField& w, const Vec& p,
                         const DiffScheme& scheme);

}  // namespace sheargeo
