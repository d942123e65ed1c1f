#include "sheargeo/forms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sheargeo/errors.hpp"
#include "sheargeo/linalg.hpp"

namespace sheargeo {

Form::Form(int dim, int deg) : dim_(dim), deg_(deg) {
  std::size_t n = 1;
  for (int i = 0; i < deg; ++i) n *= static_cast<std::size_t>(dim);
  c_.assign(std::max<std::size_t>(n, 1), 0.0);
}

std::size_t Form::offset(std::span<const int> idx) const {
  std::size_t o = 0;
  for (int i = 0; i < deg_; ++i) o = o * dim_ + static_cast<std::size_t>(idx[i]);
  return o;
}

int perm_sign(std::span<const int> idx) {
  int s = 1;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) s = -s;
    }
  return s;
}

namespace {

// iterate strictly increasing deg-tuples in 0..dim-1
bool next_increasing(std::vector<int>& idx, int dim) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < dim - (k - i)) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<int> first_increasing(int k) {
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

}  // namespace

void Form::for_each_increasing(
    const std::function<void(std::span<const int>, double)>& fn) const {
  if (deg_ == 0) {
    fn({}, c_[0]);
    return;
  }
  if (deg_ > dim_) return;
  std::vector<int> idx = first_increasing(deg_);
  do {
    fn(idx, at(std::span<const int>(idx)));
  } while (next_increasing(idx, dim_));
}

void Form::antisymmetrize() {
  if (deg_ <= 1) return;
  Form out(dim_, deg_);
  std::vector<int> idx = first_increasing(deg_);
  if (deg_ > dim_) {
    c_.assign(c_.size(), 0.0);
    return;
  }
  std::vector<int> perm(deg_), tuple(deg_);
  do {
    // average over the symmetric group with signs
    std::iota(perm.begin(), perm.end(), 0);
    double v = 0.0;
    int count = 0;
    do {
      for (int i = 0; i < deg_; ++i) tuple[i] = idx[perm[i]];
      v += perm_sign(std::span<const int>(perm.data(), perm.size())) *
           at(std::span<const int>(tuple));
      ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    v /= count;
    // write the full orbit
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (int i = 0; i < deg_; ++i) tuple[i] = idx[perm[i]];
      out.at(std::span<const int>(tuple)) =
          perm_sign(std::span<const int>(perm.data(), perm.size())) * v;
    } while (std::next_permutation(perm.begin(), perm.end()));
  } while (next_increasing(idx, dim_));
  c_ = std::move(out.c_);
}

double Form::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

Form& Form::operator+=(const Form& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Form& Form::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Form Form::covector(const Vec& v) {
  Form f(static_cast<int>(v.size()), 1);
  for (int i = 0; i < v.size(); ++i) f.data()[i] = v[i];
  return f;
}

Form wedge(const Form& a, const Form& b) {
  const int dim = a.dim() ? a.dim() : b.dim();
  const int ka = a.deg(), kb = b.deg();
  Form out(dim, ka + kb);
  if (ka + kb > dim) return out;
  if (ka == 0) {
    out = b;
    out *= a.data()[0];
    return out;
  }
  if (kb == 0) {
    out = a;
    out *= b.data()[0];
    return out;
  }
  // (a^b)_I = sum over k-subsets S of positions: sign * a_{I_S} b_{I_Sc}
  std::vector<int> idx = first_increasing(ka + kb);
  std::vector<int> sel(ka + kb), ia(ka), ib(kb), order(ka + kb);
  do {
    double v = 0.0;
    std::fill(sel.begin(), sel.end(), 0);
    std::fill(sel.begin(), sel.begin() + ka, 1);
    std::sort(sel.begin(), sel.end(), std::greater<int>());
    do {
      int na = 0, nb = 0, pos = 0;
      for (int i = 0; i < ka + kb; ++i) {
        if (sel[i]) {
          ia[na++] = idx[i];
          order[pos++] = i;
        }
      }
      for (int i = 0; i < ka + kb; ++i)
        if (!sel[i]) {
          ib[nb++] = idx[i];
          order[pos++] = i;
        }
      const int s = perm_sign(std::span<const int>(order.data(), order.size()));
      v += s * a.at(std::span<const int>(ia)) * b.at(std::span<const int>(ib));
    } while (std::prev_permutation(sel.begin(), sel.end()));
    // fill the orbit of idx
    std::vector<int> perm(ka + kb), tuple(ka + kb);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (int i = 0; i < ka + kb; ++i) tuple[i] = idx[perm[i]];
      out.at(std::span<const int>(tuple)) =
          perm_sign(std::span<const int>(perm.data(), perm.size())) * v;
    } while (std::next_permutation(perm.begin(), perm.end()));
  } while (next_increasing(idx, dim));
  return out;
}

Form contract(const Vec& v, const Form& w) {
  const int dim = w.dim(), k = w.deg();
  if (k == 0) return Form(dim, 0);
  Form out(dim, k - 1);
  if (k == 1) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += v[i] * w.data()[i];
    out.data()[0] = s;
    return out;
  }
  std::vector<int> idx(k);
  std::vector<int> rest = first_increasing(k - 1);
  // (v . w)_{j1..j_{k-1}} = v^a w_{a j1..j_{k-1}} for all index tuples
  std::size_t stride = out.data().size();
  for (std::size_t o = 0; o < stride; ++o) {
    std::size_t rem = o;
    for (int i = k - 2; i >= 0; --i) {
      idx[i + 1] = static_cast<int>(rem % dim);
      rem /= dim;
    }
    double s = 0.0;
    for (int a = 0; a < dim; ++a) {
      if (v[a] == 0.0) continue;
      idx[0] = a;
      s += v[a] * w.at(std::span<const int>(idx));
    }
    out.data()[o] = s;
  }
  return out;
}

double form_inner(const Form& a, const Form& b, const Mat& g_inv) {
  const int dim = a.dim(), k = a.deg();
  if (k == 0) return a.data()[0] * b.data()[0];
  // raise b then contract over increasing indices of a (full antisymmetry)
  double total = 0.0;
  std::vector<int> up(k);
  a.for_each_increasing([&](std::span<const int> I, double av) {
    if (av == 0.0 && k > 0) {
      // still need b^I; skip only if a-component vanishes
      return;
    }
    double bv = 0.0;
    // b^I = g^{i1 j1}...g^{ik jk} b_{j1..jk}, summed over all J
    std::vector<int> J(k);
    std::size_t tot = 1;
    for (int i = 0; i < k; ++i) tot *= dim;
    for (std::size_t o = 0; o < tot; ++o) {
      std::size_t rem = o;
      for (int i = k - 1; i >= 0; --i) {
        J[i] = static_cast<int>(rem % dim);
        rem /= dim;
      }
      double w = b.at(std::span<const int>(J));
      if (w == 0.0) continue;
      double coef = 1.0;
      for (int i = 0; i < k; ++i) coef *= g_inv(I[i], J[i]);
      bv += coef * w;
    }
    total += av * bv;
  });
  return total;
}

Form exterior_derivative(const FormField& w, const Vec& p,
                         const DiffScheme& scheme) {
  const int dim = w.dim, k = w.deg;
  Form out(dim, k + 1);
  if (k + 1 > dim) return out;
  // partials of the component arrays
  std::vector<Form> dw(dim);
  for (int m = 0; m < dim; ++m) {
    Vec q1 = p, q2 = p, q3 = p, q4 = p;
    q1[m] -= 2 * scheme.h1;
    q2[m] -= scheme.h1;
    q3[m] += scheme.h1;
    q4[m] += 2 * scheme.h1;
    const Form f1 = w.comp(q1), f2 = w.comp(q2), f3 = w.comp(q3),
               f4 = w.comp(q4);
    dw[m] = Form(dim, k);
    for (std::size_t i = 0; i < dw[m].data().size(); ++i)
      dw[m].data()[i] = (f1.data()[i] - 8.0 * f2.data()[i] +
                         8.0 * f3.data()[i] - f4.data()[i]) /
                        (12.0 * scheme.h1);
  }
  std::vector<int> idx = first_increasing(k + 1);
  std::vector<int> rest(k), perm(k + 1), tuple(k + 1);
  do {
    double v = 0.0;
    for (int j = 0; j <= k; ++j) {
      int pos = 0;
      for (int i = 0; i <= k; ++i)
        if (i != j) rest[pos++] = idx[i];
      const double term = dw[idx[j]].at(std::span<const int>(rest));
      v += (j % 2 == 0 ? term : -term);
    }
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (int i = 0; i <= k; ++i) tuple[i] = idx[perm[i]];
      out.at(std::span<const int>(tuple)) =
          perm_sign(std::span<const int>(perm.data(), perm.size())) * v;
    } while (std::next_permutation(perm.begin(), perm.end()));
  } while (next_increasing(idx, dim));
  return out;
}

Form volume_form(const Mat& g, int orientation) {
  const int dim = static_cast<int>(g.rows());
  const double det = g.determinant();
  if (std::abs(det) <= 1e-12) throw SingularMetric("volume form");
  Form out(dim, dim);
  const double s = std::sqrt(std::abs(det)) * orientation;
  std::vector<int> perm(dim), tuple(dim);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    out.at(std::span<const int>(perm)) =
        perm_sign(std::span<const int>(perm.data(), perm.size())) * s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  (void)tuple;
  return out;
}

Form hodge_star(const Form& w, const Mat& g, int orientation) {
  const int dim = static_cast<int>(g.rows());
  const int k = w.deg();
  const double det = g.determinant();
  if (std::abs(det) <= 1e-12) throw SingularMetric("hodge star");
  const Mat ginv = invert_metric(g);
  const double sq = std::sqrt(std::abs(det)) * orientation;
  Form out(dim, dim - k);

  if (k == 0) {
    out = volume_form(g, orientation);
    out *= w.data()[0];
    return out;
  }

  // raise all indices of w once
  Form up(dim, k);
  w.for_each_increasing([&](std::span<const int> I, double) {
    std::vector<int> J(k);
    std::size_t tot = 1;
    for (int i = 0; i < k; ++i) tot *= dim;
    double v = 0.0;
    for (std::size_t o = 0; o < tot; ++o) {
      std::size_t rem = o;
      for (int i = k - 1; i >= 0; --i) {
        J[i] = static_cast<int>(rem % dim);
        rem /= dim;
      }
      double ww = w.at(std::span<const int>(J));
      if (ww == 0.0) continue;
      double coef = 1.0;
      for (int i = 0; i < k; ++i) coef *= ginv(I[i], J[i]);
      v += coef * ww;
    }
    std::vector<int> perm(k), tuple(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (int i = 0; i < k; ++i) tuple[i] = I[perm[i]];
      up.at(std::span<const int>(tuple)) =
          perm_sign(std::span<const int>(perm.data(), perm.size())) * v;
    } while (std::next_permutation(perm.begin(), perm.end()));
  });

  // (*w)_J = sum over increasing I of up_I eps_{I J} sq
  if (dim - k == 0) {
    double v = 0.0;
    std::vector<int> full(dim);
    std::iota(full.begin(), full.end(), 0);
    v = up.at(std::span<const int>(full)) * sq;
    out.data()[0] = v;
    return out;
  }
  std::vector<int> J = first_increasing(dim - k);
  std::vector<int> eps(dim), perm(dim - k), tuple(dim - k);
  do {
    double v = 0.0;
    std::vector<int> I = first_increasing(k);
    do {
      int pos = 0;
      for (int i = 0; i < k; ++i) eps[pos++] = I[i];
      for (int j = 0; j < dim - k; ++j) eps[pos++] = J[j];
      const int s = perm_sign(std::span<const int>(eps.data(), eps.size()));
      if (s != 0) v += s * up.at(std::span<const int>(I));
    } while (next_increasing(I, dim));
    v *= sq;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (int i = 0; i < dim - k; ++i) tuple[i] = J[perm[i]];
      out.at(std::span<const int>(tuple)) =
          perm_sign(std::span<const int>(perm.data(), perm.size())) * v;
    } while (std::next_permutation(perm.begin(), perm.end()));
  } while (next_increasing(J, dim));
  return out;
}

Form lie_derivative_form(const VectorField& X, const FormField& w, const Vec& p,
                         const DiffScheme& scheme) {
  // Cartan: L_X w = d(X . w) + X . dw
  FormField inner{w.dim, w.deg - 1,
                  [&](const Vec& q) { return contract(X.comp(q), w.comp(q)); }};
  Form a = (w.deg > 0) ? exterior_derivative(inner, p, scheme)
                       : Form(w.dim, 0);
  Form b = contract(X.comp(p), exterior_derivative(w, p, scheme));
  if (w.deg == 0) return b;
  return a + b;
}

}  // namespace sheargeo
