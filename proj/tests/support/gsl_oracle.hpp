#pragma once

// Thin wrappers over GSL QUADPACK routines. Tests use them as oracles that
// share no code with the library's Boost-based quadrature.

#include <cmath>
#include <functional>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

namespace oracle {

using Fn = std::function<double(double)>;

namespace detail {

inline double trampoline(double x, void* p) { return (*static_cast<Fn*>(p))(x); }

class Workspace {
 public:
  explicit Workspace(std::size_t n = 2000) : w_(gsl_integration_workspace_alloc(n)), n_(n) {}
  ~Workspace() { gsl_integration_workspace_free(w_); }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
  gsl_integration_workspace* get() { return w_; }
  std::size_t size() const { return n_; }

 private:
  gsl_integration_workspace* w_;
  std::size_t n_;
};

inline void quiet() {
  static bool once = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)once;
}

}  // namespace detail

//! int_a^b f, tolerating integrable endpoint singularities (QAGS).
inline double integrate(Fn f, double a, double b, double rel = 1e-11) {
  detail::quiet();
  detail::Workspace w;
  gsl_function F{&detail::trampoline, &f};
  double r = 0.0, err = 0.0;
  gsl_integration_qags(&F, a, b, 0.0, rel, w.size(), w.get(), &r, &err);
  return r;
}

//! int_a^inf f (QAGIU).
inline double integrate_to_inf(Fn f, double a, double rel = 1e-11) {
  detail::quiet();
  detail::Workspace w;
  gsl_function F{&detail::trampoline, &f};
  double r = 0.0, err = 0.0;
  gsl_integration_qagiu(&F, a, 0.0, rel, w.size(), w.get(), &r, &err);
  return r;
}

//! int_a^b f(x) (x - a)^alpha (b - x)^beta (QAWS).
inline double integrate_alg(Fn f, double a, double b, double alpha, double beta,
                            double rel = 1e-11) {
  detail::quiet();
  detail::Workspace w;
  gsl_integration_qaws_table* t = gsl_integration_qaws_table_alloc(alpha, beta, 0, 0);
  gsl_function F{&detail::trampoline, &f};
  double r = 0.0, err = 0.0;
  gsl_integration_qaws(&F, a, b, t, 0.0, rel, w.size(), w.get(), &r, &err);
  gsl_integration_qaws_table_free(t);
  return r;
}

//! int_a^inf f(x) sin(omega x) or cos(omega x) (QAWF).
inline double integrate_fourier(Fn f, double a, double omega, bool sine) {
  detail::quiet();
  detail::Workspace w, cyc;
  gsl_integration_qawo_table* t =
      gsl_integration_qawo_table_alloc(omega, 1.0, sine ? GSL_INTEG_SINE : GSL_INTEG_COSINE, 50);
  gsl_function F{&detail::trampoline, &f};
  double r = 0.0, err = 0.0;
  gsl_integration_qawf(&F, a, 1e-10, w.size(), w.get(), cyc.get(), t, &r, &err);
  gsl_integration_qawo_table_free(t);
  return r;
}

}  // namespace oracle
