#pragma once

#include <cmath>
#include <span>
#include <utility>

namespace ham {

enum class Equation { wave, heat };

struct KernelSpec {
  Equation equation = Equation::wave;
  int dim = 1;
};

//! Fourier transform of G(t, .) at radius r = |xi|.
//! Wave: sin(t r) / r (limit t at r = 0). Heat: exp(-t r^2 / 2).
double g_fourier(const KernelSpec& spec, double t, double r);

//! Wave Fourier kernel without the KernelSpec lookup; used on hot paths.
inline double wave_fourier(double t, double r);

//! Real-space kernel G(t, x). Wave supports d in {1, 2}; heat any d.
double g_real(const KernelSpec& spec, double t, std::span<const double> x);

struct FourierIdentity {
  double direct = 0.0;     //!< numerical transform of g_real
  double transform = 0.0;  //!< g_fourier
  double error = 0.0;
  bool converged = true;
};

//! Numerically transforms g_real at radius r and compares with g_fourier.
FourierIdentity fourier_identity_check(const KernelSpec& spec, double t, double r);

//---------------------------------------------------------------------------//

inline double wave_fourier(double t, double r) {
  double x = t * r;
  if (x < 1e-4) return t * (1.0 - x * x / 6.0);
  return std::sin(x) / r;
}

}  // namespace ham
