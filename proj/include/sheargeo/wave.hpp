#pragma once

#include "sheargeo/bundle.hpp"
#include "sheargeo/grid.hpp"

namespace sheargeo {

// Middle-degree form F = Re(theta ^ dz^1 ^ ... ^ dz^{k-1}) on the total space
// of a chart whose base carries holomorphic coordinates. The complex assembly
// is kept as the (re, im) pair of real forms.
struct WaveForm {
  const SasakiChart* S = nullptr;
  const MetricField* g = nullptr;
  int k = 0;  // degree = dim M / 2
  FormField re;      // F = re part
  FormField im;
  FormField theta;   // the null 1-form factor (pulled-back contact form)
  Form star_re(const Vec& p) const;
  Form star_im(const Vec& p) const;
};

// Throws NoHolomorphicChart when the base has no holomorphic coordinates.
WaveForm build_wave(const SasakiChart& S, const MetricField& g);

struct HarmonicityReport {
  double max_dF = 0.0;
  double max_dstarF = 0.0;
  std::vector<double> dF_values, dstarF_values;
  // eigenrelation |*Fc -+ i^{k-1} Fc| with one consistent sign per chart
  double eigen_residual = 0.0;
  int eigen_sign = 0;
  int grid_points = 0;
};
HarmonicityReport harmonicity_check(const WaveForm& w, const GridSpec& grid,
                                    const DiffScheme& scheme,
                                    ExecMode mode = ExecMode::Parallel);

struct FlagLieReport {
  int kernel_dim = 0;
  double sv_gap = 0.0;          // sigma_{second smallest} / sigma_smallest
  double kernel_alignment = 0.0;  // |<v, d_t>| / |v|, should be 1
  double lie_F = 0.0;           // max |L_{p_o} F|
  double lie_starF = 0.0;       // max |L_{p_o} *F|
  double f_fit = 0.0;           // f from L_{p_o} theta + f theta = 0
  double f_fit_residual = 0.0;
};
// Throws KernelDimensionMismatch when ker F ^ ker *F is not 1-dimensional.
FlagLieReport flag_and_lie_check(const WaveForm& w, const Vec& p,
                                 const DiffScheme& scheme);

}  // namespace sheargeo
