#pragma once

// Internal scaled-FFT entry points shared by the grid transforms and the
// fused advection kernel. Not part of the installed public API surface.

#include "pmflow/spectral_grid.hpp"

namespace pmflow::detail {

// In-place c2c transform of data (length grid.size()), multiplied by scale.
void fft_scaled(const GridSpec& g, cplx* data, bool forward, double scale);

double forward_scale(const GridSpec& g);   // (2pi)^{-3/2} h^3
double backward_scale(const GridSpec& g);  // (2pi)^{-3/2} dxi^3

}  // namespace pmflow::detail
