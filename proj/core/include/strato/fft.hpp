#pragma once

#include <span>
#include <vector>

#include "strato/field.hpp"

namespace strato::fft {

/// Real-to-complex transform of n*n samples, normalized by 1/n^2.
Spectrum forward(const GridSpec& grid, std::span<const double> values);

/// Complex-to-real transform; the inverse of forward().
std::vector<double> inverse(const Spectrum& spectrum);

/// Writes the inverse transform into `out` (size n*n) without allocating.
void inverse_into(const Spectrum& spectrum, std::span<double> out);

/// Forward transform into an existing spectrum of the same grid.
void forward_into(std::span<const double> values, Spectrum& out);

}  // namespace strato::fft
