#pragma once

#include "deconv/densities.hpp"
#include "deconv/noise.hpp"
#include "deconv/types.hpp"

#include <string>

namespace deconv {

/// n i.i.d. draws of symmetric stable noise with CF exp(-|u|^s).
Sample sample_stable(double s, std::size_t n, RngStream& rng);

/// Y_j = X_j + eps_j with X ~ f and eps ~ g independent.
Sample sample_convolution(const DensitySpec& f, const NoiseSpec& g,
                          std::size_t n, RngStream& rng);

/// One observation per line, plain decimal text, at <path>; metadata sidecar
/// (seed, n, signal, noise) at <path>.meta.json.
void write_sample(const Sample& s, const std::string& path);
Sample read_sample(const std::string& path);

}  // namespace deconv
