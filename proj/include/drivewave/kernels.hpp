#pragma once

// Data-parallel inner loops of the solver. Every kernel has a scalar
// reference built directly on the pointwise functions of models.hpp and, where
// the target supports it, an AVX2+FMA variant selected at runtime. The two
// must agree to rounding; tests/test_kernels.cpp checks that.

#include <cstddef>
#include <span>
#include <string_view>

#include "drivewave/models.hpp"

namespace drivewave::kernels {

/// Result of a clipping pass: the largest undershoot removed and whether
/// every entry was finite on input.
struct ClipStats {
    double max_clip = 0.0;
    bool finite = true;
};

struct KernelTable {
    std::string_view name;

    /// out = u + dt * R(u) for the (nD, nO) system.
    void (*drive_explicit)(const ModelSpec& model, double dt, std::span<const double> nD,
                           std::span<const double> nO, std::span<double> outD, std::span<double> outO);

    /// out = u + dt * R(u) for the (nw, ns) system.
    void (*wolbachia_explicit)(const ModelSpec& model, double dt, std::span<const double> nw,
                               std::span<const double> ns, std::span<double> outW, std::span<double> outS);

    /// out = p + dt * f(p) for the cubic and TSN equations.
    void (*scalar_explicit)(const ModelSpec& model, double dt, std::span<const double> p, std::span<double> out);

    /// Clamp negatives to 0 in place.
    ClipStats (*clip_nonnegative)(std::span<double> u);

    /// Clamp into [0, 1] in place; max_clip reports the larger excursion.
    ClipStats (*clip_unit)(std::span<double> u);
};

const KernelTable& scalar_table();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks
/// AVX2/FMA.
const KernelTable* avx2_table();

/// AVX2 when available unless DRIVEWAVE_SIMD=scalar is set in the
/// environment. Resolved once per process.
const KernelTable& active_table();

}  // namespace drivewave::kernels
