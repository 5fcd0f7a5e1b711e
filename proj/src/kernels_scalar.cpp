#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string_view>

#include "drivewave/kernels.hpp"

namespace drivewave::kernels {

namespace {

void drive_explicit(const ModelSpec& model, double dt, std::span<const double> nD, std::span<const double> nO,
                    std::span<double> outD, std::span<double> outO) {
    for (std::size_t i = 0; i < nD.size(); ++i) {
        const DriveRates r = drive_reaction(model, nD[i], nO[i]);
        outD[i] = nD[i] + dt * r.rate_D;
        outO[i] = nO[i] + dt * r.rate_O;
    }
}

void wolbachia_explicit(const ModelSpec& model, double dt, std::span<const double> nw, std::span<const double> ns,
                        std::span<double> outW, std::span<double> outS) {
    for (std::size_t i = 0; i < nw.size(); ++i) {
        const WolbachiaRates r = wolbachia_reaction(model.wolbachia, model.demography, nw[i], ns[i]);
        outW[i] = nw[i] + dt * r.rate_w;
        outS[i] = ns[i] + dt * r.rate_s;
    }
}

void scalar_explicit(const ModelSpec& model, double dt, std::span<const double> p, std::span<double> out) {
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] + dt * scalar_reaction(model.system, model.s, p[i]);
}

ClipStats clip_nonnegative(std::span<double> u) {
    ClipStats st;
    for (double& v : u) {
        if (!std::isfinite(v)) st.finite = false;
        if (v < 0.0) {
            st.max_clip = std::max(st.max_clip, -v);
            v = 0.0;
        }
    }
    return st;
}

ClipStats clip_unit(std::span<double> u) {
    ClipStats st;
    for (double& v : u) {
        if (!std::isfinite(v)) st.finite = false;
        if (v < 0.0) {
            st.max_clip = std::max(st.max_clip, -v);
            v = 0.0;
        } else if (v > 1.0) {
            st.max_clip = std::max(st.max_clip, v - 1.0);
            v = 1.0;
        }
    }
    return st;
}

constexpr KernelTable kScalar{"scalar", drive_explicit, wolbachia_explicit, scalar_explicit, clip_nonnegative,
                              clip_unit};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable& active_table() {
    static const KernelTable* table = [] {
        const char* env = std::getenv("DRIVEWAVE_SIMD");
        if (env != nullptr && std::string_view(env) == "scalar") return &kScalar;
        const KernelTable* simd = avx2_table();
        return simd != nullptr ? simd : &kScalar;
    }();
    return *table;
}

}  // namespace drivewave::kernels
