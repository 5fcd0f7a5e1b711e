// Built with -mavx2 -mfma when the compiler targets x86-64 (see
// src/CMakeLists.txt). Only reached after avx2_table() has checked the CPU.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "drivewave/kernels.hpp"

#if defined(DRIVEWAVE_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace drivewave::kernels {

#if defined(DRIVEWAVE_HAVE_AVX2)

namespace {

constexpr std::size_t kLanes = 4;

struct DemoVec {
    __m256d r;
    __m256d a;
    __m256d one;
    __m256d zero;
};

DemoVec make_demo(const DemographySpec& demo) {
    return {_mm256_set1_pd(demo.r), _mm256_set1_pd(demo.a), _mm256_set1_pd(1.0), _mm256_setzero_pd()};
}

template <Demography V>
inline __m256d birth(const DemoVec& d, __m256d n) {
    if constexpr (V == Demography::LogisticB_ConstD) {
        return _mm256_fmadd_pd(d.r, _mm256_sub_pd(d.one, n), d.one);
    } else if constexpr (V == Demography::AlleeB_ConstD) {
        const __m256d t = _mm256_mul_pd(_mm256_mul_pd(d.r, _mm256_sub_pd(d.one, n)), _mm256_sub_pd(n, d.a));
        return _mm256_max_pd(_mm256_add_pd(t, d.one), d.zero);
    } else {
        return _mm256_add_pd(d.r, d.one);
    }
}

template <Demography V>
inline __m256d death(const DemoVec& d, __m256d n) {
    if constexpr (V == Demography::ConstB_LogisticD) {
        return _mm256_fmadd_pd(d.r, n, d.one);
    } else if constexpr (V == Demography::ConstB_AlleeD) {
        const __m256d t = _mm256_mul_pd(_mm256_sub_pd(n, d.one), _mm256_sub_pd(n, d.a));
        return _mm256_fmadd_pd(d.r, t, _mm256_add_pd(d.one, d.r));
    } else {
        return d.one;
    }
}

template <Demography V>
void drive_loop(const ModelSpec& model, double dt, std::span<const double> nD, std::span<const double> nO,
                std::span<double> outD, std::span<double> outO) {
    const GenotypeParams g = model.genotype();
    const DemoVec dv = make_demo(model.demography);
    const __m256d wb = _mm256_set1_pd(g.omega_D * g.beta_D);
    const __m256d beta = _mm256_set1_pd(g.beta_D);
    const __m256d dd = _mm256_set1_pd(g.d_D);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d floor = _mm256_set1_pd(kDensityFloor);
    const __m256d vdt = _mm256_set1_pd(dt);
    const std::size_t n = nD.size();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d d = _mm256_loadu_pd(nD.data() + i);
        const __m256d o = _mm256_loadu_pd(nO.data() + i);
        const __m256d tot = _mm256_add_pd(d, o);
        const __m256d inv = _mm256_div_pd(dv.one, _mm256_max_pd(tot, floor));
        const __m256d B = birth<V>(dv, tot);
        const __m256d D = death<V>(dv, tot);
        const __m256d mating = _mm256_fmadd_pd(beta, d, _mm256_mul_pd(two, o));
        const __m256d perD =
            _mm256_fmsub_pd(_mm256_mul_pd(_mm256_mul_pd(wb, B), mating), inv, _mm256_mul_pd(dd, D));
        const __m256d perO = _mm256_fmsub_pd(_mm256_mul_pd(B, o), inv, D);
        _mm256_storeu_pd(outD.data() + i, _mm256_fmadd_pd(vdt, _mm256_mul_pd(d, perD), d));
        _mm256_storeu_pd(outO.data() + i, _mm256_fmadd_pd(vdt, _mm256_mul_pd(o, perO), o));
    }
    for (; i < n; ++i) {
        const DriveRates r = drive_reaction(model, nD[i], nO[i]);
        outD[i] = nD[i] + dt * r.rate_D;
        outO[i] = nO[i] + dt * r.rate_O;
    }
}

template <Demography V>
void wolbachia_loop(const ModelSpec& model, double dt, std::span<const double> nw, std::span<const double> ns,
                    std::span<double> outW, std::span<double> outS) {
    const DemoVec dv = make_demo(model.demography);
    const __m256d fw = _mm256_set1_pd(model.wolbachia.f_w);
    const __m256d wh = _mm256_set1_pd(model.wolbachia.omega_H);
    const __m256d floor = _mm256_set1_pd(kDensityFloor);
    const __m256d vdt = _mm256_set1_pd(dt);
    const std::size_t n = nw.size();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d w = _mm256_loadu_pd(nw.data() + i);
        const __m256d u = _mm256_loadu_pd(ns.data() + i);
        const __m256d tot = _mm256_add_pd(w, u);
        const __m256d inv = _mm256_div_pd(dv.one, _mm256_max_pd(tot, floor));
        const __m256d qw = _mm256_mul_pd(w, inv);
        const __m256d qs = _mm256_mul_pd(u, inv);
        const __m256d Bn = _mm256_mul_pd(birth<V>(dv, tot), tot);
        const __m256d D = death<V>(dv, tot);
        const __m256d mixed = _mm256_mul_pd(qw, qs);
        const __m256d bw = _mm256_mul_pd(_mm256_fmadd_pd(qw, qw, mixed), fw);
        const __m256d bs = _mm256_fmadd_pd(mixed, wh, _mm256_mul_pd(qs, qs));
        const __m256d rw = _mm256_fmsub_pd(bw, Bn, _mm256_mul_pd(D, w));
        const __m256d rs = _mm256_fmsub_pd(bs, Bn, _mm256_mul_pd(D, u));
        _mm256_storeu_pd(outW.data() + i, _mm256_fmadd_pd(vdt, rw, w));
        _mm256_storeu_pd(outS.data() + i, _mm256_fmadd_pd(vdt, rs, u));
    }
    for (; i < n; ++i) {
        const WolbachiaRates r = wolbachia_reaction(model.wolbachia, model.demography, nw[i], ns[i]);
        outW[i] = nw[i] + dt * r.rate_w;
        outS[i] = ns[i] + dt * r.rate_s;
    }
}

template <typename Fn>
decltype(auto) by_variant(Demography v, Fn&& fn) {
    switch (v) {
        case Demography::LogisticB_ConstD: return fn.template operator()<Demography::LogisticB_ConstD>();
        case Demography::AlleeB_ConstD: return fn.template operator()<Demography::AlleeB_ConstD>();
        case Demography::ConstB_LogisticD: return fn.template operator()<Demography::ConstB_LogisticD>();
        case Demography::ConstB_AlleeD: break;
    }
    return fn.template operator()<Demography::ConstB_AlleeD>();
}

void drive_explicit(const ModelSpec& model, double dt, std::span<const double> nD, std::span<const double> nO,
                    std::span<double> outD, std::span<double> outO) {
    by_variant(model.demography.variant,
               [&]<Demography V>() { drive_loop<V>(model, dt, nD, nO, outD, outO); });
}

void wolbachia_explicit(const ModelSpec& model, double dt, std::span<const double> nw, std::span<const double> ns,
                        std::span<double> outW, std::span<double> outS) {
    by_variant(model.demography.variant,
               [&]<Demography V>() { wolbachia_loop<V>(model, dt, nw, ns, outW, outS); });
}

void scalar_explicit(const ModelSpec& model, double dt, std::span<const double> p, std::span<double> out) {
    const bool tsn = model.system == System::ScalarTSN;
    if (!tsn && model.system != System::ScalarCubic) throw std::domain_error("scalar_reaction: not a scalar system");
    const double s = model.s;
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d vs = _mm256_set1_pd(s);
    const __m256d lin = _mm256_set1_pd(1.0 - 2.0 * s);
    const __m256d oms = _mm256_set1_pd(1.0 - s);
    const __m256d vdt = _mm256_set1_pd(dt);
    const __m256d zero = _mm256_setzero_pd();
    const std::size_t n = p.size();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d x = _mm256_loadu_pd(p.data() + i);
        const __m256d q = _mm256_sub_pd(one, x);
        __m256d f = _mm256_mul_pd(_mm256_mul_pd(x, q), _mm256_fmadd_pd(vs, x, lin));
        if (tsn) {
            const __m256d den = _mm256_fmadd_pd(vs, _mm256_mul_pd(q, q), oms);
            if (_mm256_movemask_pd(_mm256_cmp_pd(den, zero, _CMP_LE_OQ)) != 0)
                throw std::domain_error("scalar_reaction: TSN denominator vanishes (s = 1, p = 1)");
            f = _mm256_div_pd(f, den);
        }
        _mm256_storeu_pd(out.data() + i, _mm256_fmadd_pd(vdt, f, x));
    }
    for (; i < n; ++i) out[i] = p[i] + dt * scalar_reaction(model.system, s, p[i]);
}

// (v - v) is 0 for finite v and NaN otherwise
inline __m256d finite_mask(__m256d v) {
    return _mm256_cmp_pd(_mm256_sub_pd(v, v), _mm256_setzero_pd(), _CMP_EQ_OQ);
}

ClipStats clip_nonnegative(std::span<double> u) {
    const __m256d zero = _mm256_setzero_pd();
    __m256d worst = zero;
    __m256d ok = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    const std::size_t n = u.size();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d v = _mm256_loadu_pd(u.data() + i);
        ok = _mm256_and_pd(ok, finite_mask(v));
        worst = _mm256_max_pd(worst, _mm256_sub_pd(zero, v));
        _mm256_storeu_pd(u.data() + i, _mm256_max_pd(zero, v));  // NaN passes through
    }
    alignas(32) double lanes[kLanes];
    _mm256_store_pd(lanes, worst);
    ClipStats st;
    st.max_clip = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    st.finite = _mm256_movemask_pd(ok) == 0xF;
    for (; i < n; ++i) {
        double& v = u[i];
        if (!std::isfinite(v)) st.finite = false;
        if (v < 0.0) {
            st.max_clip = std::max(st.max_clip, -v);
            v = 0.0;
        }
    }
    return st;
}

ClipStats clip_unit(std::span<double> u) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d worst = zero;
    __m256d ok = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    const std::size_t n = u.size();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d v = _mm256_loadu_pd(u.data() + i);
        ok = _mm256_and_pd(ok, finite_mask(v));
        worst = _mm256_max_pd(worst, _mm256_max_pd(_mm256_sub_pd(zero, v), _mm256_sub_pd(v, one)));
        _mm256_storeu_pd(u.data() + i, _mm256_min_pd(one, _mm256_max_pd(zero, v)));
    }
    alignas(32) double lanes[kLanes];
    _mm256_store_pd(lanes, worst);
    ClipStats st;
    st.max_clip = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    st.finite = _mm256_movemask_pd(ok) == 0xF;
    for (; i < n; ++i) {
        double& v = u[i];
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

constexpr KernelTable kAvx2{"avx2", drive_explicit, wolbachia_explicit, scalar_explicit, clip_nonnegative,
                            clip_unit};

}  // namespace

const KernelTable* avx2_table() {
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &kAvx2 : nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace drivewave::kernels
