#include "drivewave/wave.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace drivewave {

std::string_view to_string(WaveClass c) {
    switch (c) {
        case WaveClass::TrivialKPP: return "TrivialKPP";
        case WaveClass::NontrivialViable: return "NontrivialViable";
        case WaveClass::NontrivialNonviable: return "NontrivialNonviable";
        case WaveClass::NotConverged: return "NotConverged";
    }
    return "NotConverged";
}

WaveClass parse_wave_class(std::string_view text) {
    for (WaveClass c : {WaveClass::TrivialKPP, WaveClass::NontrivialViable, WaveClass::NontrivialNonviable,
                        WaveClass::NotConverged})
        if (text == to_string(c)) return c;
    throw std::invalid_argument("unknown wave class '" + std::string(text) + "'");
}

std::vector<double> resident_field(const FieldState& st, const ModelSpec& model) {
    std::vector<double> out(st.u1.size());
    if (model.is_scalar()) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = 1.0 - st.u1[i];
    } else if (model.is_frequency()) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - st.u1[i]) * st.u2[i];
    } else {
        out = st.u2;
    }
    return out;
}

Profiles wave_profiles(const FieldState& st, const ModelSpec& model) {
    Profiles pr;
    const std::size_t nx = st.u1.size();
    if (model.is_scalar()) {
        pr.P = st.u1;
        pr.N.assign(nx, 1.0);
    } else if (model.is_frequency()) {
        pr.P = st.u1;
        pr.N = st.u2;
    } else {
        pr.P.resize(nx);
        pr.N.resize(nx);
        // P is the exact ratio wherever n > 0; empty cells take the value of
        // the nearest nonempty cell to their left (or right, at the left edge)
        std::optional<double> carry;
        std::vector<std::size_t> pending;
        for (std::size_t i = 0; i < nx; ++i) {
            const double n = st.u1[i] + st.u2[i];
            pr.N[i] = n;
            if (n > 0.0) {
                pr.P[i] = st.u1[i] / n;
                if (!carry)
                    for (std::size_t j : pending) pr.P[j] = pr.P[i];
                carry = pr.P[i];
            } else if (carry) {
                pr.P[i] = *carry;
            } else {
                pending.push_back(i);
            }
        }
        if (!carry)
            for (std::size_t j : pending) pr.P[j] = 0.0;
    }
    return pr;
}

double invader_max(const FieldState& st, const ModelSpec& model) {
    double m = 0.0;
    if (model.is_frequency()) {
        for (std::size_t i = 0; i < st.u1.size(); ++i) m = std::max(m, st.u1[i] * st.u2[i]);
    } else {
        for (double v : st.u1) m = std::max(m, v);
    }
    return m;
}

std::vector<LevelPoint> track_level_set(std::span<const FieldState> snapshots, const Grid1D& grid,
                                        const ModelSpec& model, double level, double boundary_margin) {
    std::vector<LevelPoint> track;
    const double dx = grid.dx();
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        const std::vector<double> u = resident_field(snapshots[k], model);
        for (std::size_t i = 0; i + 1 < u.size(); ++i) {
            const double a = u[i] - level;
            const double b = u[i + 1] - level;
            if (a == 0.0 || (a > 0.0) != (b > 0.0)) {
                const double frac = a == 0.0 ? 0.0 : a / (a - b);
                const double x = grid.x(i) + frac * dx;
                const bool usable = x >= grid.x_min + boundary_margin && x <= grid.x_max - boundary_margin;
                track.push_back({snapshots[k].t, x, k, usable});
                break;
            }
        }
    }
    return track;
}

SpeedFit estimate_speed(std::span<const LevelPoint> track, double window_fraction, std::size_t min_points,
                        double min_r2) {
    SpeedFit fit;
    std::vector<LevelPoint> usable;
    for (const auto& p : track)
        if (p.usable) usable.push_back(p);
    if (usable.size() < 2) return fit;

    const double t_end = usable.back().t;
    const double t_start = t_end - window_fraction * (t_end - usable.front().t);
    double st = 0.0, sx = 0.0;
    std::size_t n = 0;
    for (const auto& p : usable)
        if (p.t >= t_start) {
            st += p.t;
            sx += p.x;
            ++n;
        }
    fit.points = n;
    if (n < std::max<std::size_t>(min_points, 2)) return fit;

    const double tm = st / static_cast<double>(n);
    const double xm = sx / static_cast<double>(n);
    double stt = 0.0, stx = 0.0, sxx = 0.0;
    for (const auto& p : usable)
        if (p.t >= t_start) {
            stt += (p.t - tm) * (p.t - tm);
            stx += (p.t - tm) * (p.x - xm);
            sxx += (p.x - xm) * (p.x - xm);
        }
    if (stt <= 0.0) return fit;
    fit.speed = stx / stt;
    const double ss_res = std::max(0.0, sxx - fit.speed * stx);
    // a stationary front has no variance to explain; positions within 1e-3
    // of the fitted line count as a perfect fit
    const double ss_ref = std::max(sxx, static_cast<double>(n) * 1e-6);
    fit.fit_r2 = std::clamp(1.0 - ss_res / ss_ref, 0.0, 1.0);
    fit.converged = fit.fit_r2 >= min_r2;
    return fit;
}

bool monotonicity_check(std::span<const double> u, Direction direction, double epsilon, double flat_tol) {
    const std::size_t n = u.size();
    if (n < 3) throw std::invalid_argument("monotonicity_check: profile needs at least 3 points");
    std::vector<double> d(n);
    d[0] = u[1] - u[0];
    d[n - 1] = u[n - 1] - u[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = 0.5 * (u[i + 1] - u[i - 1]);
    double sup = 0.0;
    for (double v : d) sup = std::max(sup, std::abs(v));
    if (sup <= flat_tol) return true;
    if (direction == Direction::Increasing) return *std::min_element(d.begin(), d.end()) / sup > -epsilon;
    return *std::max_element(d.begin(), d.end()) / sup < epsilon;
}

std::optional<HTable> extract_h(std::span<const double> P, std::span<const double> N) {
    if (P.size() != N.size() || P.empty()) throw std::invalid_argument("extract_h: profile size mismatch");
    const auto [lo, hi] = std::minmax_element(P.begin(), P.end());
    if (*hi - *lo <= 0.5) return std::nullopt;

    // strictly increasing subsequence of P along x (running maximum)
    std::vector<double> ps, ns;
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (ps.empty() || P[i] > ps.back()) {
            ps.push_back(P[i]);
            ns.push_back(N[i]);
        }
    }

    HTable table;
    table.V.resize(kHTableSize);
    table.h.resize(kHTableSize);
    std::size_t j = 0;
    for (std::size_t k = 0; k < kHTableSize; ++k) {
        const double v = static_cast<double>(k) / static_cast<double>(kHTableSize - 1);
        table.V[k] = v;
        if (v <= ps.front()) {
            table.h[k] = ns.front();
        } else if (v >= ps.back()) {
            table.h[k] = ns.back();
        } else {
            while (ps[j + 1] < v) ++j;
            const double w = (v - ps[j]) / (ps[j + 1] - ps[j]);
            table.h[k] = ns[j] + w * (ns[j + 1] - ns[j]);
        }
    }
    return table;
}

WaveReport classify_wave(std::span<const FieldState> snapshots, const Grid1D& grid, const ModelSpec& model,
                         const WaveTolerances& tol) {
    if (snapshots.empty()) throw std::invalid_argument("classify_wave: no snapshots");
    WaveReport rep;
    rep.track = track_level_set(snapshots, grid, model, tol.level, tol.boundary_margin);
    const SpeedFit fit = estimate_speed(rep.track, tol.window_fraction, tol.min_points, tol.min_r2);
    rep.speed = fit.speed;
    rep.fit_r2 = fit.fit_r2;

    // profiles are read where the front was last measured, since fast fronts
    // leave the domain before t_final
    std::size_t diag = snapshots.size() - 1;
    for (auto it = rep.track.rbegin(); it != rep.track.rend(); ++it)
        if (it->usable) {
            diag = it->snapshot;
            break;
        }
    const FieldState& last = snapshots.back();
    const bool trivial =
        invader_max(snapshots[diag], model) < tol.p_trivial_tol && invader_max(last, model) < tol.p_trivial_tol;

    // a trivial wave has P numerically zero: increments below p_trivial_tol are flat
    const Profiles pr = wave_profiles(snapshots[diag], model);
    rep.p_monotone = monotonicity_check(pr.P, Direction::Increasing, tol.monotone_eps,
                                        trivial ? tol.p_trivial_tol : 1e-12);
    rep.n_monotone = monotonicity_check(pr.N, Direction::Decreasing, tol.monotone_eps);

    const Profiles final_pr = wave_profiles(last, model);
    const std::size_t nx = final_pr.N.size();
    const auto tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(tol.plateau_fraction * nx)));
    double sum = 0.0;
    for (std::size_t i = nx - tail; i < nx; ++i) sum += final_pr.N[i];
    rep.plateau_n = sum / static_cast<double>(tail);

    if (!fit.converged)
        rep.wave_class = WaveClass::NotConverged;
    else if (trivial)
        rep.wave_class = WaveClass::TrivialKPP;
    else
        rep.wave_class = fit.speed < 0.0 ? WaveClass::NontrivialViable : WaveClass::NontrivialNonviable;

    if (!trivial) rep.h_table = extract_h(pr.P, pr.N);
    return rep;
}

double integrate_uniform(std::span<const double> f, double step) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * step * (f[0] + f[1]);
    const std::size_t intervals = n - 1;
    std::size_t simpson_end = intervals;  // node index where Simpson stops
    double tail = 0.0;
    if (intervals % 2 == 1) {
        simpson_end = intervals - 3;
        const std::size_t a = simpson_end;
        tail = 3.0 * step / 8.0 * (f[a] + 3.0 * f[a + 1] + 3.0 * f[a + 2] + f[a + 3]);
    }
    if (simpson_end == 0) return tail;
    double acc = f[0] + f[simpson_end];
    for (std::size_t i = 1; i < simpson_end; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return step / 3.0 * acc + tail;
}

namespace {

double table_step(const HTable& t) {
    if (t.V.size() < 4 || t.V.size() != t.h.size()) throw std::invalid_argument("h table needs at least 4 nodes");
    return t.V[1] - t.V[0];
}

}  // namespace

double nsv_sign(const HTable& t, double s, double r) {
    const double step = table_step(t);
    std::vector<double> f(t.V.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double v = t.V[k];
        const double h = t.h[k];
        const double h2 = h * h;
        f[k] = h2 * h2 * (r * (1.0 - h) + 1.0) * v * (1.0 - v) * (s * v - 2.0 * s + 1.0);
    }
    return -integrate_uniform(f, step);
}

double energy_sign(const HTable& t, double s, double r) {
    const double step = table_step(t);
    std::vector<double> f(t.V.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double h = t.h[k];
        f[k] = s * (1.0 - t.V[k]) * h * h * (r * (1.0 - 2.0 * h / 3.0) + 1.0);
    }
    const double n_star = s < 1.0 ? std::max(0.0, 1.0 - s / (r * (1.0 - s))) : 0.0;
    return r / 6.0 * (1.0 - (1.0 - s) * n_star * n_star * n_star) - integrate_uniform(f, step);
}

}  // namespace drivewave
