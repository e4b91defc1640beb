#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "knotgeo/curve.hpp"
#include "knotgeo/types.hpp"

namespace knotgeo {

struct FlowConfig {
    double alpha = 2.0;
    double step_init = 1e-2;
    int max_steps = 5000;
    double grad_tol = 1e-6;
    int resample_every = 10;
    double min_self_dist_factor = 0.5;  // abort when min self distance < factor * (L/n)

    void validate() const {
        if (!(step_init > 0.0)) throw std::invalid_argument("FlowConfig: step_init must be > 0");
        if (max_steps < 0) throw std::invalid_argument("FlowConfig: max_steps must be >= 0");
    }
};

struct FlowStep {
    int step = 0;
    double energy = 0.0;
    double step_size = 0.0;
    double grad_norm = 0.0;
    double min_self_dist = 0.0;
    bool resample = false;  // bookkeeping step after re-uniformizing
};

enum class FlowStatus { converged, max_steps, aborted_self_distance, line_search_stalled };

inline std::string to_string(FlowStatus s) {
    switch (s) {
        case FlowStatus::converged: return "converged";
        case FlowStatus::max_steps: return "max_steps";
        case FlowStatus::aborted_self_distance: return "aborted_self_distance";
        case FlowStatus::line_search_stalled: return "line_search_stalled";
    }
    return "unknown";
}

/// The discrete energy driven by the flow: the plain pair sum of
/// chord^-alpha - arc^-alpha with dual-cell weights and the closed-form
/// renormalization constant, scale-invariant through the L^(alpha-2) factor.
/// This is the exact functional the analytic gradient differentiates; the
/// reporting quadrature in energy.hpp adds corrections that are not worth
/// dragging through the derivative.
inline double flow_energy(const std::vector<Vec3>& v, double alpha) {
    const int n = static_cast<int>(v.size());
    std::vector<double> seg(n), cum(n + 1, 0.0);
    for (int k = 0; k < n; ++k) {
        seg[k] = (v[(k + 1) % n] - v[k]).norm();
        cum[k + 1] = cum[k] + seg[k];
    }
    const double L = cum[n];
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = 0.5 * (seg[(i + n - 1) % n] + seg[i]);

    double U = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double chord = (v[i] - v[j]).norm();
            const double f = cum[j] - cum[i];
            const double arc = std::min(f, L - f);
            U += (std::pow(chord, -alpha) - std::pow(arc, -alpha)) * w[i] * w[j];
        }
    return 2.0 * std::pow(L, alpha - 2.0) * U - std::pow(2.0, alpha) / (alpha - 1.0);
}

inline double flow_energy(const PolyCurve& c, double alpha) {
    if (!c.closed()) throw std::domain_error("flow_energy: curve must be closed");
    return flow_energy(c.vertices(), alpha);
}

/// Exact gradient of flow_energy with respect to the vertex positions,
/// including the dependence through the arclength table, the dual-cell
/// weights, and the total-length power. Runs in O(n^2) using a difference
/// array for the arc-interval coefficients. Antipodal arc ties use the
/// averaged (subgradient) branch so central differences are reproduced.
inline std::vector<Vec3> discrete_gradient(const PolyCurve& c, double alpha) {
    if (!c.closed()) throw std::domain_error("discrete_gradient: curve must be closed");
    const auto& v = c.vertices();
    const int n = static_cast<int>(v.size());

    std::vector<double> seg(n), cum(n + 1, 0.0);
    std::vector<Vec3> ehat(n);
    for (int k = 0; k < n; ++k) {
        const Vec3 e = v[(k + 1) % n] - v[k];
        seg[k] = e.norm();
        ehat[k] = e / seg[k];
        cum[k + 1] = cum[k] + seg[k];
    }
    const double L = cum[n];
    const double tie_tol = 1e-9 * L;
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = 0.5 * (seg[(i + n - 1) % n] + seg[i]);

    const double Lpow = std::pow(L, alpha - 2.0);
    std::vector<Vec3> grad(n, Vec3::Zero());
    std::vector<double> segcoef(n + 1, 0.0);  // difference array over segments
    std::vector<double> rowsum(n, 0.0);       // T_i = sum_j (g_ij) * w_j
    double U2 = 0.0;                          // ordered pair sum

    auto range_add = [&](int lo, int hi, double val) {  // segments [lo, hi) cyclic
        if (lo <= hi) {
            segcoef[lo] += val;
            segcoef[hi] -= val;
        } else {
            segcoef[lo] += val;
            segcoef[n] -= val;
            segcoef[0] += val;
            segcoef[hi] -= val;
        }
    };

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Vec3 d = v[i] - v[j];
            const double chord = d.norm();
            if (chord < 1e-12 * L)
                throw std::domain_error("discrete_gradient: near-singular pair distance");
            const double f = cum[j] - cum[i];
            const double b = L - f;
            const double arc = std::min(f, b);
            const double cpow = std::pow(chord, -alpha);
            const double apow = std::pow(arc, -alpha);
            const double g = cpow - apow;
            const double ww = w[i] * w[j];
            U2 += 2.0 * g * ww;
            rowsum[i] += g * w[j];
            rowsum[j] += g * w[i];

            // chord term: d/dv of L^(alpha-2) * 2 * chord^-alpha * w_i * w_j
            const Vec3 gc = (-2.0 * alpha * Lpow * std::pow(chord, -alpha - 2.0) * ww) * d;
            grad[i] += gc;
            grad[j] -= gc;

            // arc term: d/dv of -2 * arc^-alpha * w_i * w_j through the segments
            const double beta = 2.0 * alpha * std::pow(arc, -alpha - 1.0) * ww;
            if (std::abs(f - b) <= tie_tol) {
                range_add(0, n, 0.5 * beta);  // averaged branch at the tie
            } else if (f < b) {
                range_add(i, j, beta);  // forward segments i..j-1
            } else {
                range_add(j, i, beta);  // complement
            }
        }
    }

    // fold weight and total-length dependence into per-segment coefficients
    std::vector<double> S(n, 0.0);
    double run = 0.0;
    for (int k = 0; k < n; ++k) {
        run += segcoef[k];
        S[k] = run;
    }
    const double lterm = (alpha - 2.0) * std::pow(L, alpha - 3.0) * U2;
    for (int k = 0; k < n; ++k) {
        const double coef = Lpow * (S[k] + rowsum[k] + rowsum[(k + 1) % n]) + lterm;
        grad[(k + 1) % n] += coef * ehat[k];
        grad[k] -= coef * ehat[k];
    }
    return grad;
}

struct FlowTrace {
    std::vector<FlowStep> steps;
    std::vector<Vec3> final_vertices;
    FlowStatus status = FlowStatus::max_steps;
    int accepted_steps = 0;

    PolyCurve final_curve() const { return PolyCurve(final_vertices, true); }
};

namespace detail {

inline double grad_inf_norm(const std::vector<Vec3>& g) {
    double m = 0.0;
    for (const auto& v : g) m = std::max(m, v.lpNorm<Eigen::Infinity>());
    return m;
}

inline std::vector<Vec3> normalized_to_unit_length(const std::vector<Vec3>& v) {
    PolyCurve c(v, true);
    const double L = c.total_length();
    Vec3 centroid = Vec3::Zero();
    for (const auto& p : v) centroid += p;
    centroid /= static_cast<double>(v.size());
    std::vector<Vec3> out;
    out.reserve(v.size());
    for (const auto& p : v) out.push_back((p - centroid) / L);
    return out;
}

}  // namespace detail

/// Gradient descent on flow_energy with backtracking line search (factor
/// 1/2, reset to step_init after 5 consecutive accepts). The curve is
/// renormalized to unit length and resampled to uniform arclength every
/// resample_every accepted steps; energy is non-increasing between
/// resampling events. Aborts when the minimum self distance falls under
/// min_self_dist_factor * (L/n) — an imminent discrete self-crossing would
/// change the knot type. on_accept, when set, sees every accepted state
/// (checkpointing hook).
inline FlowTrace relax(const PolyCurve& input, const FlowConfig& cfg,
                       const std::function<void(int, const PolyCurve&)>& on_accept = {}) {
    cfg.validate();
    if (!input.closed()) throw std::domain_error("relax: curve must be closed");

    const int n = input.size();
    PolyCurve cur = input.resample_uniform(n);
    std::vector<Vec3> v = detail::normalized_to_unit_length(cur.vertices());

    FlowTrace trace;
    auto self_dist = [&](const std::vector<Vec3>& verts) {
        return PolyCurve(verts, true).min_self_distance();
    };
    auto below_abort = [&](const std::vector<Vec3>& verts, double msd) {
        const double L = PolyCurve(verts, true).total_length();
        return msd < cfg.min_self_dist_factor * (L / n);
    };

    double energy = flow_energy(v, cfg.alpha);
    double step = cfg.step_init;
    int consecutive = 0;

    {
        FlowStep rec;
        rec.step = 0;
        rec.energy = energy;
        rec.min_self_dist = self_dist(v);
        trace.steps.push_back(rec);
        if (below_abort(v, rec.min_self_dist)) {
            trace.status = FlowStatus::aborted_self_distance;
            trace.final_vertices = v;
            return trace;
        }
    }

    for (int k = 1; k <= cfg.max_steps; ++k) {
        const std::vector<Vec3> g = discrete_gradient(PolyCurve(v, true), cfg.alpha);
        const double gnorm = detail::grad_inf_norm(g);
        if (gnorm <= cfg.grad_tol) {
            trace.status = FlowStatus::converged;
            break;
        }

        std::vector<Vec3> trial(n);
        bool accepted = false;
        bool last_block_was_self_dist = false;
        double etrial = energy;
        double trial_msd = 0.0;
        while (step > 1e-16) {
            for (int i = 0; i < n; ++i) trial[i] = v[i] - step * g[i];
            bool valid = true;
            for (int i = 0; i < n && valid; ++i)
                if ((trial[(i + 1) % n] - trial[i]).squaredNorm() == 0.0) valid = false;
            if (valid) {
                trial_msd = self_dist(trial);
                if (below_abort(trial, trial_msd)) {
                    // overshoot toward a self-crossing: shrink rather than accept
                    last_block_was_self_dist = true;
                } else {
                    etrial = flow_energy(trial, cfg.alpha);
                    if (etrial < energy) {
                        accepted = true;
                        break;
                    }
                    last_block_was_self_dist = false;
                }
            }
            step *= 0.5;
        }
        if (!accepted) {
            // vanishing steps still hitting the self-distance wall mean the
            // flow is pressing against a crossing change
            trace.status = last_block_was_self_dist ? FlowStatus::aborted_self_distance
                                                    : FlowStatus::line_search_stalled;
            break;
        }
        v = trial;
        energy = etrial;
        ++trace.accepted_steps;
        ++consecutive;
        if (on_accept) on_accept(trace.accepted_steps, PolyCurve(v, true));

        FlowStep rec;
        rec.step = k;
        rec.energy = energy;
        rec.step_size = step;
        rec.grad_norm = gnorm;
        rec.min_self_dist = trial_msd;
        trace.steps.push_back(rec);

        if (below_abort(v, rec.min_self_dist)) {
            trace.status = FlowStatus::aborted_self_distance;
            trace.final_vertices = v;
            return trace;
        }
        if (consecutive >= 5) {
            step = cfg.step_init;
            consecutive = 0;
        }
        if (cfg.resample_every > 0 && trace.accepted_steps % cfg.resample_every == 0) {
            v = detail::normalized_to_unit_length(
                PolyCurve(v, true).resample_uniform(n).vertices());
            energy = flow_energy(v, cfg.alpha);
            FlowStep rs;
            rs.step = k;
            rs.energy = energy;
            rs.grad_norm = gnorm;
            rs.min_self_dist = self_dist(v);
            rs.resample = true;
            trace.steps.push_back(rs);
        }
        if (k == cfg.max_steps) trace.status = FlowStatus::max_steps;
    }
    if (cfg.max_steps == 0) trace.status = FlowStatus::max_steps;
    trace.final_vertices = v;
    return trace;
}

}  // namespace knotgeo
