#pragma once

#include <Eigen/Dense>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace knotgeo {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// A point of R^3 together with the point at infinity of the conformal
/// compactification. Inversions and stereographic projections can produce it.
struct MoebPoint {
    Vec3 p{0.0, 0.0, 0.0};
    bool at_infinity = false;

    static MoebPoint infinity() { return {Vec3::Zero(), true}; }
    static MoebPoint finite(const Vec3& v) { return {v, false}; }
};

/// Thrown for malformed input files; carries the 1-based offending line.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, int line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Default worker count: KNOT_THREADS env var, else 1.
inline int default_thread_count() {
    if (const char* env = std::getenv("KNOT_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

/// Runs fn(row) for row in [0, rows). Row results must be written to
/// per-row slots by the caller so the final reduction order is fixed and
/// results stay bitwise reproducible for any thread count.
inline void parallel_rows(int rows, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = default_thread_count();
    threads = std::min(threads, rows > 0 ? rows : 1);
    if (threads <= 1) {
        for (int r = 0; r < rows; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (int r = t; r < rows; r += threads) fn(r);
        });
    }
    for (auto& th : pool) th.join();
}

/// Sums per-row partials in index order (deterministic reduction).
inline double ordered_sum(const std::vector<double>& partials) {
    double s = 0.0;
    for (double v : partials) s += v;
    return s;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace knotgeo
