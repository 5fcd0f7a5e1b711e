#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace drivewave {

/// Thomas-algorithm factorization of a fixed tridiagonal matrix. The
/// matrix is factored once; solve() then costs one forward and one backward
/// sweep per right-hand side. No pivoting: callers pass diagonally dominant
/// matrices (I - dt * Laplacian and its advected variant are).
class TridiagonalFactor {
public:
    TridiagonalFactor() = default;
    TridiagonalFactor(std::span<const double> sub, std::span<const double> diag, std::span<const double> sup);

    std::size_t size() const { return inv_pivot_.size(); }

    /// Overwrites rhs with the solution.
    void solve(std::span<double> rhs) const;

    /// Two right-hand sides in one pass (same matrix).
    void solve(std::span<double> rhs1, std::span<double> rhs2) const;

private:
    std::vector<double> sub_;
    std::vector<double> upper_;      // modified super-diagonal c'_i
    std::vector<double> inv_pivot_;  // 1 / (b_i - a_i c'_{i-1})
};

/// One-shot solve of a tridiagonal system with per-step coefficients.
/// `sub[0]` and `sup[n-1]` are ignored.
void solve_tridiagonal(std::span<const double> sub, std::span<const double> diag, std::span<const double> sup,
                       std::span<double> rhs);

}  // namespace drivewave
