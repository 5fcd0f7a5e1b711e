#include "drivewave/tridiagonal.hpp"

#include <stdexcept>

namespace drivewave {

TridiagonalFactor::TridiagonalFactor(std::span<const double> sub, std::span<const double> diag,
                                     std::span<const double> sup)
    : sub_(sub.begin(), sub.end()), upper_(diag.size()), inv_pivot_(diag.size()) {
    const std::size_t n = diag.size();
    if (n == 0 || sub.size() != n || sup.size() != n)
        throw std::invalid_argument("TridiagonalFactor: band sizes must match and be nonzero");
    double pivot = diag[0];
    for (std::size_t i = 0;; ++i) {
        if (pivot == 0.0) throw std::domain_error("TridiagonalFactor: zero pivot");
        inv_pivot_[i] = 1.0 / pivot;
        upper_[i] = sup[i] * inv_pivot_[i];
        if (i + 1 == n) break;
        pivot = diag[i + 1] - sub[i + 1] * upper_[i];
    }
}

void TridiagonalFactor::solve(std::span<double> rhs) const {
    const std::size_t n = size();
    rhs[0] *= inv_pivot_[0];
    for (std::size_t i = 1; i < n; ++i) rhs[i] = (rhs[i] - sub_[i] * rhs[i - 1]) * inv_pivot_[i];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= upper_[i] * rhs[i + 1];
}

void TridiagonalFactor::solve(std::span<double> rhs1, std::span<double> rhs2) const {
    const std::size_t n = size();
    rhs1[0] *= inv_pivot_[0];
    rhs2[0] *= inv_pivot_[0];
    for (std::size_t i = 1; i < n; ++i) {
        rhs1[i] = (rhs1[i] - sub_[i] * rhs1[i - 1]) * inv_pivot_[i];
        rhs2[i] = (rhs2[i] - sub_[i] * rhs2[i - 1]) * inv_pivot_[i];
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs1[i] -= upper_[i] * rhs1[i + 1];
        rhs2[i] -= upper_[i] * rhs2[i + 1];
    }
}

void solve_tridiagonal(std::span<const double> sub, std::span<const double> diag, std::span<const double> sup,
                       std::span<double> rhs) {
    TridiagonalFactor(sub, diag, sup).solve(rhs);
}

}  // namespace drivewave
