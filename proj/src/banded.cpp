#include "vesicle/banded.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vesicle/errors.hpp"

namespace vesicle {

BorderedBandMatrix::BorderedBandMatrix(int core_size, int lower, int upper, int border)
    : n_(core_size), kl_(lower), ku_(upper), k_(border),
      band_(static_cast<std::size_t>(core_size) * (lower + upper + 1), 0.0),
      right_(static_cast<std::size_t>(core_size) * border, 0.0),
      bottom_(static_cast<std::size_t>(border) * core_size, 0.0),
      corner_(static_cast<std::size_t>(border) * border, 0.0) {
    if (core_size < 1 || lower < 0 || upper < 0 || border < 0) {
        throw std::invalid_argument("BorderedBandMatrix: bad dimensions");
    }
}

bool BorderedBandMatrix::in_pattern(int row, int col) const {
    if (row < 0 || col < 0 || row >= size() || col >= size()) return false;
    if (row < n_ && col < n_) return col - row <= ku_ && row - col <= kl_;
    return true;
}

void BorderedBandMatrix::add(int row, int col, double value) {
    if (row < 0 || col < 0 || row >= size() || col >= size()) {
        throw std::out_of_range("BorderedBandMatrix::add index out of range");
    }
    if (row < n_ && col < n_) {
        if (!in_pattern(row, col)) {
            throw std::out_of_range("BorderedBandMatrix::add outside band at (" +
                                    std::to_string(row) + "," + std::to_string(col) + ")");
        }
        band_[static_cast<std::size_t>(row) * (kl_ + ku_ + 1) + (col - row + kl_)] += value;
    } else if (row < n_) {
        right_[static_cast<std::size_t>(row) * k_ + (col - n_)] += value;
    } else if (col < n_) {
        bottom_[static_cast<std::size_t>(row - n_) * n_ + col] += value;
    } else {
        corner_[static_cast<std::size_t>(row - n_) * k_ + (col - n_)] += value;
    }
}

double BorderedBandMatrix::at(int row, int col) const {
    if (!in_pattern(row, col)) return 0.0;
    if (row < n_ && col < n_) {
        return band_[static_cast<std::size_t>(row) * (kl_ + ku_ + 1) + (col - row + kl_)];
    }
    if (row < n_) return right_[static_cast<std::size_t>(row) * k_ + (col - n_)];
    if (col < n_) return bottom_[static_cast<std::size_t>(row - n_) * n_ + col];
    return corner_[static_cast<std::size_t>(row - n_) * k_ + (col - n_)];
}

std::vector<double> BorderedBandMatrix::solve(std::span<const double> rhs) const {
    if (static_cast<int>(rhs.size()) != size()) {
        throw std::invalid_argument("BorderedBandMatrix::solve: rhs size mismatch");
    }
    const BandLU lu(n_, kl_, ku_, band_);

    std::vector<double> x(rhs.begin(), rhs.begin() + n_);
    lu.solve_in_place(x);
    if (k_ == 0) {
        return x;
    }

    // Columns of A^{-1} B.
    std::vector<std::vector<double>> AinvB(static_cast<std::size_t>(k_));
    for (int b = 0; b < k_; ++b) {
        auto& col = AinvB[static_cast<std::size_t>(b)];
        col.resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) col[static_cast<std::size_t>(i)] = right_[i * k_ + b];
        lu.solve_in_place(col);
    }

    // Schur complement S = D - C A^{-1} B, reduced rhs g - C A^{-1} f.
    std::vector<double> S(corner_);
    std::vector<double> g(rhs.begin() + n_, rhs.end());
    for (int r = 0; r < k_; ++r) {
        const double* crow = &bottom_[static_cast<std::size_t>(r) * n_];
        double cx = 0.0;
        for (int i = 0; i < n_; ++i) cx += crow[i] * x[static_cast<std::size_t>(i)];
        g[static_cast<std::size_t>(r)] -= cx;
        for (int b = 0; b < k_; ++b) {
            const auto& col = AinvB[static_cast<std::size_t>(b)];
            double s = 0.0;
            for (int i = 0; i < n_; ++i) s += crow[i] * col[static_cast<std::size_t>(i)];
            S[static_cast<std::size_t>(r) * k_ + b] -= s;
        }
    }
    dense_solve(S, g, k_);

    std::vector<double> out(static_cast<std::size_t>(size()));
    for (int i = 0; i < n_; ++i) {
        double v = x[static_cast<std::size_t>(i)];
        for (int b = 0; b < k_; ++b) {
            v -= AinvB[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)] *
                 g[static_cast<std::size_t>(b)];
        }
        out[static_cast<std::size_t>(i)] = v;
    }
    std::copy(g.begin(), g.end(), out.begin() + n_);
    return out;
}

BandLU::BandLU(int n, int lower, int upper, std::span<const double> band)
    : n_(n), kl_(lower), ku_(upper), width_(2 * lower + upper + 1),
      lu_(static_cast<std::size_t>(n) * (2 * lower + upper + 1), 0.0),
      pivot_(static_cast<std::size_t>(n)) {
    const int in_width = kl_ + ku_ + 1;
    for (int i = 0; i < n_; ++i) {
        for (int c = std::max(0, i - kl_); c <= std::min(n_ - 1, i + ku_); ++c) {
            at(i, c) = band[static_cast<std::size_t>(i) * in_width + (c - i + kl_)];
        }
    }

    // Row interchanges widen U to kl + ku super-diagonals.
    const int uw = kl_ + ku_;
    for (int k = 0; k < n_; ++k) {
        const int last_row = std::min(n_ - 1, k + kl_);
        const int last_col = std::min(n_ - 1, k + uw);
        int p = k;
        double best = std::abs(at(k, k));
        for (int r = k + 1; r <= last_row; ++r) {
            if (std::abs(at(r, k)) > best) {
                best = std::abs(at(r, k));
                p = r;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best)) {
            throw SingularMatrixError("banded LU: zero pivot in column " + std::to_string(k));
        }
        pivot_[static_cast<std::size_t>(k)] = p;
        if (p != k) {
            for (int c = k; c <= last_col; ++c) std::swap(at(k, c), at(p, c));
        }
        const double inv = 1.0 / at(k, k);
        for (int r = k + 1; r <= last_row; ++r) {
            const double l = at(r, k) * inv;
            at(r, k) = l;
            if (l == 0.0) continue;
            for (int c = k + 1; c <= last_col; ++c) at(r, c) -= l * at(k, c);
        }
    }
}

void BandLU::solve_in_place(std::span<double> x) const {
    const int uw = kl_ + ku_;
    for (int k = 0; k < n_; ++k) {
        const int p = pivot_[static_cast<std::size_t>(k)];
        if (p != k) std::swap(x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(p)]);
        const double xk = x[static_cast<std::size_t>(k)];
        for (int r = k + 1; r <= std::min(n_ - 1, k + kl_); ++r) {
            x[static_cast<std::size_t>(r)] -= at(r, k) * xk;
        }
    }
    for (int k = n_ - 1; k >= 0; --k) {
        double v = x[static_cast<std::size_t>(k)];
        for (int c = k + 1; c <= std::min(n_ - 1, k + uw); ++c) {
            v -= at(k, c) * x[static_cast<std::size_t>(c)];
        }
        x[static_cast<std::size_t>(k)] = v / at(k, k);
    }
}

void dense_solve(std::vector<double>& a, std::vector<double>& b, int n) {
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int r = k + 1; r < n; ++r) {
            if (std::abs(a[r * n + k]) > std::abs(a[p * n + k])) p = r;
        }
        const double piv = a[p * n + k];
        if (!(std::abs(piv) > 0.0) || !std::isfinite(piv)) {
            throw SingularMatrixError("dense solve: zero pivot in column " + std::to_string(k));
        }
        if (p != k) {
            for (int c = 0; c < n; ++c) std::swap(a[k * n + c], a[p * n + c]);
            std::swap(b[k], b[p]);
        }
        for (int r = k + 1; r < n; ++r) {
            const double l = a[r * n + k] / a[k * n + k];
            for (int c = k; c < n; ++c) a[r * n + c] -= l * a[k * n + c];
            b[r] -= l * b[k];
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        double v = b[k];
        for (int c = k + 1; c < n; ++c) v -= a[k * n + c] * b[c];
        b[k] = v / a[k * n + k];
    }
}

}  // namespace vesicle
