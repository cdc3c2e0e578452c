#pragma once

#include <span>
#include <vector>

namespace vesicle {

/// Square matrix of the form
///
///     [ A  B ]      A: n x n banded (kl sub-, ku super-diagonals)
///     [ C  D ]      B: n x k, C: k x n, D: k x k dense (k small)
///
/// solved by banded LU of A with partial pivoting and a dense Schur
/// complement for the k border unknowns. Row/column indices run over the
/// full (n + k) system; the border occupies the last k indices.
class BorderedBandMatrix {
public:
    BorderedBandMatrix(int core_size, int lower, int upper, int border);

    int size() const { return n_ + k_; }
    int core_size() const { return n_; }
    int border_size() const { return k_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    /// Adds to entry (row, col). Core-core entries outside the band throw.
    void add(int row, int col, double value);

    /// Entry (row, col); zero outside the sparsity pattern.
    double at(int row, int col) const;

    bool in_pattern(int row, int col) const;

    /// Solves M x = rhs. Throws SingularMatrixError on a zero pivot.
    std::vector<double> solve(std::span<const double> rhs) const;

private:
    int n_, kl_, ku_, k_;
    std::vector<double> band_;    // row-major, width kl + ku + 1, offset kl
    std::vector<double> right_;   // B, n x k row-major
    std::vector<double> bottom_;  // C, k x n row-major
    std::vector<double> corner_;  // D, k x k row-major
};

/// LU factors of a banded matrix with row pivoting, LAPACK gbtrf layout
/// reduced to what the solver needs.
class BandLU {
public:
    BandLU(int n, int lower, int upper, std::span<const double> band);

    void solve_in_place(std::span<double> x) const;

private:
    double& at(int row, int col) { return lu_[row * width_ + (col - row + kl_)]; }
    double at(int row, int col) const { return lu_[row * width_ + (col - row + kl_)]; }

    int n_, kl_, ku_, width_;
    std::vector<double> lu_;
    std::vector<int> pivot_;
};

/// Dense LU solve for small systems (partial pivoting). Overwrites both.
void dense_solve(std::vector<double>& a, std::vector<double>& b, int n);

}  // namespace vesicle
