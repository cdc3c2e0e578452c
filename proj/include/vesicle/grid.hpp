#pragma once

#include <cstddef>
#include <vector>

namespace vesicle {

/// Uniform cell-centered mesh of the unit interval.
///
/// Cells are indexed j = 0..m-1 with centers (j + 1/2) h; faces are indexed
/// 0..m with face j at x = j h. Face 0 is the soma end, face m the growth cone.
class Grid {
public:
    explicit Grid(int cells);

    int cells() const { return cells_; }
    int faces() const { return cells_ + 1; }
    double width() const { return width_; }
    double center(int cell) const { return (cell + 0.5) * width_; }
    double face(int index) const { return index * width_; }

    bool operator==(const Grid& other) const = default;

private:
    int cells_;
    double width_;
};

/// Cell averages of the two volume fractions.
struct FieldState {
    std::vector<double> u1;
    std::vector<double> u2;

    static FieldState uniform(const Grid& grid, double u1, double u2);

    std::size_t size() const { return u1.size(); }
    double u0(std::size_t cell) const { return 1.0 - u1[cell] - u2[cell]; }

    /// Throws DomainError if sizes do not match the grid or any cell lies
    /// outside {u1 >= 0, u2 >= 0, u1 + u2 <= 1} by more than `slack`.
    void validate(const Grid& grid, double slack = 0.0) const;
};

}  // namespace vesicle
