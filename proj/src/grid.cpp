#include "vesicle/grid.hpp"

#include <cmath>
#include <sstream>

#include "vesicle/errors.hpp"

namespace vesicle {

Grid::Grid(int cells) : cells_(cells), width_(1.0 / cells) {
    if (cells < 2) {
        throw DomainError("grid needs at least 2 cells, got " + std::to_string(cells));
    }
}

FieldState FieldState::uniform(const Grid& grid, double u1, double u2) {
    const auto m = static_cast<std::size_t>(grid.cells());
    return FieldState{std::vector<double>(m, u1), std::vector<double>(m, u2)};
}

void FieldState::validate(const Grid& grid, double slack) const {
    const auto m = static_cast<std::size_t>(grid.cells());
    if (u1.size() != m || u2.size() != m) {
        std::ostringstream os;
        os << "field has " << u1.size() << "/" << u2.size() << " cells, grid has " << m;
        throw DomainError(os.str());
    }
    for (std::size_t j = 0; j < m; ++j) {
        const double a = u1[j];
        const double b = u2[j];
        if (!std::isfinite(a) || !std::isfinite(b) || a < -slack || b < -slack ||
            a + b > 1.0 + slack) {
            std::ostringstream os;
            os.precision(17);
            os << "cell " << j << " inadmissible: u1=" << a << " u2=" << b;
            throw DomainError(os.str());
        }
    }
}

}  // namespace vesicle
