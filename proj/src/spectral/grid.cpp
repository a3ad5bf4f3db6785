#include "egwp/spectral/grid.hpp"

#include <stdexcept>
#include <string>

#include "egwp/error.hpp"

namespace egwp::spectral {

FourierGrid::FourierGrid(int n) : FourierGrid(n, n / 3) {}

FourierGrid::FourierGrid(int n, int dealias_cutoff) : n_(n), cutoff_(dealias_cutoff) {
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("FourierGrid: N must be even and >= 8, got " + std::to_string(n));
  if (dealias_cutoff < 1 || dealias_cutoff > n / 2)
    throw std::invalid_argument("FourierGrid: dealias cutoff must lie in [1, N/2], got " +
                                std::to_string(dealias_cutoff));
}

void require_same_grid(const FourierGrid& a, const FourierGrid& b, const char* context) {
  if (a != b)
    throw GridMismatch(std::string(context) + ": grid mismatch (N=" + std::to_string(a.size()) +
                       " vs N=" + std::to_string(b.size()) + ")");
}

}  // namespace egwp::spectral
