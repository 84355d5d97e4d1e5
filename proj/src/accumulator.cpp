#include "qsync/accumulator.hpp"

#include <string>

#include "qsync/errors.hpp"

namespace qsync {

FringeAccumulator::FringeAccumulator(std::size_t num_cells)
    : num_cells_(num_cells),
      count_(2 * num_cells, 0),
      sum_(2 * num_cells, 0) {}

std::size_t FringeAccumulator::plane(std::size_t cell, Quadrature q) const {
    if (cell >= num_cells_) {
        throw DimensionError("accumulator cell " + std::to_string(cell) +
                             " out of range (" + std::to_string(num_cells_) +
                             " cells)");
    }
    return cell + (q == Quadrature::SINE ? num_cells_ : 0);
}

void FringeAccumulator::add(std::size_t cell, Quadrature q, int product) {
    if (product != 1 && product != -1) {
        throw DimensionError("accumulator product must be +-1, got " +
                             std::to_string(product));
    }
    const std::size_t p = plane(cell, q);
    ++count_[p];
    sum_[p] += product;
}

void FringeAccumulator::merge(const FringeAccumulator& other) {
    if (other.num_cells_ != num_cells_) {
        throw DimensionError("cannot merge accumulators of " +
                             std::to_string(num_cells_) + " and " +
                             std::to_string(other.num_cells_) + " cells");
    }
    for (std::size_t i = 0; i < count_.size(); ++i) {
        count_[i] += other.count_[i];
        sum_[i] += other.sum_[i];
    }
}

std::int64_t FringeAccumulator::count(std::size_t cell, Quadrature q) const {
    return count_[plane(cell, q)];
}

std::int64_t FringeAccumulator::sum(std::size_t cell, Quadrature q) const {
    return sum_[plane(cell, q)];
}

std::int64_t FringeAccumulator::total_count() const {
    std::int64_t t = 0;
    for (auto c : count_) t += c;
    return t;
}

} // namespace qsync
