#pragma once

#include <cstdint>
#include <vector>

#include "qsync/kinds.hpp"

namespace qsync {

// Per (cell, quadrature) product statistics. A cell is a distribution
// sequence for the GHZ protocol and a party for the pairs/Dicke protocols.
// Counts and sums are integers, so merging is exact and order-free.
class FringeAccumulator {
public:
    FringeAccumulator() = default;
    explicit FringeAccumulator(std::size_t num_cells);

    void add(std::size_t cell, Quadrature q, int product);
    void merge(const FringeAccumulator& other);

    std::int64_t count(std::size_t cell, Quadrature q) const;
    std::int64_t sum(std::size_t cell, Quadrature q) const;
    std::size_t num_cells() const { return num_cells_; }
    std::int64_t total_count() const;

    bool operator==(const FringeAccumulator&) const = default;

private:
    std::size_t plane(std::size_t cell, Quadrature q) const;

    std::size_t num_cells_ = 0;
    std::vector<std::int64_t> count_;
    std::vector<std::int64_t> sum_;
};

} // namespace qsync
