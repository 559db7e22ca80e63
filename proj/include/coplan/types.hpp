#pragma once

#include <Eigen/Core>
#include <vector>

namespace coplan {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;

/// Half-open contiguous index range [start, start + size).
struct IndexRange {
    Index start = 0;
    Index size = 0;

    [[nodiscard]] Index end() const { return start + size; }
    [[nodiscard]] bool contains(Index i) const { return i >= start && i < end(); }
    [[nodiscard]] bool overlaps(const IndexRange& other) const {
        return start < other.end() && other.start < end();
    }
    [[nodiscard]] IndexList indices() const {
        IndexList out(static_cast<std::size_t>(size));
        for (Index k = 0; k < size; ++k) out[static_cast<std::size_t>(k)] = start + k;
        return out;
    }
};

} // namespace coplan
