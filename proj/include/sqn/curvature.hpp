#pragma once

#include <cstddef>
#include <vector>

#include "sqn/vec_ops.hpp"

namespace sqn {

/// One limited-memory entry: iterate displacement s, (damped) gradient
/// displacement y_bar, and rho = 1 / (s . y_bar). The constructor enforces
/// the curvature condition s . y_bar > 0 with finite rho.
struct CurvaturePair {
    Vec s;
    Vec y_bar;
    double rho;

    CurvaturePair(Vec s_in, Vec y_bar_in);
};

/// Bounded FIFO of the most recent curvature pairs; pushing when full evicts
/// the oldest. All stored pairs share one dimension.
class CurvatureMemory {
  public:
    explicit CurvatureMemory(std::size_t capacity);

    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }
    /// Dimension of the stored pairs; 0 while empty.
    std::size_t dim() const noexcept { return dim_; }

    void push(CurvaturePair pair);

    /// i = 0 is the oldest retained pair, i = size()-1 the newest.
    const CurvaturePair& pair(std::size_t i) const;

    void clear() noexcept;

  private:
    std::size_t capacity_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
    std::size_t dim_ = 0;
    std::vector<CurvaturePair> slots_;
};

}  // namespace sqn
