#include "sqn/curvature.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "sqn/errors.hpp"

namespace sqn {

CurvaturePair::CurvaturePair(Vec s_in, Vec y_bar_in) : s(std::move(s_in)), y_bar(std::move(y_bar_in)) {
    if (s.empty() || s.size() != y_bar.size()) {
        throw InvalidInputError("CurvaturePair: s and y_bar must share a dimension >= 1");
    }
    if (!all_finite(s) || !all_finite(y_bar)) {
        throw InvalidInputError("CurvaturePair: non-finite entries");
    }
    const double curv = kern::dot(s, y_bar);
    rho = 1.0 / curv;
    if (!(curv > 0.0) || !std::isfinite(rho)) {
        throw InvalidInputError("CurvaturePair: curvature s . y_bar = " + std::to_string(curv) +
                                " violates positivity");
    }
}

CurvatureMemory::CurvatureMemory(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw InvalidInputError("CurvatureMemory: capacity must be >= 1");
    slots_.reserve(capacity);
}

void CurvatureMemory::push(CurvaturePair pair) {
    if (dim_ != 0 && pair.s.size() != dim_) {
        throw InvalidInputError("CurvatureMemory: pair dimension " + std::to_string(pair.s.size()) +
                                " does not match stored dimension " + std::to_string(dim_));
    }
    dim_ = pair.s.size();
    if (count_ < capacity_) {
        slots_.push_back(std::move(pair));
        ++count_;
    } else {
        slots_[head_] = std::move(pair);
        head_ = (head_ + 1) % capacity_;
    }
}

const CurvaturePair& CurvatureMemory::pair(std::size_t i) const {
    if (i >= count_) throw InvalidInputError("CurvatureMemory: pair index out of range");
    return slots_[(head_ + i) % capacity_];
}

void CurvatureMemory::clear() noexcept {
    slots_.clear();
    head_ = 0;
    count_ = 0;
    dim_ = 0;
}

}  // namespace sqn
