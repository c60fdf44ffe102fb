#pragma once

#include "codesim/vectorspace.hpp"

#include <array>

namespace codesim {

// The three similarity scores for one submission pair. The order
// (sim_ab, sim_at, sim_bt) is fixed; the classifier indexes features by
// position.
struct PairFeatures {
    double sim_ab = 0.0;  // submission A vs submission B
    double sim_at = 0.0;  // submission A vs instructor template
    double sim_bt = 0.0;  // submission B vs instructor template

    static constexpr int kCount = 3;

    double feature(int index) const {
        return index == 0 ? sim_ab : index == 1 ? sim_at : sim_bt;
    }

    std::array<double, 3> as_array() const { return {sim_ab, sim_at, sim_bt}; }
};

// All three vectors must come from the same fitted TfidfModel. A missing
// template is represented by the empty vector, which degrades sim_at and
// sim_bt to 0.
PairFeatures extract_pair_features(const SparseVector& a, const SparseVector& b,
                                   const SparseVector& template_vector);

}  // namespace codesim
