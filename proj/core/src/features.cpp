#include "codesim/features.hpp"

namespace codesim {

PairFeatures extract_pair_features(const SparseVector& a, const SparseVector& b,
                                   const SparseVector& template_vector) {
    PairFeatures f;
    f.sim_ab = cosine(a, b);
    f.sim_at = cosine(a, template_vector);
    f.sim_bt = cosine(b, template_vector);
    return f;
}

}  // namespace codesim
