#include "surfstokes/fem/element_cache.hpp"

#include "surfstokes/parallel.hpp"

namespace surfstokes::fem {

GeometryCache::GeometryCache(const mesh::CurvedMesh& mesh, QuadratureRule rule, int threads)
    : rule_(std::move(rule)), num_elements_(mesh.num_elements()) {
    const int nq = rule_.size();
    points_.resize(static_cast<std::size_t>(num_elements_) * nq);
    parallel_for(num_elements_, threads, [&](int begin, int end) {
        for (int t = begin; t < end; ++t)
            for (int q = 0; q < nq; ++q) points_[t * nq + q] = mesh.element_geometry(t, rule_.points[q]);
    });
}

BasisTable::BasisTable(const ReferenceElement& ref, const QuadratureRule& rule)
    : num_basis_(ref.num_nodes()) {
    values_.resize(rule.size());
    grads_.resize(rule.size());
    for (int q = 0; q < rule.size(); ++q) ref.eval(rule.points[q], values_[q], grads_[q]);
}

void BasisTable::eval(int q, const mesh::ElementPoint& geo, BasisAtPoint& out) const {
    out.values = values_[q];
    out.grads.noalias() = grads_[q] * geo.pinv_t.transpose();
}

}  // namespace surfstokes::fem
