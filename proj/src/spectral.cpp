#include "spincorr/spectral.hpp"

#include <Eigen/Dense>
#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

#include "spincorr/kernels.hpp"

namespace spincorr {

namespace {

using EigenRowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Two independent FNV-1a style digests over the raw matrix bytes. The pair,
// together with the dimension, keys the spectral cache; 128 hash bits make
// an accidental collision implausible at desk scale.
std::pair<uint64_t, uint64_t> content_digest(const CMat& m) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(m.a.data());
    const size_t n = m.a.size() * sizeof(cplx);
    uint64_t h1 = 14695981039346656037ull;
    uint64_t h2 = 10650232656628343401ull;
    for (size_t i = 0; i < n; ++i) {
        h1 = (h1 ^ bytes[i]) * 1099511628211ull;
        h2 = (h2 ^ bytes[i]) * 1099511628211ull;
        h2 ^= h2 >> 29;
    }
    return {h1, h2};
}

using CacheKey = std::tuple<int, uint64_t, uint64_t>;

std::mutex g_cache_mutex;
std::map<CacheKey, std::shared_ptr<const Eigensystem>> g_cache;

}  // namespace

Eigensystem decompose_hermitian(const CMat& h) {
    require_hermitian(h, 1e-12);
    const int n = h.rows;
    Eigen::Map<const EigenRowMat> mapped(h.a.data(), n, n);
    Eigen::SelfAdjointEigenSolver<EigenRowMat> solver(mapped);
    if (solver.info() != Eigen::Success) throw ContractViolation("Hermitian eigendecomposition failed to converge");

    Eigensystem es;
    es.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    es.eigenvectors = CMat(n, n);
    const EigenRowMat vecs = solver.eigenvectors();
    std::memcpy(es.eigenvectors.a.data(), vecs.data(), static_cast<size_t>(n) * n * sizeof(cplx));
    return es;
}

std::shared_ptr<const Eigensystem> hermitian_eigensystem(const CMat& h) {
    const auto [h1, h2] = content_digest(h);
    const CacheKey key{h.rows, h1, h2};
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = g_cache.find(key);
        if (it != g_cache.end()) return it->second;
    }
    auto es = std::make_shared<const Eigensystem>(decompose_hermitian(h));
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto [it, inserted] = g_cache.emplace(key, std::move(es));
    return it->second;
}

void spectral_cache_clear() {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    g_cache.clear();
}

std::size_t spectral_cache_size() {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    return g_cache.size();
}

CMat evolution_matrix(const Eigensystem& es, double t) {
    const int n = es.eigenvectors.rows;
    CVec phases(n);
    for (int k = 0; k < n; ++k) phases[k] = std::exp(cplx(0.0, -es.eigenvalues[k] * t));
    // V diag(phases) V+
    CMat scaled = es.eigenvectors;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) scaled(r, c) *= phases[c];
    return kernels::matmul(scaled, adjoint(es.eigenvectors));
}

Operator evolution_unitary(const Operator& h, double t) {
    auto es = hermitian_eigensystem(h.entries);
    return Operator(h.layout, evolution_matrix(*es, t));
}

Propagator::Propagator(const Operator& h) : layout_(h.layout), es_(hermitian_eigensystem(h.entries)) {}

CVec Propagator::to_eigenbasis(const CVec& amps) const { return kernels::matvec_adj(es_->eigenvectors, amps); }

CVec Propagator::from_eigenbasis(const CVec& coords) const { return kernels::matvec(es_->eigenvectors, coords); }

void Propagator::phase_in_eigenbasis(CVec& coords, double t) const {
    for (size_t k = 0; k < coords.size(); ++k) coords[k] *= std::exp(cplx(0.0, -es_->eigenvalues[k] * t));
}

CVec Propagator::evolve_raw(const CVec& amps, double t) const {
    CVec coords = to_eigenbasis(amps);
    phase_in_eigenbasis(coords, t);
    return from_eigenbasis(coords);
}

StateVector Propagator::evolve(const StateVector& psi, double t) const {
    require_same_layout(layout_, psi.layout, "Propagator::evolve");
    return StateVector(psi.layout, evolve_raw(psi.amplitudes, t));
}

Operator Propagator::unitary(double t) const { return Operator(layout_, evolution_matrix(*es_, t)); }

}  // namespace spincorr
