// cf_gate.hpp
// Interaction-free controlled NOT between a trapped electron and a flying
// photon, built from chained-Zeno exchange modules.
//
// Binary encoding used everywhere:
//   electron  |0> = pass   (outer level, mirror transparent)
//             |1> = block  (ground level, mirror reflecting)
//   photon    |0> = H polarization
//             |1> = V polarization
//
// A single exchange module acts on one polarization sector. With the
// electron passing, the matched polarization crosses unchanged and the
// mismatched one is absorbed (heralded loss). With the electron blocking,
// the polarization is toggled. Composing the two module variants yields a
// plain controlled NOT on the lossless subspace.

#pragma once

#include "cfnet/oplog.hpp"
#include "cfnet/rng.hpp"
#include "cfnet/state.hpp"

namespace cfnet {

// which polarization survives the pass branch
enum class CqzeVariant { h_variant, v_variant };

struct CfGateModel {
    // heralded per-gate success; 1.0 reproduces the ideal gate
    double success_probability = 1.0;
};

namespace detail {

inline void require_roles(const StateVector& s, std::size_t e_pos, std::size_t p_pos) {
    if (e_pos == p_pos)
        throw std::invalid_argument("cf gate: electron and photon positions coincide");
    if (s.label(e_pos).role != Role::electron)
        throw std::invalid_argument("cf gate: control must be an electron qubit");
    if (s.label(p_pos).role != Role::photon)
        throw std::invalid_argument("cf gate: target must be a photon qubit");
}

} // namespace detail

// weight of the absorbing branch: electron passing, photon mismatched
inline double cqze_loss_probability(const StateVector& s, std::size_t e_pos,
                                    std::size_t p_pos, CqzeVariant variant) {
    detail::require_roles(s, e_pos, p_pos);
    const std::size_t se = s.stride(e_pos);
    const std::size_t sp = s.stride(p_pos);
    const bool lost_p = variant == CqzeVariant::h_variant;  // p bit on the lost branch
    double p = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i)
        if (!(i & se) && ((i & sp) != 0) == lost_p) p += std::norm(s.amp(i));
    return p;
}

// one exchange module. Samples the absorbing branch; on survival projects it
// out and toggles the photon on the blocking electron sector. Returns false
// when the photon is absorbed (the state is left untouched in that case).
inline bool cqze_map(StateVector& s, std::size_t e_pos, std::size_t p_pos,
                     CqzeVariant variant, RandomStream& rng) {
    detail::require_roles(s, e_pos, p_pos);
    const double p_loss = cqze_loss_probability(s, e_pos, p_pos, variant);
    if (rng.uniform() < p_loss) return false;

    const std::size_t se = s.stride(e_pos);
    const std::size_t sp = s.stride(p_pos);
    const bool lost_p = variant == CqzeVariant::h_variant;
    std::vector<complex_t> next(s.amplitudes());
    for (std::size_t i = 0; i < next.size(); ++i)
        if (!(i & se) && ((i & sp) != 0) == lost_p) next[i] = 0.0;
    StateVector survived(s.labels(), std::move(next));
    survived.renormalize();
    survived.apply_cnot(e_pos, p_pos);
    s = std::move(survived);
    return true;
}

// ideal composite gate: controlled NOT, electron controls the photon
inline void cf_cnot_ideal(StateVector& s, std::size_t e_pos, std::size_t p_pos) {
    detail::require_roles(s, e_pos, p_pos);
    s.apply_cnot(e_pos, p_pos);
}

// modeled gate: heralded Bernoulli failure independent of the state, ideal
// action on success. Returns false on failure (state untouched).
inline bool cf_cnot(StateVector& s, std::size_t e_pos, std::size_t p_pos,
                    const CfGateModel& model, RandomStream& rng,
                    OpLog* log = nullptr) {
    detail::require_roles(s, e_pos, p_pos);
    if (!(model.success_probability >= 0.0 && model.success_probability <= 1.0))
        throw std::invalid_argument("cf gate: success probability must lie in [0,1]");
    const bool ok = rng.uniform() < model.success_probability;
    if (ok) cf_cnot_ideal(s, e_pos, p_pos);
    if (log)
        log->push_back({OpKind::cf_cnot,
                        {s.label(e_pos).id, s.label(p_pos).id},
                        s.label(e_pos).owner,
                        ok ? "ok" : "fail"});
    return ok;
}

} // namespace cfnet
