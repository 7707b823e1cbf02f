// repeater.hpp
// Chain of interaction-free gate segments with entanglement swapping.
//
// A chain of order n puts 2n+1 nodes between Alice and Bob. Odd nodes
// C1, C3, ..., C_{2n+1} each hold an electron pair; even nodes C2, ...,
// C_{2n} each hold a photon pair; Alice and Bob hold one photon each.
// Every odd node entangles its electrons, then gates one photon flying
// toward Alice and one flying toward Bob (2n+2 gates in total), and reads
// its electron pair out in the Bell basis. Each even node receives one
// photon from either side and swaps them with a linear-optics Bell
// measurement; only the two cross-polarized outcomes are heralded, so each
// swap succeeds with probability 1/2. What survives is an entangled pair
// shared by Alice and Bob.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cfnet/bell.hpp"
#include "cfnet/cf_gate.hpp"
#include "cfnet/oplog.hpp"
#include "cfnet/protocol.hpp"
#include "cfnet/rng.hpp"
#include "cfnet/state.hpp"

namespace cfnet {

// dense trials keep the whole chain in one register; 4n+4 qubits
inline constexpr std::size_t kMaxChainOrder = 3;
// closed-form evaluators only
inline constexpr std::size_t kMaxAnalyticOrder = 64;

// register layout, left to right:
//   [Alice.photon, C1.e, C1.e, C2.p, C2.p, C3.e, C3.e, ..., Bob.photon]
struct ChainTopology {
    std::size_t n = 0;
    std::vector<QubitLabel> labels;
    // (electron, photon) register positions, one entry per gate, ordered
    // left to right along the chain
    std::vector<std::pair<std::size_t, std::size_t>> gate_placements;
    // co-located electron pairs at odd nodes
    std::vector<std::pair<std::size_t, std::size_t>> electron_bsm_schedule;
    // co-located photon pairs at even nodes
    std::vector<std::pair<std::size_t, std::size_t>> lobm_schedule;

    std::size_t gates() const { return 2 * n + 2; }
    std::size_t alice_photon() const { return 0; }
    std::size_t bob_photon() const { return 4 * n + 3; }
};

inline ChainTopology build_chain(std::size_t n) {
    if (n > kMaxChainOrder)
        throw std::out_of_range("build_chain: order exceeds the dense cap");
    ChainTopology t;
    t.n = n;
    int id = 0;
    t.labels.push_back({id++, Role::photon, "Alice"});
    for (std::size_t node = 1; node <= 2 * n + 1; ++node) {
        const std::string owner = "C" + std::to_string(node);
        const Role role = node % 2 == 1 ? Role::electron : Role::photon;
        t.labels.push_back({id++, role, owner});
        t.labels.push_back({id++, role, owner});
    }
    t.labels.push_back({id++, Role::photon, "Bob"});

    // odd node C_{2j+1} holds electrons at 4j+1, 4j+2; its left electron
    // gates the photon toward Alice, its right one the photon toward Bob
    for (std::size_t j = 0; j <= n; ++j) {
        const std::size_t left_e = 4 * j + 1;
        const std::size_t right_e = 4 * j + 2;
        const std::size_t left_p = j == 0 ? t.alice_photon() : 4 * j;
        const std::size_t right_p = j == n ? t.bob_photon() : 4 * j + 3;
        t.gate_placements.push_back({left_e, left_p});
        t.gate_placements.push_back({right_e, right_p});
        t.electron_bsm_schedule.push_back({left_e, right_e});
    }
    // even node C_{2c} holds photons at 4c-1, 4c
    for (std::size_t c = 1; c <= n; ++c)
        t.lobm_schedule.push_back({4 * c - 1, 4 * c});
    return t;
}

// which Bell outcomes the photonic measurement heralds; linear optics can
// tell exactly the two cross-polarized states apart
struct LobmModel {
    std::array<BellState, 2> distinguishable{
        {BellState::phi_plus, BellState::phi_minus}};

    bool resolves(BellState b) const {
        if (distinguishable[0] == distinguishable[1])
            throw std::invalid_argument("LobmModel: outcomes must differ");
        return b == distinguishable[0] || b == distinguishable[1];
    }
};

// broadcast helpers for the two probability families
inline std::vector<double> uniform_gate_probs(std::size_t n, double p) {
    return std::vector<double>(2 * n + 2, p);
}
inline std::vector<double> uniform_node_probs(std::size_t n, double p) {
    return std::vector<double>(2 * n + 1, p);
}

namespace detail {

inline void check_probs(const std::vector<double>& probs, std::size_t want,
                        const char* what) {
    if (probs.size() != want)
        throw std::invalid_argument(std::string(what) + ": expected " +
                                    std::to_string(want) + " entries, got " +
                                    std::to_string(probs.size()));
    for (double p : probs)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument(std::string(what) +
                                        ": entries must lie in [0,1]");
}

// ground every electron, entangle each odd node's pair
inline StateVector chain_prepared_state(const ChainTopology& t, OpLog* log) {
    StateVector s(t.labels);
    auto note = [&](std::size_t q, const char* name) {
        if (log)
            log->push_back({OpKind::prep_gate, {s.label(q).id}, s.label(q).owner, name});
    };
    for (const auto& [a, b] : t.electron_bsm_schedule) {
        s.apply_x(a);
        note(a, "X");
        s.apply_x(b);
        note(b, "X");
    }
    for (const auto& [a, b] : t.electron_bsm_schedule) {
        s.apply_x(a);
        note(a, "X");
        s.apply_h(a);
        note(a, "H");
        s.apply_cnot(a, b);
        if (log)
            log->push_back({OpKind::prep_gate, {s.label(a).id, s.label(b).id},
                            s.label(a).owner, "CNOT"});
        s.apply_x(a);
        note(a, "X");
    }
    return s;
}

} // namespace detail

enum class TrialStatus { success, gate_failure, lobm_failure };

struct TrialResult {
    TrialStatus status = TrialStatus::success;
    double fidelity = 0.0;                // end-to-end pair vs the aligned plus state
    PauliFrame frame;                     // accumulated correction on Bob's photon
    std::vector<BellState> outcomes;      // electron readouts, then photon readouts
    OpLog log;
};

// one sampled pass over the whole chain; gate_probs has one entry per gate
// placement, in placement order
inline TrialResult one_shot_trial(const ChainTopology& t,
                                  const std::vector<double>& gate_probs,
                                  const LobmModel& lobm, RandomStream& rng,
                                  bool record_log = false) {
    detail::check_probs(gate_probs, t.gates(), "gate probabilities");
    TrialResult res;
    OpLog* log = record_log ? &res.log : nullptr;
    StateVector s = detail::chain_prepared_state(t, log);

    for (std::size_t g = 0; g < t.gate_placements.size(); ++g) {
        const auto& [e, p] = t.gate_placements[g];
        if (!cf_cnot(s, e, p, CfGateModel{gate_probs[g]}, rng, log)) {
            res.status = TrialStatus::gate_failure;
            return res;
        }
    }

    PauliFrame frame;
    for (const auto& [a, b] : t.electron_bsm_schedule) {
        const BellState outcome = bell_measure(s, a, b, rng);
        res.outcomes.push_back(outcome);
        frame.merge(frame_from_outcome(outcome));
        if (log)
            log->push_back({OpKind::bell_measure, {s.label(a).id, s.label(b).id},
                            s.label(a).owner, std::string(bell_name(outcome))});
    }

    for (const auto& [a, b] : t.lobm_schedule) {
        const BellState outcome = bell_measure(s, a, b, rng);
        res.outcomes.push_back(outcome);
        if (log)
            log->push_back({OpKind::lobm, {s.label(a).id, s.label(b).id},
                            s.label(a).owner, std::string(bell_name(outcome))});
        if (!lobm.resolves(outcome)) {
            res.status = TrialStatus::lobm_failure;
            return res;
        }
        frame.merge(frame_from_outcome(outcome));
    }

    apply_frame(s, t.bob_photon(), frame);
    res.frame = frame;
    // overlap of the end pair with the aligned plus state; the register is
    // pure and everything else is collapsed, so the projector weight is the
    // pair fidelity
    res.fidelity = bell_probabilities(s, t.alice_photon(), t.bob_photon())[0];
    res.status = TrialStatus::success;
    return res;
}

// counts for a run that reached the end
inline bool chain_structure_ok(const OpLog& log, std::size_t n) {
    return count_ops(log, OpKind::cf_cnot) == 2 * n + 2 &&
           count_ops(log, OpKind::bell_measure) == n + 1 &&
           count_ops(log, OpKind::lobm) == n &&
           count_ops(log, OpKind::prep_gate) == 6 * n + 6;
}

// every two-qubit operation except a placed gate stays inside one node, and
// photon pairs are only ever measured at even nodes
inline bool chain_counterfactual_ok(const OpLog& log, const ChainTopology& t) {
    const auto owner_of = [&](int id) -> const std::string& {
        for (const auto& l : t.labels)
            if (l.id == id) return l.owner;
        throw std::invalid_argument("chain_counterfactual_ok: unknown id");
    };
    const auto role_of = [&](int id) {
        for (const auto& l : t.labels)
            if (l.id == id) return l.role;
        throw std::invalid_argument("chain_counterfactual_ok: unknown id");
    };
    for (const auto& rec : log) {
        if (rec.qubits.size() != 2) continue;
        const int a = rec.qubits[0];
        const int b = rec.qubits[1];
        if (rec.kind == OpKind::cf_cnot) {
            bool placed = false;
            for (const auto& [e, p] : t.gate_placements)
                placed = placed || (t.labels[e].id == a && t.labels[p].id == b);
            if (!placed) return false;
            continue;
        }
        if (owner_of(a) != owner_of(b)) return false;
        if (rec.kind == OpKind::lobm &&
            (role_of(a) != Role::photon || role_of(b) != Role::photon))
            return false;
    }
    return true;
}

struct ChainBranch {
    double probability = 0.0;             // measurement mass, gates held ideal
    bool success = false;                 // every swap heralded
    double corrected_fidelity = 0.0;      // after the frame, success branches only
    std::vector<BellState> outcomes;
};

// walk every measurement outcome of an ideal-gate chain; probabilities sum
// to one and the heralded mass is exactly 2^-n
inline std::vector<ChainBranch> enumerate_trial_branches(const ChainTopology& t,
                                                         const LobmModel& lobm = {}) {
    StateVector start = detail::chain_prepared_state(t, nullptr);
    for (const auto& [e, p] : t.gate_placements) cf_cnot_ideal(start, e, p);

    std::vector<std::pair<std::size_t, std::size_t>> pairs = t.electron_bsm_schedule;
    pairs.insert(pairs.end(), t.lobm_schedule.begin(), t.lobm_schedule.end());

    std::vector<ChainBranch> out;
    std::vector<BellState> outcomes;

    const auto walk = [&](auto&& self, const StateVector& s, std::size_t depth,
                          double prob, PauliFrame frame) -> void {
        if (depth == pairs.size()) {
            StateVector corrected = s;
            apply_frame(corrected, t.bob_photon(), frame);
            const double fid =
                bell_probabilities(corrected, t.alice_photon(), t.bob_photon())[0];
            out.push_back({prob, true, fid, outcomes});
            return;
        }
        const bool photonic = depth >= t.electron_bsm_schedule.size();
        const auto probs = bell_probabilities(s, pairs[depth].first, pairs[depth].second);
        for (std::size_t k = 0; k < 4; ++k) {
            if (probs[k] <= kAmpTol) continue;
            const BellState outcome = kBellStates[k];
            outcomes.push_back(outcome);
            if (photonic && !lobm.resolves(outcome)) {
                out.push_back({prob * probs[k], false, 0.0, outcomes});
            } else {
                StateVector next = s;
                bell_project(next, pairs[depth].first, pairs[depth].second, outcome);
                PauliFrame f = frame;
                f.merge(frame_from_outcome(outcome));
                self(self, next, depth + 1, prob * probs[k], f);
            }
            outcomes.pop_back();
        }
    };
    walk(walk, start, 0, 1.0, PauliFrame{});
    return out;
}

// heralded mass of the enumeration times the gate success product
inline double exact_success_probability(const ChainTopology& t,
                                        const std::vector<double>& gate_probs,
                                        const LobmModel& lobm = {}) {
    detail::check_probs(gate_probs, t.gates(), "gate probabilities");
    double gates = 1.0;
    for (double p : gate_probs) gates *= p;
    double heralded = 0.0;
    for (const auto& b : enumerate_trial_branches(t, lobm))
        if (b.success) heralded += b.probability;
    return gates * heralded;
}

// ---- closed-form chain figures ----------------------------------------------
// Two distinct probability families, kept apart on purpose: the per-trial
// success rate prices the 2n+2 gates, while the delivery-time formula prices
// the 2n+1 nodes between the end parties.

// per-trial success probability: one factor 1/2 per swap and the product of
// all gate success probabilities
inline double p_eff(std::size_t n, const std::vector<double>& gate_probs) {
    if (n > kMaxAnalyticOrder)
        throw std::out_of_range("p_eff: order exceeds the analytic cap");
    detail::check_probs(gate_probs, 2 * n + 2, "gate probabilities");
    double prod = 1.0;
    for (double p : gate_probs) prod *= p;
    return std::pow(0.5, static_cast<double>(n)) * prod;
}

// mean delivery time in units of L0/c: (3/2)^{2n+1} attempts over the
// product of per-node success probabilities
inline double t_tot_nodes(std::size_t n, const std::vector<double>& node_probs,
                          double L0, double c) {
    if (n > kMaxAnalyticOrder)
        throw std::out_of_range("t_tot_nodes: order exceeds the analytic cap");
    detail::check_probs(node_probs, 2 * n + 1, "node probabilities");
    if (!(L0 > 0.0) || !(c > 0.0))
        throw std::invalid_argument("t_tot_nodes: L0 and c must be positive");
    double prod = 1.0;
    for (double p : node_probs) prod *= p;
    if (prod <= 0.0)
        throw std::domain_error("t_tot_nodes: zero node success probability");
    return std::pow(1.5, static_cast<double>(2 * n + 1)) * (L0 / c) / prod;
}

// the same mean delivery time priced by hardware efficiencies: detector and
// memory efficiency enter 3n+2 times, the coupling efficiency n+1 times
inline double t_tot_eff(std::size_t n, double eta_d, double eta_m, double eta_t,
                        double L0, double c) {
    if (n > kMaxAnalyticOrder)
        throw std::out_of_range("t_tot_eff: order exceeds the analytic cap");
    for (double eta : {eta_d, eta_m, eta_t})
        if (!(eta > 0.0 && eta <= 1.0))
            throw std::domain_error("t_tot_eff: efficiencies must lie in (0,1]");
    if (!(L0 > 0.0) || !(c > 0.0))
        throw std::invalid_argument("t_tot_eff: L0 and c must be positive");
    const double nn = static_cast<double>(n);
    const double num = std::pow(3.0, 2.0 * nn + 1.0) / std::pow(2.0, nn + 1.0);
    const double den = std::pow(eta_d * eta_m, 3.0 * nn + 2.0) *
                       std::pow(eta_t, nn + 1.0);
    return num * (L0 / c) / den;
}

// node probabilities that make the per-node time formula reproduce the
// efficiency formula: the first node carries the whole loss budget
inline std::vector<double> efficiency_matched_probs(std::size_t n, double eta_d,
                                                    double eta_m, double eta_t) {
    if (n > kMaxAnalyticOrder)
        throw std::out_of_range(
            "efficiency_matched_probs: order exceeds the analytic cap");
    for (double eta : {eta_d, eta_m, eta_t})
        if (!(eta > 0.0 && eta <= 1.0))
            throw std::domain_error(
                "efficiency_matched_probs: efficiencies must lie in (0,1]");
    const double nn = static_cast<double>(n);
    std::vector<double> probs(2 * n + 1, 1.0);
    probs[0] = std::pow(0.5, nn) * std::pow(eta_d * eta_m, 3.0 * nn + 2.0) *
               std::pow(eta_t, nn + 1.0);
    return probs;
}

// relative gap between the two time formulas at the matched probabilities
inline double time_formula_residual(std::size_t n, double eta_d, double eta_m,
                                    double eta_t, double L0, double c) {
    const double via_nodes =
        t_tot_nodes(n, efficiency_matched_probs(n, eta_d, eta_m, eta_t), L0, c);
    const double via_eff = t_tot_eff(n, eta_d, eta_m, eta_t, L0, c);
    return std::abs(via_nodes - via_eff) / via_eff;
}

// ---- sampling ----------------------------------------------------------------

struct MonteCarloStats {
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::size_t gate_failures = 0;
    std::size_t lobm_failures = 0;
    double success_rate = 0.0;
    double mean_fidelity = 0.0;   // over heralded successes
    double expected_rate = 0.0;   // closed-form per-trial success probability
    double std_error = 0.0;       // binomial, at the expected rate
    double z_score = 0.0;
};

// fixed-seed trial ensemble. Every trial draws from its own stream derived
// from (seed, trial index), and records are reduced in index order, so the
// result is identical for any thread count.
inline MonteCarloStats monte_carlo(std::size_t n, const std::vector<double>& gate_probs,
                                   const LobmModel& lobm, std::size_t trials,
                                   std::uint64_t seed, std::size_t threads = 1) {
    if (trials == 0)
        throw std::invalid_argument("monte_carlo: at least one trial required");
    if (threads == 0 || threads > 256)
        throw std::invalid_argument("monte_carlo: thread count must lie in [1,256]");
    const ChainTopology topo = build_chain(n);
    detail::check_probs(gate_probs, topo.gates(), "gate probabilities");

    struct Record {
        std::uint8_t status = 0;
        double fidelity = 0.0;
    };
    std::vector<Record> records(trials);

    const auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RandomStream rng(derive_seed(seed, i));
            const TrialResult r = one_shot_trial(topo, gate_probs, lobm, rng, false);
            records[i].status = static_cast<std::uint8_t>(r.status);
            records[i].fidelity = r.fidelity;
        }
    };

    if (threads == 1) {
        worker(0, trials);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < threads; ++w) {
            const std::size_t begin = trials * w / threads;
            const std::size_t end = trials * (w + 1) / threads;
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    MonteCarloStats stats;
    stats.trials = trials;
    double fid_sum = 0.0;
    for (const auto& rec : records) {
        switch (static_cast<TrialStatus>(rec.status)) {
            case TrialStatus::success:
                ++stats.successes;
                fid_sum += rec.fidelity;
                break;
            case TrialStatus::gate_failure: ++stats.gate_failures; break;
            case TrialStatus::lobm_failure: ++stats.lobm_failures; break;
        }
    }
    stats.success_rate = static_cast<double>(stats.successes) / static_cast<double>(trials);
    stats.mean_fidelity =
        stats.successes ? fid_sum / static_cast<double>(stats.successes) : 0.0;
    stats.expected_rate = p_eff(n, gate_probs);
    stats.std_error = std::sqrt(stats.expected_rate * (1.0 - stats.expected_rate) /
                                static_cast<double>(trials));
    if (stats.std_error > 0.0) {
        stats.z_score = (stats.success_rate - stats.expected_rate) / stats.std_error;
    } else {
        stats.z_score =
            stats.success_rate == stats.expected_rate
                ? 0.0
                : std::numeric_limits<double>::infinity();
    }
    return stats;
}

} // namespace cfnet
