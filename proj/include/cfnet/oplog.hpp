// oplog.hpp
// Flat trace of protocol operations, used to check run structure
// (gate counts, measurement counts, site assignment) after the fact.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cfnet {

enum class OpKind {
    prep_gate,     // state preparation gate
    cf_cnot,       // chained-exchange controlled NOT
    bell_measure,  // full Bell measurement (electron pair)
    lobm,          // linear-optics Bell measurement (photon pair)
    comp_measure,  // computational readout
};

struct OpRecord {
    OpKind kind = OpKind::prep_gate;
    std::vector<int> qubits;  // ids in the acting order
    std::string site;         // node the operation runs at
    std::string outcome;      // e.g. "psi+", "0", "fail"
};

using OpLog = std::vector<OpRecord>;

inline std::size_t count_ops(const OpLog& log, OpKind kind) {
    std::size_t n = 0;
    for (const auto& r : log)
        if (r.kind == kind) ++n;
    return n;
}

} // namespace cfnet
