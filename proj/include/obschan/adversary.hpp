#pragma once

#include <memory>
#include <string>

#include "obschan/circuit.hpp"
#include "obschan/code.hpp"

namespace obschan {

/// One attacker: picks the observation circuit, then picks an error of weight
/// at most pn from what the circuit showed. Strategies hold no mutable state
/// between invocations; anything random flows through the supplied Rng (fixed
/// choices like a wiretap's index set are drawn once at construction).
class AdversaryStrategy {
public:
    virtual ~AdversaryStrategy() = default;

    virtual const std::string& name() const = 0;

    /// True for diagnostic genie strategies whose error chooser is handed the
    /// transmitted word itself instead of the circuit output.
    virtual bool genie_observation() const { return false; }

    virtual Circuit choose_circuit(const ConcatenatedCode& code, Rng& rng) = 0;

    virtual BitWord choose_error(const ConcatenatedCode& code, const Circuit& f,
                                 const BitWord& psi, Rng& rng) = 0;
};

/// Strategy spec strings:
///   "oblivious"             constant circuit, uniform weight-pn error
///   "wiretap:<j1,j2,...>"   fixed projection on the listed input positions
///   "wiretap:random"        fixed projection drawn once from setup_rng
///   "erasure"               fresh random projection every invocation
///   "bisector:genie"        nearest-codeword midpoint; needs r = 1
///   "bisector:compressed"   midpoint behind a ball-volume feasibility census
///   "omniscient"            exhaustive error search; needs r = 1
std::unique_ptr<AdversaryStrategy> make_strategy(const std::string& spec,
                                                 const SystemParams& params, Rng& setup_rng);

/// Uniform error of weight exactly pn_budget; shared fallback.
BitWord oblivious_error(const SystemParams& params, Rng& rng);

}  // namespace obschan
