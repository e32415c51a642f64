#pragma once

// Promela export of a design/requirement pair for cross-checking with SPIN.

#include <string>

#include "splv/fsmv.hpp"

namespace splv {

/// Environment, both machines as processes with absorbing error flags, a random
/// initialisation of both configurations filtered by the global predicates, and
/// the never claim for []<>(!des_error && req_error).
std::string emit_promela(const FsmvMachine& des, const FsmvMachine& req);

}  // namespace splv
