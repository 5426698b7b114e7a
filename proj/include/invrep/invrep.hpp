#pragma once

// SU(d)-invariant and SU(2)-near-invariant subspace toolkit: exact
// representation-theoretic combinatorics, subspace construction, entanglement
// functionals, Haar sampling, and finite-size scaling checks.

#include "invrep/asymptotics.hpp"
#include "invrep/combinat.hpp"
#include "invrep/config.hpp"
#include "invrep/entangle.hpp"
#include "invrep/exact.hpp"
#include "invrep/halfint.hpp"
#include "invrep/montecarlo.hpp"
#include "invrep/numerics.hpp"
#include "invrep/su2rep.hpp"
#include "invrep/sudrep.hpp"
#include "invrep/verify.hpp"

namespace invrep {
inline constexpr const char* kVersion = "0.1.0";
}
