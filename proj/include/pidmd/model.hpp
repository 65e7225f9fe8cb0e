#ifndef PIDMD_MODEL_HPP
#define PIDMD_MODEL_HPP

#include <variant>

#include "pidmd/causal.hpp"
#include "pidmd/exact_dmd.hpp"
#include "pidmd/local.hpp"
#include "pidmd/selfadjoint.hpp"
#include "pidmd/shift_invariant.hpp"
#include "pidmd/unitary.hpp"

namespace pidmd {

// Operator with no exploitable structure: a regularized local fit or a
// deserialized matrix.
struct DenseModel {
  Matrix op;
};

using PiDmdModel = std::variant<ExactDmdModel, CirculantModel, ToeplitzModel, UnitaryModel,
                                SymmetricModel, BandedModel, TriangularModel, DenseModel>;

}  // namespace pidmd

#endif  // PIDMD_MODEL_HPP
