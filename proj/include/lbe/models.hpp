#pragma once

// Driven, damped two-level models H = eps(t)/2 sz + J sx with three choices
// of Lindblad operators. Gamma is the decay rate of the coherences in the
// resulting Bloch generator, i.e. L contributes -i Gamma on the diagonal.

#include "lbe/embedding.hpp"

namespace lbe {

/// J: transverse coupling; gamma >= 0; epsilon: longitudinal drive.
struct ModelParams {
  double J = 0.0;
  double gamma = 0.0;
  DriveSignal epsilon;

  void validate() const;
};

/// L = sqrt(Gamma/2) sz. Generator rows [-iG, -eps, 0; -eps, -iG, 2J; 0, 2J, 0].
LindbladModel single_dephasing_model(const ModelParams& p);

/// L_k = sqrt(Gamma/4) s_k, k = x, y, z. Generator -iG I - eps Az + 2J Ax.
LindbladModel symmetric_pauli_model(const ModelParams& p);

/// Three of the four basis operators {I, sz, s+, s-}: sqrt(Gamma) s+,
/// sqrt(Gamma/4) sz and sqrt(Gamma/4) I (the identity drops out of the
/// dissipator). Generator as for the symmetric model plus b = i Gamma (0,0,1).
LindbladModel three_of_four_model(const ModelParams& p);

}  // namespace lbe
