#include "lbe/models.hpp"

#include <cmath>

namespace lbe {

namespace {

LindbladModel driven_two_level(const ModelParams& p) {
  p.validate();
  LindbladModel m;
  m.dim = 2;
  m.hamiltonian_terms.push_back({0.5 * bases::sigma_z(), p.epsilon});
  m.hamiltonian_terms.push_back({bases::sigma_x(), DriveSignal::constant(p.J)});
  return m;
}

}  // namespace

void ModelParams::validate() const {
  if (!std::isfinite(J)) throw InvalidInput("ModelParams: J must be finite");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw InvalidInput("ModelParams: Gamma must be finite and >= 0");
  }
}

LindbladModel single_dephasing_model(const ModelParams& p) {
  LindbladModel m = driven_two_level(p);
  m.lindblad_ops.push_back({bases::sigma_z(), DriveSignal::constant(std::sqrt(p.gamma / 2.0))});
  return m;
}

LindbladModel symmetric_pauli_model(const ModelParams& p) {
  LindbladModel m = driven_two_level(p);
  const auto amp = DriveSignal::constant(std::sqrt(p.gamma / 4.0));
  for (const auto& s : bases::pauli().members) m.lindblad_ops.push_back({s, amp});
  return m;
}

LindbladModel three_of_four_model(const ModelParams& p) {
  LindbladModel m = driven_two_level(p);
  m.lindblad_ops.push_back({bases::sigma_plus(), DriveSignal::constant(std::sqrt(p.gamma))});
  m.lindblad_ops.push_back({bases::sigma_z(), DriveSignal::constant(std::sqrt(p.gamma / 4.0))});
  m.lindblad_ops.push_back({ComplexMatrix::Identity(2, 2), DriveSignal::constant(std::sqrt(p.gamma / 4.0))});
  return m;
}

}  // namespace lbe
