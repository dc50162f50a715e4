#ifndef QFSC_CHECKS_HPP
#define QFSC_CHECKS_HPP

#include "qfsc/config.hpp"
#include "qfsc/matrix_calc.hpp"
#include "qfsc/qf_martingale.hpp"
#include "qfsc/report.hpp"
#include "qfsc/weyl_word.hpp"

namespace qfsc {

/// Runs the whole cross-module invariant suite on one configuration.
/// Deterministic given (config, seed): every check derives its own random
/// stream from the seed and its name, so the outcome does not depend on
/// check order.
Report runFullSuite(const Config& cfg);

/// Random adapted process: entries supported on the strict past of their
/// bin and on total particle sectors <= max_sector.
AdaptedProcess randomAdaptedProcess(const TimeGrid& grid, const FockSpace& fock,
                                    RngStream& rng, double scale, int max_sector);

/// Random adapted process whose Fock parts are Weyl-built past vectors
/// (norm-controlled exponential content).
AdaptedProcess randomWeylAdaptedProcess(const TimeGrid& grid, const FockSpace& fock,
                                        const PhaseSpaceModel& model, const SigmaMap& sigma,
                                        RngStream& rng, double leg_scale, double arg_norm);

Mat randomUnitary(RngStream& rng, int n);
Mat randomHermitianPsd(RngStream& rng, int n, double scale = 1.0);

}  // namespace qfsc

#endif
