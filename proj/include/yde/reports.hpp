#pragma once

#include <string>

#include "yde/lyapunov.hpp"
#include "yde/solver.hpp"
#include "yde/stochastic.hpp"
#include "yde/triangular.hpp"

namespace yde {

/* JSON serialization of the report types.  Non-finite values (the -infinity
 * exponent sentinel) serialize as null, the one thing JSON offers; CSV output
 * keeps them as "-inf".  Key order is fixed, so identical reports are
 * byte-identical documents. */
std::string to_json(const SolveReport& rep);         // solution path excluded (CSV)
std::string to_json(const SpectrumEstimate& est);    // series excluded (CSV)
std::string to_json(const RegularityReport& rep);
std::string to_json(const AssumptionReport& rep);
std::string to_json(const EnsembleSpectrum& ens);
std::string to_json(const IntegrabilityStat& stat);
std::string to_json(const MomentProbe& probe);
std::string to_json(const TriangularSpectrum& spec);
std::string to_json(const DiagonalMeans& means);

// Header: t, logdet_rate, lambda_1..lambda_d; one row per checkpoint, %.17g.
void write_exponent_series_csv(const ExponentSeries& series, const std::string& file);

void write_text(const std::string& file, const std::string& content);

}  // namespace yde
