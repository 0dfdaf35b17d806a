#ifndef MAXPLUS_IO_HPP
#define MAXPLUS_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "maxplus/graph.hpp"
#include "maxplus/model.hpp"
#include "maxplus/verifier.hpp"

namespace maxplus {

using Json = nlohmann::ordered_json;

// Shortest representation that parses back to the same double.
std::string format_double(double v);
std::string format_scalar(TropicalScalar t);  // "-inf" for bottom

Json scalar_to_json(TropicalScalar t);
TropicalScalar scalar_from_json(const Json& j);

Json matrix_to_json(const TropicalMatrix& a);
TropicalMatrix matrix_from_json(const Json& j);

Json model_to_json(const MatrixModel& model);
MatrixModel model_from_json(const Json& j);

MatrixModel load_model_file(const std::string& path);

// Emission with a fixed key order; parse(canonical_model_text(m)) round-trips
// to the identical text.
std::string canonical_model_text(const MatrixModel& model);

// CSV table: component,gamma_round,gamma_square,stderr,method
void write_exponent_csv(std::ostream& os, const ComponentDecomposition& decomp);

// CSV trajectory of x(n,0): columns n,x_1..x_d, one row per step including 0.
// No re-centering, so rows satisfy the plain recursion for the logged stream.
void write_trajectory_csv(std::ostream& os, const MatrixModel& model, long horizon,
                          uint64_t replicate);

Json estimate_to_json(const ExponentEstimate& e);
Json decomposition_to_json(const ComponentDecomposition& decomp, const MatrixModel& model);
Json limit_to_json(const LimitPrediction& limit);
Json hypotheses_to_json(const std::vector<HypothesisEntry>& entries);
Json verdict_to_json(const VerdictReport& v);
Json diagnostics_to_json(const ConvergenceDiagnostics& d);
Json chain_to_json(const ChainReport& c);
Json consistency_to_json(const ConsistencyReport& c);
Json report_to_json(const AnalysisReport& rep);

}  // namespace maxplus

#endif
