#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include <json.hpp>

#include "core/block_operator.hpp"
#include "core/hspace.hpp"
#include "core/mourre.hpp"
#include "core/spectra.hpp"

namespace mbspec {

using json = nlohmann::json;

// Doubles in JSON; infinities become the strings "+inf" / "-inf".
json number(double v);
double number_from(const json& j);

// "# sector,<label>,<offset>,<dim>" lines, then one "re,im" row per coefficient.
void write_state_csv(std::ostream& os, const StateVector& v);
StateVector read_state_csv(std::istream& is, std::shared_ptr<const SectorTable> table);

// "# dim <N> nnz <M>" then "row col re im" per stored entry, row-major.
void write_operator_coo(std::ostream& os, const BlockOperator& a);
// Real parts then imaginary parts as two comma-separated blocks.
void write_operator_dense_csv(std::ostream& os, const BlockOperator& a, std::size_t cap);

void write_spectrum_csv(std::ostream& os, const SpectrumResult& r);
json to_json(const SpectrumResult& r);
json to_json(const HvzResult& r, const AxisUniverse& universe);
json to_json(const ThresholdData& t, const AxisUniverse& universe);

// Shortest round-trip text for a double.
std::string format_double(double v);

}  // namespace mbspec
