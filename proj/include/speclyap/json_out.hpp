#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "speclyap/sym_matrix.hpp"

namespace speclyap::out {

/// Ordered JSON document used for run outputs.
using Value = nlohmann::ordered_json;

/// 17 significant digits, so reruns compare bytewise and values round-trip;
/// non-finite values become null.
std::string format_double(double d);

/// Pretty-prints with numeric rows kept on one line.
std::string dump(const Value& v, int indent = 2);

/// Flattens to CSV lines "field,row,col,value": matrices as (row, col, value)
/// triples, vectors as (index, , value), scalars as ( , , value).
std::string to_csv(const Value& v);

Value matrix(const SymMatrix& m);
Value vector(const std::vector<double>& v);

}  // namespace speclyap::out
