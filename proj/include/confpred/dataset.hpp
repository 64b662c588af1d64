#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "confpred/example.hpp"

namespace confpred {

// Rectangular csv table with a header row plus optional sidecar metadata.
// All cells are kept as trimmed text; numeric conversion happens on demand so
// that error messages can point at the offending row and column.
struct Dataset {
  std::string name;                            // basename used in messages
  std::vector<std::string> columns;            // header cells
  std::vector<std::vector<std::string>> rows;  // data cells, row-major

  // sidecar metadata (empty / zero when unspecified)
  std::string label_column;
  std::string label_kind;  // "real", "categorical", or ""
  double grid_step = 0.0;
  double grid_origin = 0.0;

  bool has_grid() const { return grid_step > 0.0; }
};

// Parses csv text (and optional metadata json) already in memory.
Dataset ingest_text(const std::string& csv_text, const std::string& meta_text,
                    const std::string& name);

// Reads <path> and, when present, the sidecar <path minus .csv>.meta.json.
Dataset ingest(const std::string& path);

// Serializes header plus rows; ingest_text(emit(d), "", d.name) restores the
// table exactly.
std::string emit(const Dataset& d);

// Index of a named column; throws InputError listing the available names.
std::size_t column_index(const Dataset& d, const std::string& column);

// Parses one column as real numbers.
std::vector<double> numeric_column(const Dataset& d, const std::string& column);

// Builds examples with the given label column and feature columns (empty
// feature list means every other column, in header order).  The label kind is
// taken from the metadata when set, otherwise inferred: a column whose cells
// all parse as numbers is treated as real-valued.
std::vector<Example> to_examples(const Dataset& d, const std::string& label_column,
                                 const std::vector<std::string>& features = {});

}  // namespace confpred
