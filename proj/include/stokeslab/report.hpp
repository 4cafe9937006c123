#pragma once

#include <string>

#include "stokeslab/analysis.hpp"

namespace stokeslab {

extern const char* kVersion;

// column order: level,h,dofs,<quantities...>,eoc_<quantity>...; eoc entries
// are blank on the first row. Numbers are printed with %.12g so identical
// runs produce byte-identical files.
std::string to_csv(const ExperimentResult& r);
// same data keyed by experiment id, with the effective config and version
std::string to_json(const ExperimentResult& r);
// aligned console table
std::string render_table(const ExperimentResult& r);

void write_file(const std::string& path, const std::string& content);

}  // namespace stokeslab
