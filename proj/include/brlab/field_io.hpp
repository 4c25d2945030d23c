#pragma once

#include <iosfwd>
#include <string>

#include "brlab/grid.hpp"

namespace brlab {

// Text format: "field n=<n> N=<N> L=<L>" then N^n lines "re,im", row-major.
void write_field(std::ostream& os, const SampledField& f);
SampledField read_field(std::istream& is);

void save_field(const std::string& path, const SampledField& f);
SampledField load_field(const std::string& path);

}  // namespace brlab
