#pragma once

#include <filesystem>
#include <iosfwd>

#include "zakharov/field.hpp"

namespace zakharov {

// Binary layout: "ZKF1", int32 dim, int32 points, float64 box_length, then
// size() pairs of float64 (re, im) in storage order. Host byte order.
void write_field_binary(const SpectralField& field, const std::filesystem::path& path);
SpectralField read_field_binary(const std::filesystem::path& path);

// CSV: header "m1,..,md,re,im", one row per lattice point in storage order.
void write_field_csv(const SpectralField& field, std::ostream& out);

}  // namespace zakharov
