#pragma once

#include <string>
#include <vector>

#include "gln/model.hpp"

namespace gln {

/// GLNF1 container: 5-byte magic "GLNF1", u32 n, f64 L (both little-endian),
/// then n*n f64 values row-major per component (one component for a scalar
/// field, two for a vector field). Round-trips are bit-identical.
void write_field(const std::string& path, const ScalarField& f);
void write_field(const std::string& path, const VectorField2& f);

/// Throw std::runtime_error("not a GLNF1 file") on a bad magic and
/// std::runtime_error("truncated payload") when the payload length does not
/// match the header.
ScalarField read_scalar_field(const std::string& path);
VectorField2 read_vector_field(const std::string& path);

/// Columns x, y, u1, u2, |u| with 17 significant digits; '#' header lines
/// carry grid metadata.
void write_field_csv(const std::string& path, const VectorField2& f);

/// Two-column profile CSV (abscissa, value); extra '#' header lines may be
/// passed through `header`.
void write_profile_csv(const std::string& path,
                       const std::vector<double>& abscissa,
                       const std::vector<double>& value,
                       const std::vector<std::string>& header = {});

/// P6 quicklook: linear grayscale over [0, max(field)], optional 3x3 red
/// markers at the given physical locations.
void write_ppm(const std::string& path, const ScalarField& f,
               const std::vector<Vec2>& markers = {});

std::string format_g17(double v);

}  // namespace gln
