#pragma once

#include "pdecrl/config.hpp"
#include "pdecrl/field.hpp"

#include <iosfwd>
#include <string>

namespace pdecrl {

/// Plain-text field snapshot: a metadata header, then row-major values.
void write_field_snapshot(std::ostream& os, const Field& field, double t);
Field read_field_snapshot(std::istream& is, double* t_out = nullptr);

void write_field_snapshot_file(const std::string& path, const Field& field, double t);

/// Run manifest: job kind, library version, seed, and the fully resolved
/// config echo. Written before any computation starts.
void write_manifest(const std::string& path, const ExperimentConfig& cfg, const std::string& job,
                    const std::string& extra = "");

const char* library_version();

} // namespace pdecrl
