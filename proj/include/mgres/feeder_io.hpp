#pragma once

#include <string>

#include "mgres/network.hpp"

namespace mgres {

/// Parses a feeder document (JSON text, schema in docs/formats.md) into a
/// validated NetworkModel with all quantities converted to per-unit.
/// Throws std::invalid_argument on schema, referential or phase errors.
NetworkModel parse_feeder(const std::string& text);

/// Reads the file then delegates to parse_feeder.
NetworkModel load_feeder_file(const std::string& path);

}  // namespace mgres
