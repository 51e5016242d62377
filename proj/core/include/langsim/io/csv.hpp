// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "langsim/ldft/sweep.hpp"

namespace langsim::io {

/// `rh,density` rows. RH carries 6 significant digits, densities the
/// shortest text that round-trips.
std::string isotherm_csv(const ldft::IsothermCurve& curve);

/// `rh,density_ads,density_des` rows in ascending RH.
std::string hysteresis_csv(const ldft::HysteresisLoop& loop);

/// Writes via a temporary sibling and rename.
void write_text_file(const std::filesystem::path& path, const std::string& body);

}  // namespace langsim::io
