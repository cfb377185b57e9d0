#pragma once

#include "morse_lsm/contour.hpp"
#include "morse_lsm/param_field.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace morse_lsm {

/// Contours of several scales overlaid in the (α, D) rectangle: axes with
/// ticks, one <g class="levelset"> per scale with its own stroke, and a
/// legend. α runs along the horizontal axis, D along the vertical.
std::string render_levelsets_svg(const std::vector<LevelSet>& sets, const ParamGrid& frame,
                                 const std::string& title = "");
void write_levelsets_svg(const std::filesystem::path& path, const std::vector<LevelSet>& sets,
                         const ParamGrid& frame, const std::string& title = "");

} // namespace morse_lsm
