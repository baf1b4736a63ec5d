#pragma once

#include <iosfwd>

#include "vlc/scene_config.hpp"

/// Quick consistency checks on a scene; one PASS/FAIL line each.
bool run_validation(const vlc::SceneSpec& spec, std::ostream& out);
