#pragma once

// Internal JSON encoding shared by the trajectory writer and the session
// protocol. Not installed.

#include <nlohmann/json.hpp>

#include "mcrowds/frame.hpp"

namespace mcrowds::detail {

using ojson = nlohmann::ordered_json;

ojson frame_object(const FrameRecord& frame);
FrameRecord frame_from_object(const nlohmann::json& j);

}  // namespace mcrowds::detail
