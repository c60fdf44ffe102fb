#pragma once

#include <optional>
#include <string_view>

namespace codesim {

enum class Label {
    Clean = 0,
    Plagiarized = 1,
};

std::string_view to_string(Label label);

// Accepts "clean" / "plagiarized" (exact, lowercase).
std::optional<Label> label_from_string(std::string_view text);

}  // namespace codesim
