#include "codesim/label.hpp"

namespace codesim {

std::string_view to_string(Label label) {
    return label == Label::Plagiarized ? "plagiarized" : "clean";
}

std::optional<Label> label_from_string(std::string_view text) {
    if (text == "plagiarized") return Label::Plagiarized;
    if (text == "clean") return Label::Clean;
    return std::nullopt;
}

}  // namespace codesim
