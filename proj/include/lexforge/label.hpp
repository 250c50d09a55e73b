#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace lexforge {

/// Three-way sentiment orientation. The underlying value is the signed form.
enum class Label : int { negative = -1, neutral = 0, positive = 1 };

/// Fixed category order used for tie-breaks and matrix layout.
inline constexpr std::array<Label, 3> kLabelOrder{Label::negative, Label::neutral, Label::positive};

constexpr int signed_value(Label l) noexcept { return static_cast<int>(l); }

/// Ordinal in kLabelOrder (negative=0, neutral=1, positive=2).
constexpr std::size_t label_index(Label l) noexcept { return static_cast<std::size_t>(signed_value(l) + 1); }

constexpr Label label_from_sign(long long v) noexcept {
    return v > 0 ? Label::positive : (v < 0 ? Label::negative : Label::neutral);
}

constexpr std::string_view to_string(Label l) noexcept {
    switch (l) {
    case Label::negative: return "negative";
    case Label::neutral: return "neutral";
    case Label::positive: return "positive";
    }
    return "neutral";
}

constexpr std::optional<Label> parse_label(std::string_view s) noexcept {
    if (s == "positive") return Label::positive;
    if (s == "neutral") return Label::neutral;
    if (s == "negative") return Label::negative;
    return std::nullopt;
}

} // namespace lexforge
