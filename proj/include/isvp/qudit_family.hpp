#pragma once

#include <string>
#include <string_view>

namespace isvp {

enum class QuditFamily { Hamming, Binary };

std::string_view to_string(QuditFamily f);
/// Accepts "ham", "hamming", "bin", "binary".
QuditFamily parse_family(std::string_view s);

}  // namespace isvp
