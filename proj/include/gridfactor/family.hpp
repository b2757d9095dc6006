#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridfactor {

// The three graph families: rectangle P_m x P_n, thick cylinder P_m x C_n,
// and the Moebius strip (cylinder glued with a row flip).
enum class Family { Rect, Cylinder, Moebius };

inline std::string family_token(Family f) {
    switch (f) {
        case Family::Rect: return "rg";
        case Family::Cylinder: return "tkc";
        case Family::Moebius: return "ms";
    }
    return {};
}

inline Family family_from_token(std::string_view s) {
    if (s == "rg") return Family::Rect;
    if (s == "tkc") return Family::Cylinder;
    if (s == "ms") return Family::Moebius;
    throw std::invalid_argument("unknown family: " + std::string(s) +
                                " (expected rg, tkc or ms)");
}

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gridfactor
