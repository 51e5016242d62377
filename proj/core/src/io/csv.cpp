// SPDX-License-Identifier: Apache-2.0
#include "langsim/io/csv.hpp"

#include <fmt/format.h>

#include <fstream>
#include <stdexcept>

namespace langsim::io {

std::string isotherm_csv(const ldft::IsothermCurve& curve) {
    std::string out = "rh,density\n";
    for (const auto& p : curve.points) out += fmt::format("{:.6g},{}\n", p.rh, p.mean_density);
    return out;
}

std::string hysteresis_csv(const ldft::HysteresisLoop& loop) {
    std::string out = "rh,density_ads,density_des\n";
    const auto& ads = loop.adsorption.points;
    for (std::size_t i = 0; i < ads.size(); ++i) {
        out += fmt::format("{:.6g},{},{}\n", ads[i].rh, ads[i].mean_density, loop.desorption_at(i));
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
        out << body;
        out.flush();
        if (!out) throw std::runtime_error(fmt::format("write to {} failed", tmp.string()));
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace langsim::io
