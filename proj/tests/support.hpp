#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include <json.hpp>

#include "hemtqc/config.hpp"

namespace support {

/// Table-1 device + calibrated matching/bath defaults as a JSON document.
inline nlohmann::json default_config_doc() {
    nlohmann::json doc;
    doc["device"] = {{"rg", 0.3}, {"lg", 75e-12}, {"ld", 70e-12},
                     {"cgs", 107e-15}, {"cds", 51e-15}, {"cgd", 60e-15},
                     {"ri", 0.07}, {"rj", 8.0}, {"gd", 12e-3}, {"gm", 82e-3},
                     {"vg", 0.03}, {"vd", 0.06}};
    return doc;
}

class TempFile {
public:
    explicit TempFile(const std::string& contents, const std::string& suffix = ".json") {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path()
            / ("hemtqc_test_" + std::to_string(::getpid()) + "_"
               + std::to_string(counter++) + suffix);
        std::ofstream out(path_, std::ios::binary);
        out << contents;
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    const std::string path() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

}  // namespace support
