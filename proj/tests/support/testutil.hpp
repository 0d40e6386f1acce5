#pragma once

#include <filesystem>
#include <fstream>
#include <string>

namespace testutil {

// Fresh per-test-suite scratch directory under the system temp root.
inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("kcmap_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::filesystem::path write_file(const std::filesystem::path& path,
                                        const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Three-city gazetteer used by several suites: Lecce and Chieti under distinct
// provinces/regions, Pisa under a third province sharing Lecce's region shape.
inline std::string small_gazetteer() {
    return "code,level,name,parent_code,aliases\n"
           "LE01,lau,Lecce,P_LE,\n"
           "PI01,lau,Pisa,P_PI,\n"
           "CH01,lau,Chieti,P_CH,\n"
           "P_LE,nuts3,Lecce Province,R_PU,\n"
           "P_PI,nuts3,Pisa Province,R_TO,\n"
           "P_CH,nuts3,Chieti Province,R_AB,\n"
           "R_PU,nuts2,Apulia,M_S,\n"
           "R_TO,nuts2,Tuscany,M_C,\n"
           "R_AB,nuts2,Abruzzo,M_S,\n"
           "M_S,nuts1,South,,\n"
           "M_C,nuts1,Centre,,\n";
}

inline std::string small_population() {
    return "code,population,reference_year\n"
           "LE01,95000,2019\n"
           "PI01,90000,2019\n"
           "CH01,50000,2019\n";
}

} // namespace testutil
