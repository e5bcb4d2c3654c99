#include "nanotrap/csvio.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace nanotrap::csv {

namespace {
constexpr const char* kToolVersion = "1.0.0";
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.8e", v);
    return buf;
}

void Writer::provenance(const std::string& scenario_hash, std::uint64_t seed) {
    buf_ += "# scenario=" + scenario_hash + " seed=" + std::to_string(seed) +
            " tool=nanotrap-" + kToolVersion + "\n";
}

void Writer::comment(const std::string& text) { buf_ += "# " + text + "\n"; }

void Writer::header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += columns[i];
    }
    buf_ += '\n';
}

void Writer::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += format_value(values[i]);
    }
    buf_ += '\n';
}

void Writer::raw_row(const std::string& line) {
    buf_ += line;
    buf_ += '\n';
}

void Writer::save(const std::string& path) const {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    }
    fs::rename(tmp, target);
}

} // namespace nanotrap::csv
