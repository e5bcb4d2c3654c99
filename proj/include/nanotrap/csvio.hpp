#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nanotrap::csv {

/// CSV writer with the project dialect: comma separator, '.' decimal,
/// scientific notation with 9 significant digits, LF line endings.
/// Output is byte-reproducible across runs and platforms.
class Writer {
public:
    /// Provenance header: "# scenario=<hash> seed=<seed> tool=<version>".
    void provenance(const std::string& scenario_hash, std::uint64_t seed);
    void comment(const std::string& text);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void raw_row(const std::string& line);

    const std::string& str() const { return buf_; }

    /// Atomic write: temp file in the target directory, then rename.
    void save(const std::string& path) const;

private:
    std::string buf_;
};

std::string format_value(double v);

} // namespace nanotrap::csv
