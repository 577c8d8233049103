#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "henonlab/asymptotics.hpp"
#include "henonlab/mesh.hpp"
#include "henonlab/solver.hpp"

// Deterministic output files. Every CSV starts with one provenance comment
// (tool version + config hash + seed — no timestamps, so identical runs are
// byte-identical) followed by a header line. Doubles print as %.12g.

namespace henonlab::io {

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a64(const std::string& bytes);

/// "# henonlab <version> config=<hex> seed=<seed>"
std::string provenance_line(std::uint64_t config_hash, std::uint64_t seed);

std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& provenance,
              const std::vector<std::string>& columns);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void cell(const std::string& s);
    void cell(double v);
    void cell(int v);
    void endrow();
    void close();

private:
    void* fp_ = nullptr;
    std::size_t col_ = 0;
    std::size_t ncols_ = 0;
    std::string path_;
};

/// rho (or s), sigma (or t), value; row-major by radial index.
void write_field_csv(const std::string& path, const std::string& provenance,
                     const mesh::Field& f);

void write_sweep_csv(const std::string& path, const std::string& provenance,
                     const std::vector<asymptotics::SweepRecord>& records);

/// Parses a sweep CSV written by write_sweep_csv (comment lines skipped).
std::vector<asymptotics::SweepRecord> read_sweep_csv(const std::string& path);

void write_fits_csv(const std::string& path, const std::string& provenance,
                    const std::vector<asymptotics::FitResult>& fits);

/// Two-column gnuplot-ready data file.
void write_xy_dat(const std::string& path, const std::string& provenance,
                  const std::vector<double>& x, const std::vector<double>& y);

} // namespace henonlab::io
