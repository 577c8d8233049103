#include "henonlab/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "henonlab/errors.hpp"

namespace henonlab::io {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string provenance_line(std::uint64_t config_hash, std::uint64_t seed) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "# henonlab %s config=%016llx seed=%llu",
                  kVersion, static_cast<unsigned long long>(config_hash),
                  static_cast<unsigned long long>(seed));
    return buf;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::FILE* open_or_throw(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    return fp;
}

} // namespace

CsvWriter::CsvWriter(const std::string& path, const std::string& provenance,
                     const std::vector<std::string>& columns)
    : ncols_(columns.size()), path_(path) {
    std::FILE* fp = open_or_throw(path);
    fp_ = fp;
    std::fprintf(fp, "%s\n", provenance.c_str());
    for (std::size_t i = 0; i < columns.size(); ++i)
        std::fprintf(fp, "%s%s", columns[i].c_str(), i + 1 < columns.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() {
    if (fp_) std::fclose(static_cast<std::FILE*>(fp_));
}

void CsvWriter::cell(const std::string& s) {
    auto* fp = static_cast<std::FILE*>(fp_);
    std::fprintf(fp, "%s%s", col_ > 0 ? "," : "", s.c_str());
    ++col_;
}

void CsvWriter::cell(double v) { cell(format_double(v)); }

void CsvWriter::cell(int v) { cell(std::to_string(v)); }

void CsvWriter::endrow() {
    if (col_ != ncols_)
        throw Error(ErrorKind::IoError,
                    "row in '" + path_ + "' has " + std::to_string(col_) +
                        " cells, expected " + std::to_string(ncols_));
    std::fprintf(static_cast<std::FILE*>(fp_), "\n");
    col_ = 0;
}

void CsvWriter::close() {
    if (!fp_) return;
    if (std::fclose(static_cast<std::FILE*>(fp_)) != 0) {
        fp_ = nullptr;
        throw Error(ErrorKind::IoError, "failed to flush '" + path_ + "'");
    }
    fp_ = nullptr;
}

void write_field_csv(const std::string& path, const std::string& provenance,
                     const mesh::Field& f) {
    const auto& g = *f.grid;
    const bool ball = g.kind == mesh::DomainKind::BallPolar;
    CsvWriter w(path, provenance,
                ball ? std::vector<std::string>{"rho", "sigma", "value"}
                     : std::vector<std::string>{"s", "t", "value"});
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            w.cell(g.c1[static_cast<std::size_t>(i)]);
            w.cell(g.c2[static_cast<std::size_t>(j)]);
            w.cell(f.at(i, j));
            w.endrow();
        }
    w.close();
}

namespace {

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols = {
        "alpha",   "quotient", "energy",     "max_value", "max_rho",
        "r_alpha", "alpha_gap", "iterations", "residual",  "converged"};
    return cols;
}

} // namespace

void write_sweep_csv(const std::string& path, const std::string& provenance,
                     const std::vector<asymptotics::SweepRecord>& records) {
    CsvWriter w(path, provenance, sweep_columns());
    for (const auto& r : records) {
        w.cell(r.alpha);
        w.cell(r.quotient);
        w.cell(r.energy);
        w.cell(r.max_value);
        w.cell(r.max_rho);
        w.cell(r.r_alpha);
        w.cell(r.alpha_gap);
        w.cell(r.iterations);
        w.cell(r.residual);
        w.cell(r.converged ? 1 : 0);
        w.endrow();
    }
    w.close();
}

std::vector<asymptotics::SweepRecord> read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "' for reading");
    std::string line;
    bool header_seen = false;
    std::vector<asymptotics::SweepRecord> out;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            std::string expected;
            for (std::size_t i = 0; i < sweep_columns().size(); ++i)
                expected += (i ? "," : "") + sweep_columns()[i];
            if (line != expected)
                throw Error(ErrorKind::IoError,
                            path + ":" + std::to_string(lineno) +
                                ": unexpected header '" + line + "'");
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        std::vector<double> vals;
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                vals.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw Error(ErrorKind::IoError,
                            path + ":" + std::to_string(lineno) +
                                ": cannot parse '" + tok + "' as a number");
            }
        }
        if (vals.size() != sweep_columns().size())
            throw Error(ErrorKind::IoError,
                        path + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(sweep_columns().size()) + " fields, got " +
                            std::to_string(vals.size()));
        asymptotics::SweepRecord r;
        r.alpha = vals[0];
        r.quotient = vals[1];
        r.energy = vals[2];
        r.max_value = vals[3];
        r.max_rho = vals[4];
        r.r_alpha = vals[5];
        r.alpha_gap = vals[6];
        r.iterations = static_cast<int>(vals[7]);
        r.residual = vals[8];
        r.converged = vals[9] != 0.0;
        out.push_back(r);
    }
    if (!header_seen)
        throw Error(ErrorKind::IoError, path + ": no header line found");
    return out;
}

void write_fits_csv(const std::string& path, const std::string& provenance,
                    const std::vector<asymptotics::FitResult>& fits) {
    CsvWriter w(path, provenance,
                {"quantity", "slope", "intercept", "r_squared", "target", "rel_dev"});
    for (const auto& f : fits) {
        w.cell(f.quantity);
        w.cell(f.slope);
        w.cell(f.intercept);
        w.cell(f.r_squared);
        w.cell(f.target);
        w.cell(f.rel_dev);
        w.endrow();
    }
    w.close();
}

void write_xy_dat(const std::string& path, const std::string& provenance,
                  const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw Error(ErrorKind::IoError, "xy data length mismatch for '" + path + "'");
    std::FILE* fp = open_or_throw(path);
    std::fprintf(fp, "%s\n", provenance.c_str());
    for (std::size_t i = 0; i < x.size(); ++i)
        std::fprintf(fp, "%s %s\n", format_double(x[i]).c_str(),
                     format_double(y[i]).c_str());
    std::fclose(fp);
}

} // namespace henonlab::io
