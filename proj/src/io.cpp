#include "nbv/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nbv {

std::string field_to_csv(const ScalarField& u) {
    std::string out;
    char buf[40];
    const auto& d = u.domain;
    for (int j = 0; j < d.ny; ++j) {
        for (int i = 0; i < d.nx; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", u.at(i, j));
            out += buf;
            out += (i + 1 < d.nx) ? ',' : '\n';
        }
    }
    return out;
}

ScalarField field_from_csv(const std::string& text, double h) {
    std::vector<std::vector<double>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("field_from_csv: no data");
    const int ny = static_cast<int>(rows.size());
    const int nx = static_cast<int>(rows.front().size());
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != nx)
            throw std::runtime_error("field_from_csv: ragged rows");
    ScalarField u(DiscreteDomain(nx, ny, h));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) u.at(i, j) = rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return u;
}

std::string field_to_pgm(const ScalarField& u) {
    const auto& d = u.domain;
    double lo = u.values.empty() ? 0.0 : u.values.front();
    double hi = lo;
    for (double v : u.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    std::ostringstream os;
    os << "P2\n" << d.nx << " " << d.ny << "\n255\n";
    for (int j = 0; j < d.ny; ++j) {
        for (int i = 0; i < d.nx; ++i) {
            const int level =
                span > 0.0 ? static_cast<int>(255.0 * (u.at(i, j) - lo) / span + 0.5) : 0;
            os << level << (i + 1 < d.nx ? ' ' : '\n');
        }
    }
    return os.str();
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001B3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016" PRIx64, hash);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open for writing: " + tmp.string());
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

} // namespace nbv
